//! Presentation files: a JSON document keyed by basis ids, with rationals
//! written as strings (`"3"`, `"-1/2"`).
//!
//! ```json
//! {
//!   "degree_d": 2,
//!   "weight_group": { "kind": "integers_mod_period", "moduli": [1] },
//!   "basis": [ { "id": "1", "degree": -2, "weight": [0], "bidegree": [-1, -1] },
//!              { "id": "p", "degree": 2, "weight": [0], "bidegree": [1, 1] } ],
//!   "unit": [ { "id": "1", "coeff": "1" } ],
//!   "mult": [ { "a": "1", "b": "p", "out": "p", "coeff": "1" }, ... ],
//!   "integral": [ { "id": "p", "coeff": "1" } ],
//!   "diagonal": [ { "x": "1", "a": "1", "b": "p", "coeff": "1" }, ... ],
//!   "hopf": { "delta": [ ... same shape as diagonal ... ], "epsilon": [ ... ] }
//! }
//! ```
//!
//! `integral`, `diagonal` and `hopf` are optional; `bidegree` may be omitted.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{AlgebraPresentation, PresentationBuilder};
use crate::scalar::Q;
use crate::weights::{WeightGroup, WeightGroupKind};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupSpec {
    kind: WeightGroupKind,
    moduli: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BasisEntry {
    id: String,
    degree: i32,
    #[serde(default)]
    weight: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bidegree: Option<[i32; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Term {
    id: String,
    coeff: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MultEntry {
    a: String,
    b: String,
    out: String,
    coeff: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoEntry {
    x: String,
    a: String,
    b: String,
    coeff: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HopfSpec {
    delta: Vec<CoEntry>,
    epsilon: Vec<Term>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PresentationFile {
    degree_d: i32,
    weight_group: GroupSpec,
    basis: Vec<BasisEntry>,
    unit: Vec<Term>,
    mult: Vec<MultEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    integral: Option<Vec<Term>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    diagonal: Option<Vec<CoEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hopf: Option<HopfSpec>,
}

pub fn to_json(h: &AlgebraPresentation) -> String {
    let parts = h.parts();
    let g = &parts.group;
    let id = |i: usize| parts.basis[i].id.clone();
    let dim = parts.basis.len();
    let file = PresentationFile {
        degree_d: parts.degree_d,
        weight_group: GroupSpec { kind: g.kind(), moduli: g.moduli().to_vec() },
        basis: parts
            .basis
            .iter()
            .map(|b| BasisEntry {
                id: b.id.clone(),
                degree: b.degree,
                weight: g.coords(b.weight).into_iter().map(i64::from).collect(),
                bidegree: b.bidegree.map(|(p, q)| [p, q]),
            })
            .collect(),
        unit: parts.unit.iter().map(|(i, c)| Term { id: id(*i), coeff: c.clone() }).collect(),
        mult: (0..dim * dim)
            .flat_map(|k| {
                parts.mult[k].iter().map(move |(o, c)| (k / dim, k % dim, *o, c.clone()))
            })
            .map(|(a, b, o, coeff)| MultEntry { a: id(a), b: id(b), out: id(o), coeff })
            .collect(),
        integral: parts.integral.as_ref().map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| Term { id: id(i), coeff: c.clone() })
                .collect()
        }),
        diagonal: parts.diagonal.as_ref().map(|d| coproduct_entries(d, &id)),
        hopf: parts.hopf.as_ref().map(|hd| HopfSpec {
            delta: coproduct_entries(&hd.delta, &id),
            epsilon: hd
                .epsilon
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| Term { id: id(i), coeff: c.clone() })
                .collect(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("serialisable")
}

fn coproduct_entries(d: &[crate::presentation::Coproduct], id: &dyn Fn(usize) -> String) -> Vec<CoEntry> {
    d.iter()
        .enumerate()
        .flat_map(|(x, cop)| {
            cop.iter().map(move |(a, b, c)| CoEntry { x: id(x), a: id(*a), b: id(*b), coeff: c.clone() })
        })
        .collect()
}

/// Parses a presentation file. Structural problems are `Parse` errors; the
/// result is not validated.
pub fn from_json(text: &str) -> Result<AlgebraPresentation> {
    let file: PresentationFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let group = match file.weight_group.kind {
        WeightGroupKind::IntegersModPeriod => match file.weight_group.moduli.as_slice() {
            [k] => WeightGroup::periodic(*k)?,
            _ => return Err(Error::Parse("a periodic weight group has exactly one modulus".into())),
        },
        WeightGroupKind::FiniteAbelian => WeightGroup::finite_abelian(&file.weight_group.moduli)?,
    };
    let mut b = PresentationBuilder::new(file.degree_d, group.clone());
    for e in &file.basis {
        let weight = if e.weight.is_empty() {
            crate::weights::Weight::ZERO
        } else {
            group.from_coords(&e.weight)?
        };
        b.basis(&e.id, e.degree, weight, e.bidegree.map(|[p, q]| (p, q)));
    }
    for t in &file.unit {
        b.unit(&t.id, t.coeff.clone());
    }
    for m in &file.mult {
        b.mult(&m.a, &m.b, &m.out, m.coeff.clone());
    }
    if let Some(integral) = &file.integral {
        for t in integral {
            b.integral(&t.id, t.coeff.clone());
        }
    }
    if let Some(diag) = &file.diagonal {
        b.empty_diagonal();
        for e in diag {
            b.diagonal(&e.x, &e.a, &e.b, e.coeff.clone());
        }
    }
    if let Some(hopf) = &file.hopf {
        for e in &hopf.delta {
            b.hopf_delta(&e.x, &e.a, &e.b, e.coeff.clone());
        }
        for t in &hopf.epsilon {
            b.hopf_epsilon(&t.id, t.coeff.clone());
        }
    }
    b.build()
}

pub fn read_file(path: &std::path::Path) -> Result<AlgebraPresentation> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    from_json(&text)
}

impl PresentationBuilder {
    pub fn from_presentation(h: &AlgebraPresentation) -> PresentationBuilder {
        h.parts().to_builder()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{abelian_with_torsion, model, MODEL_NAMES};
    use crate::validate::validate;

    #[test]
    fn round_trip_catalog() {
        let mut all: Vec<AlgebraPresentation> =
            MODEL_NAMES.iter().map(|n| model(n).unwrap().presentation).collect();
        all.push(abelian_with_torsion(2).unwrap());
        for h in all {
            let text = to_json(&h);
            let back = from_json(&text).unwrap();
            assert_eq!(to_json(&back), text);
            assert_eq!(back.dim(), h.dim());
            assert!(validate(&back).passed());
        }
    }

    #[test]
    fn minimal_file() {
        let text = r#"{
            "degree_d": 2,
            "weight_group": { "kind": "integers_mod_period", "moduli": [1] },
            "basis": [ { "id": "1", "degree": -2 }, { "id": "p", "degree": 2 } ],
            "unit": [ { "id": "1", "coeff": "1" } ],
            "mult": [ { "a": "1", "b": "1", "out": "1", "coeff": "1" },
                      { "a": "1", "b": "p", "out": "p", "coeff": "1" },
                      { "a": "p", "b": "1", "out": "p", "coeff": "1" } ],
            "integral": [ { "id": "p", "coeff": "1" } ]
        }"#;
        let h = from_json(text).unwrap();
        assert!(validate(&h).passed());
        assert_eq!(h.with_diagonal().unwrap().euler_class().unwrap().coeff(1), Q::from_int(2));
        assert!(matches!(from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn bad_references_are_rejected() {
        let text = r#"{
            "degree_d": 0,
            "weight_group": { "kind": "integers_mod_period", "moduli": [1] },
            "basis": [ { "id": "1", "degree": 0 } ],
            "unit": [ { "id": "1", "coeff": "1" } ],
            "mult": [ { "a": "1", "b": "q", "out": "1", "coeff": "1" } ]
        }"#;
        assert!(matches!(from_json(text), Err(Error::Malformed(_))));
    }
}
