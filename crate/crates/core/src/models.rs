//! Built-in presentations.
//!
//! Intersection forms are chosen to be compatible with the Hodge bidegrees
//! (a hyperbolic pair for the classes of bidegree `(1,-1)`/`(-1,1)`, identity
//! elsewhere) rather than the geometric lattices; every dimension, Hodge
//! number and relation check in this crate is insensitive to that choice.

use num_traits::One;

use crate::error::{Error, Result};
use crate::presentation::{AlgebraPresentation, Element, PresentationBuilder};
use crate::scalar::Q;
use crate::weights::{Weight, WeightGroup};

pub const MODEL_NAMES: [&str; 6] = ["point", "toy-sphere", "toy-plane", "k3", "abelian", "enriques-z2"];

#[derive(Debug, Clone)]
pub struct Model {
    pub name: &'static str,
    pub note: &'static str,
    /// Presentation with its diagonal filled in.
    pub presentation: AlgebraPresentation,
    /// Canonical class in `A(0)` (degree 0), used by the boundary operator.
    pub canonical_class: Option<Element>,
}

pub fn model(name: &str) -> Result<Model> {
    let (note, b): (&'static str, PresentationBuilder) = match name {
        "point" => ("a point: d = 0, one basis vector; its Hilbert algebras are class algebras", point()),
        "toy-sphere" => ("basis 1, p with ∫p = 1; trivial weights; canonical class taken to be 0", toy_sphere()),
        "toy-plane" => (
            "plane-like variant: basis 1, h, p with h·h = p, ∫p = 1; canonical class −3h",
            toy_plane(),
        ),
        "k3" => (
            "1, t1..t22 in degree 0, v in degree 2; t1·t2 = v (bidegrees (1,-1), (-1,1)), \
             ti·ti = v for i ≥ 3; identity-type form instead of the K3 lattice",
            k3(),
        ),
        "abelian" => (
            "exterior algebra on odd a1..a4 with ∫a1234 = 1; Hopf structure with primitive \
             generators; trivial weighting (see abelian_with_torsion for (ℤ/n)^4)",
            abelian(WeightGroup::trivial()),
        ),
        "enriques-z2" => (
            "ℤ/2-weighted: weight 0 is 1, t1..t10, v with ti·tj = δij v; weight L is u1..u12 in \
             degree 0 with u1·u12 = v, ua·ua = v otherwise; t·u = v·u = 0",
            enriques(),
        ),
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    let name = MODEL_NAMES.iter().copied().find(|n| *n == name).expect("listed");
    let presentation = b.build()?.with_diagonal()?;
    let canonical_class = match name {
        "toy-plane" => {
            let h = presentation.index_of("h").expect("basis vector h");
            Some(presentation.element([(h, Q::from_int(-3))]))
        }
        _ => None,
    };
    Ok(Model { name, note, presentation, canonical_class })
}

/// The abelian-surface model weighted trivially by `(ℤ/n)^4`.
pub fn abelian_with_torsion(n: u32) -> Result<AlgebraPresentation> {
    abelian(WeightGroup::finite_abelian(&[n; 4])?).build()?.with_diagonal()
}

fn one() -> Q {
    Q::one()
}

fn point() -> PresentationBuilder {
    let mut b = PresentationBuilder::new(0, WeightGroup::trivial());
    b.basis("1", 0, Weight::ZERO, Some((0, 0)))
        .unit("1", one())
        .mult("1", "1", "1", one())
        .integral("1", one());
    b
}

/// Adds `1` (unit, degree −2) and the top class `top` (degree 2), with the
/// unit acting on every listed basis vector.
fn surface_frame(b: &mut PresentationBuilder, top: &str, ids: &[String]) {
    b.unit("1", one()).integral(top, one());
    for id in ids {
        b.mult("1", id, id, one());
        if id != "1" {
            b.mult(id, "1", id, one());
        }
    }
}

fn toy_sphere() -> PresentationBuilder {
    let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
    b.basis("1", -2, Weight::ZERO, Some((-1, -1))).basis("p", 2, Weight::ZERO, Some((1, 1)));
    surface_frame(&mut b, "p", &["1".into(), "p".into()]);
    b
}

fn toy_plane() -> PresentationBuilder {
    let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
    b.basis("1", -2, Weight::ZERO, Some((-1, -1)))
        .basis("h", 0, Weight::ZERO, Some((0, 0)))
        .basis("p", 2, Weight::ZERO, Some((1, 1)));
    surface_frame(&mut b, "p", &["1".into(), "h".into(), "p".into()]);
    b.mult("h", "h", "p", one());
    b
}

fn k3() -> PresentationBuilder {
    let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
    b.basis("1", -2, Weight::ZERO, Some((-1, -1)));
    let mut ids = vec!["1".to_string()];
    for i in 1..=22 {
        let bideg = match i {
            1 => (1, -1),
            2 => (-1, 1),
            _ => (0, 0),
        };
        let id = format!("t{}", i);
        b.basis(&id, 0, Weight::ZERO, Some(bideg));
        ids.push(id);
    }
    b.basis("v", 2, Weight::ZERO, Some((1, 1)));
    ids.push("v".into());
    surface_frame(&mut b, "v", &ids);
    b.mult("t1", "t2", "v", one()).mult("t2", "t1", "v", one());
    for i in 3..=22 {
        let id = format!("t{}", i);
        b.mult(&id, &id, "v", one());
    }
    b
}

fn subset_id(s: u8) -> String {
    if s == 0 {
        return "1".into();
    }
    let digits: String = (0..4).filter(|i| s & (1 << i) != 0).map(|i| char::from(b'1' + i)).collect();
    format!("a{}", digits)
}

/// Sign of `a_S · a_T` relative to `a_{S∪T}`: one flip per pair `s ∈ S`,
/// `t ∈ T` with `s > t`.
fn shuffle_sign(s: u8, t: u8) -> Q {
    let mut flips = 0;
    for i in 0..4 {
        if s & (1 << i) != 0 {
            flips += (t & ((1 << i) - 1)).count_ones();
        }
    }
    Q::one().signed(flips % 2 == 1)
}

fn abelian(group: WeightGroup) -> PresentationBuilder {
    let mut b = PresentationBuilder::new(2, group);
    for s in 0u8..16 {
        let k = s.count_ones() as i32;
        let holo = (s & 0b0011).count_ones() as i32;
        let anti = (s & 0b1100).count_ones() as i32;
        // unit (-1,-1); a1, a2 add (1,0) and a3, a4 add (0,1)
        let bideg = (-1 + holo, -1 + anti);
        b.basis(&subset_id(s), k - 2, Weight::ZERO, Some(bideg));
    }
    b.unit("1", one()).integral("a1234", one());
    for s in 0u8..16 {
        for t in 0u8..16 {
            if s & t == 0 {
                b.mult(&subset_id(s), &subset_id(t), &subset_id(s | t), shuffle_sign(s, t));
            }
        }
    }
    for s in 0u8..16 {
        // δ(a_S) = Σ_{A ⊔ B = S} sign(A,B) a_A ⊗ a_B
        let mut a = s;
        loop {
            let rest = s & !a;
            b.hopf_delta(&subset_id(s), &subset_id(a), &subset_id(rest), shuffle_sign(a, rest));
            if a == 0 {
                break;
            }
            a = (a - 1) & s;
        }
    }
    b.hopf_epsilon("1", one());
    b
}

fn enriques() -> PresentationBuilder {
    let g = WeightGroup::periodic(2).expect("period 2");
    let l = g.default_level_generator();
    let mut b = PresentationBuilder::new(2, g);
    b.basis("1", -2, Weight::ZERO, Some((-1, -1)));
    let mut ids = vec!["1".to_string()];
    for i in 1..=10 {
        let id = format!("t{}", i);
        b.basis(&id, 0, Weight::ZERO, Some((0, 0)));
        ids.push(id);
    }
    b.basis("v", 2, Weight::ZERO, Some((1, 1)));
    ids.push("v".into());
    for a in 1..=12 {
        let bideg = match a {
            1 => (1, -1),
            12 => (-1, 1),
            _ => (0, 0),
        };
        let id = format!("u{}", a);
        b.basis(&id, 0, l, Some(bideg));
        ids.push(id);
    }
    surface_frame(&mut b, "v", &ids);
    for i in 1..=10 {
        let id = format!("t{}", i);
        b.mult(&id, &id, "v", one());
    }
    b.mult("u1", "u12", "v", one()).mult("u12", "u1", "v", one());
    for a in 2..=11 {
        let id = format!("u{}", a);
        b.mult(&id, &id, "v", one());
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate;
    use num_traits::Zero;

    #[test]
    fn catalog_validates() {
        for name in MODEL_NAMES {
            let m = model(name).unwrap();
            let r = validate(&m.presentation);
            assert!(r.passed(), "{}:\n{}", name, r);
        }
        assert!(validate(&abelian_with_torsion(2).unwrap()).passed());
        assert_eq!(model("nope").err(), Some(Error::UnknownModel("nope".into())));
    }

    #[test]
    fn euler_classes() {
        let cases = [("toy-sphere", "p", 2), ("toy-plane", "p", 3), ("k3", "v", 24), ("enriques-z2", "v", 12)];
        for (name, top, chi) in cases {
            let h = model(name).unwrap().presentation;
            let i = h.index_of(top).unwrap();
            assert_eq!(h.euler_class().unwrap(), h.element([(i, Q::from_int(chi))]), "{}", name);
        }
        let a = model("abelian").unwrap().presentation;
        assert_eq!(a.dim(), 16);
        assert!(a.euler_class().unwrap().is_zero());
    }

    #[test]
    fn enriques_weight_spaces() {
        let h = model("enriques-z2").unwrap().presentation;
        let l = h.group().default_level_generator();
        assert_eq!(h.basis_of_weight(Weight::ZERO).len(), 12);
        assert_eq!(h.basis_of_weight(l).len(), 12);
        let counts = h.bidegree_counts(l);
        let row: Vec<i64> = [(1, -1), (0, 0), (-1, 1)].iter().map(|k| counts[k]).collect();
        assert_eq!(row, vec![1, 10, 1]);
        let u: Vec<Element> = (1..=12).map(|a| h.element_by_id(&format!("u{}", a)).unwrap()).collect();
        assert_eq!(h.pair(&u[3], &u[3]).unwrap(), Q::one());
        assert_eq!(h.pair(&u[3], &u[4]).unwrap(), Q::zero());
        let t1 = h.element_by_id("t1").unwrap();
        assert!(h.multiply(&t1, &u[2]).unwrap().is_zero());
    }

    #[test]
    fn exterior_signs() {
        let h = model("abelian").unwrap().presentation;
        let a1 = h.element_by_id("a1").unwrap();
        let a2 = h.element_by_id("a2").unwrap();
        let a12 = h.element_by_id("a12").unwrap();
        assert_eq!(h.multiply(&a1, &a2).unwrap(), a12);
        assert_eq!(h.multiply(&a2, &a1).unwrap(), a12.scaled(&-Q::one()));
        assert!(h.multiply(&a1, &a1).unwrap().is_zero());
    }
}
