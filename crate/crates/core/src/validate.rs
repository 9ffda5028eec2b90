//! Axiom checks for presentations, evaluated exactly on all basis pairs and
//! triples.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::presentation::{add_into, AlgebraPresentation};
use crate::scalar::Q;
use crate::weights::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(c) => Err(Error::Rejected {
                axiom: c.axiom.to_string(),
                witness: c.witness.clone().unwrap_or_default(),
            }),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "{:<24} {}", c.axiom, if c.passed { "pass" } else { "FAIL" })?,
                Some(w) => writeln!(f, "{:<24} FAIL  witness: {}", c.axiom, w)?,
            }
        }
        Ok(())
    }
}

type Tensor2 = BTreeMap<(usize, usize), Q>;
type Tensor3 = BTreeMap<(usize, usize, usize), Q>;

struct Checker<'a> {
    h: &'a AlgebraPresentation,
    checks: Vec<AxiomCheck>,
}

impl<'a> Checker<'a> {
    fn record(&mut self, axiom: &'static str, witness: Option<String>) {
        self.checks.push(AxiomCheck { axiom, passed: witness.is_none(), witness });
    }

    fn name(&self, i: usize) -> &str {
        self.h.id(i)
    }

    fn odd(&self, i: usize) -> bool {
        self.h.is_odd(i)
    }

    fn mult_axioms(&mut self) {
        let h = self.h;
        let dim = h.dim();
        let d = h.degree_d();
        let g = h.group();

        let mut witness = None;
        'deg: for a in 0..dim {
            for b in 0..dim {
                for (o, _) in h.mult_basis(a, b) {
                    if h.degree(*o) != h.degree(a) + h.degree(b) + d {
                        witness = Some(format!("{}·{} -> {}", self.name(a), self.name(b), self.name(*o)));
                        break 'deg;
                    }
                }
            }
        }
        self.record("degree-additivity", witness);

        let mut witness = None;
        'wt: for a in 0..dim {
            for b in 0..dim {
                for (o, _) in h.mult_basis(a, b) {
                    if h.weight(*o) != g.add(h.weight(a), h.weight(b)) {
                        witness = Some(format!("{}·{} -> {}", self.name(a), self.name(b), self.name(*o)));
                        break 'wt;
                    }
                }
            }
        }
        self.record("weight-additivity", witness);

        let unit: BTreeMap<usize, Q> = h.unit_coords().iter().cloned().collect();
        let mut witness = None;
        for i in unit.keys() {
            if h.degree(*i) != -d || h.weight(*i) != Weight::ZERO {
                witness = Some(format!("unit component {} has degree/weight off", self.name(*i)));
            }
        }
        if witness.is_none() {
            for x in 0..dim {
                let xv: BTreeMap<usize, Q> = [(x, Q::one())].into_iter().collect();
                if h.mul_coords(&unit, &xv) != xv || h.mul_coords(&xv, &unit) != xv {
                    witness = Some(format!("1·{} != {} or {}·1 != {}", self.name(x), self.name(x), self.name(x), self.name(x)));
                    break;
                }
            }
        }
        self.record("unit", witness);

        let mut witness = None;
        'assoc: for a in 0..dim {
            for b in 0..dim {
                let ab: BTreeMap<usize, Q> = h.mult_basis(a, b).iter().cloned().collect();
                for c in 0..dim {
                    let cv: BTreeMap<usize, Q> = [(c, Q::one())].into_iter().collect();
                    let bc: BTreeMap<usize, Q> = h.mult_basis(b, c).iter().cloned().collect();
                    let av: BTreeMap<usize, Q> = [(a, Q::one())].into_iter().collect();
                    if h.mul_coords(&ab, &cv) != h.mul_coords(&av, &bc) {
                        witness = Some(format!("({}, {}, {})", self.name(a), self.name(b), self.name(c)));
                        break 'assoc;
                    }
                }
            }
        }
        self.record("associativity", witness);

        let mut witness = None;
        'comm: for a in 0..dim {
            for b in 0..dim {
                let sign = self.odd(a) && self.odd(b);
                let ab: BTreeMap<usize, Q> = h.mult_basis(a, b).iter().cloned().collect();
                let ba: BTreeMap<usize, Q> =
                    h.mult_basis(b, a).iter().map(|(o, c)| (*o, c.clone().signed(sign))).collect();
                if ab != ba {
                    witness = Some(format!("({}, {})", self.name(a), self.name(b)));
                    break 'comm;
                }
            }
        }
        self.record("graded-commutativity", witness);
    }

    fn integral_axioms(&mut self) {
        let h = self.h;
        let Some(integral) = h.integral() else { return };
        let mut witness = None;
        for (i, c) in integral.iter().enumerate() {
            if !c.is_zero() && (h.degree(i) != h.degree_d() || h.weight(i) != Weight::ZERO) {
                witness = Some(format!("∫{} = {} off degree {} / weight 0", self.name(i), c, h.degree_d()));
                break;
            }
        }
        self.record("integral-degree", witness);

        let mut witness = None;
        for w in h.group().elements() {
            if let Err(e) = h.dual_basis(w) {
                witness = Some(format!("{}", e));
                break;
            }
        }
        self.record("perfect-pairing", witness);
    }

    fn coproduct_of(&self, cop: &[(usize, usize, Q)]) -> Tensor2 {
        let mut out = BTreeMap::new();
        for (a, b, c) in cop {
            add_into(&mut out, (*a, *b), c.clone());
        }
        out
    }

    /// Checks coassociativity and cocommutativity of a coproduct table of the
    /// given degree; returns witnesses.
    fn coalgebra_laws(
        &self,
        table: &[Vec<(usize, usize, Q)>],
        op_degree: i32,
    ) -> (Option<String>, Option<String>, Option<String>, Option<String>) {
        let h = self.h;
        let g = h.group();
        let mut deg_w = None;
        let mut wt_w = None;
        for (x, cop) in table.iter().enumerate() {
            for (a, b, _) in cop {
                if deg_w.is_none() && h.degree(*a) + h.degree(*b) != h.degree(x) + op_degree {
                    deg_w = Some(format!("{} -> {} ⊗ {}", self.name(x), self.name(*a), self.name(*b)));
                }
                if wt_w.is_none() && g.add(h.weight(*a), h.weight(*b)) != h.weight(x) {
                    wt_w = Some(format!("{} -> {} ⊗ {}", self.name(x), self.name(*a), self.name(*b)));
                }
            }
        }
        let mut coassoc = None;
        let mut cocomm = None;
        for (x, cop) in table.iter().enumerate() {
            let mut left: Tensor3 = BTreeMap::new();
            let mut right: Tensor3 = BTreeMap::new();
            for (a, b, c) in cop {
                for (a1, a2, k) in &table[*a] {
                    add_into(&mut left, (*a1, *a2, *b), c * k);
                }
                // the coproduct passes the first leg
                let odd = (op_degree * h.degree(*a)) % 2 != 0;
                for (b1, b2, k) in &table[*b] {
                    add_into(&mut right, (*a, *b1, *b2), (c * k).signed(odd));
                }
            }
            if coassoc.is_none() && left != right {
                coassoc = Some(self.name(x).to_string());
            }
            let direct = self.coproduct_of(cop);
            let mut swapped = BTreeMap::new();
            for (a, b, c) in cop {
                add_into(&mut swapped, (*b, *a), c.clone().signed(self.odd(*a) && self.odd(*b)));
            }
            if cocomm.is_none() && direct != swapped {
                cocomm = Some(self.name(x).to_string());
            }
        }
        (deg_w, wt_w, coassoc, cocomm)
    }

    fn diagonal_axioms(&mut self) {
        let h = self.h;
        if !h.has_diagonal() {
            return;
        }
        let table: Vec<Vec<(usize, usize, Q)>> =
            (0..h.dim()).map(|x| h.diagonal_of_basis(x).expect("present").to_vec()).collect();
        let (deg_w, wt_w, coassoc, cocomm) = self.coalgebra_laws(&table, h.degree_d());
        self.record("diagonal-degree", deg_w);
        self.record("diagonal-weight", wt_w);
        self.record("coassociativity", coassoc);
        self.record("cocommutativity", cocomm);

        // Δ(x·y) = (x ⊗ 1)·Δ(y)
        let mut witness = None;
        'module: for x in 0..h.dim() {
            for y in 0..h.dim() {
                let mut lhs: Tensor2 = BTreeMap::new();
                for (o, c) in h.mult_basis(x, y) {
                    for (a, b, k) in &table[*o] {
                        add_into(&mut lhs, (*a, *b), c * k);
                    }
                }
                let mut rhs: Tensor2 = BTreeMap::new();
                for (a, b, k) in &table[y] {
                    for (xa, c) in h.mult_basis(x, *a) {
                        add_into(&mut rhs, (*xa, *b), c * k);
                    }
                }
                if lhs != rhs {
                    witness = Some(format!("({}, {})", self.name(x), self.name(y)));
                    break 'module;
                }
            }
        }
        self.record("diagonal-module", witness);
    }

    fn hopf_axioms(&mut self) {
        let h = self.h;
        let Some(hopf) = h.hopf() else { return };
        let d = h.degree_d();
        let (deg_w, wt_w, coassoc, cocomm) = self.coalgebra_laws(&hopf.delta, -d);
        self.record("hopf-degree", deg_w.or(wt_w));
        self.record("hopf-coassociativity", coassoc);
        self.record("hopf-cocommutativity", cocomm);

        let eps = &hopf.epsilon;
        let mut witness = None;
        for (i, c) in eps.iter().enumerate() {
            if !c.is_zero() && (h.degree(i) != -d || h.weight(i) != Weight::ZERO) {
                witness = Some(format!("ε({}) = {} off degree {}", self.name(i), c, -d));
            }
        }
        if witness.is_none() {
            for (x, cop) in hopf.delta.iter().enumerate() {
                let mut left: BTreeMap<usize, Q> = BTreeMap::new();
                let mut right: BTreeMap<usize, Q> = BTreeMap::new();
                for (a, b, c) in cop {
                    add_into(&mut left, *b, c * &eps[*a]);
                    add_into(&mut right, *a, c * &eps[*b]);
                }
                let xv: BTreeMap<usize, Q> = [(x, Q::one())].into_iter().collect();
                if left != xv || right != xv {
                    witness = Some(format!("(ε ⊗ id)δ({}) != {}", self.name(x), self.name(x)));
                    break;
                }
            }
        }
        self.record("counit", witness);

        // δ(xy) = δ(x)δ(y), ε(xy) = ε(x)ε(y), with (a⊗b)(c⊗e) = ±(ac)⊗(be)
        let mut witness = None;
        let unit: BTreeMap<usize, Q> = h.unit_coords().iter().cloned().collect();
        let mut unit_delta: Tensor2 = BTreeMap::new();
        let mut unit_eps = Q::zero();
        for (u, c) in &unit {
            for (a, b, k) in &hopf.delta[*u] {
                add_into(&mut unit_delta, (*a, *b), c * k);
            }
            unit_eps += c * &eps[*u];
        }
        let mut one_one: Tensor2 = BTreeMap::new();
        for (u, c) in &unit {
            for (v, k) in &unit {
                add_into(&mut one_one, (*u, *v), c * k);
            }
        }
        if unit_delta != one_one || !unit_eps.is_one() {
            witness = Some("δ(1) != 1⊗1 or ε(1) != 1".to_string());
        }
        'hom: for x in 0..h.dim() {
            if witness.is_some() {
                break;
            }
            for y in 0..h.dim() {
                let mut lhs: Tensor2 = BTreeMap::new();
                let mut eps_xy = Q::zero();
                for (o, c) in h.mult_basis(x, y) {
                    for (a, b, k) in &hopf.delta[*o] {
                        add_into(&mut lhs, (*a, *b), c * k);
                    }
                    eps_xy += c * &eps[*o];
                }
                let mut rhs: Tensor2 = BTreeMap::new();
                for (a, b, k1) in &hopf.delta[x] {
                    for (c, e, k2) in &hopf.delta[y] {
                        let odd = self.odd(*b) && self.odd(*c);
                        let k = (k1 * k2).signed(odd);
                        for (ac, m1) in h.mult_basis(*a, *c) {
                            for (be, m2) in h.mult_basis(*b, *e) {
                                add_into(&mut rhs, (*ac, *be), &k * &(m1 * m2));
                            }
                        }
                    }
                }
                if lhs != rhs || eps_xy != &eps[x] * &eps[y] {
                    witness = Some(format!("({}, {})", self.name(x), self.name(y)));
                    break 'hom;
                }
            }
        }
        self.record("hopf-multiplicative", witness);
    }
}

/// Evaluates every applicable axiom; see [`ValidationReport::into_result`].
pub fn validate(h: &AlgebraPresentation) -> ValidationReport {
    let mut c = Checker { h, checks: Vec::new() };
    c.mult_axioms();
    c.integral_axioms();
    c.diagonal_axioms();
    c.hopf_axioms();
    ValidationReport { checks: c.checks }
}
