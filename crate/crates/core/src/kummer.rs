//! Generalised Kummer algebras `K^[n] = H^[n] / (φ(ker ε)·H^[n])` for a
//! Hopf presentation, where `φ(α) = δ^{(n)}(α)⟨id⟩`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockSpace;
use crate::hilbert::HilbertAlgebra;
use crate::linalg::{SparseEchelon, SparseVec};
use crate::perm::Permutation;
use crate::presentation::{add_into, AlgebraPresentation, PresentationBuilder};
use crate::scalar::Q;
use crate::weights::Weight;

pub struct KummerAlgebra {
    hilb: HilbertAlgebra,
    ideal: SparseEchelon,
    /// Invariant basis vectors of `H^[n]` not used as pivots.
    reps: Vec<usize>,
}

/// `δ^{(n)}(x)` as a list of `n`-leg tensors.
pub fn iterated_coproduct(h: &AlgebraPresentation, x: usize, n: usize) -> Result<Vec<(Vec<usize>, Q)>> {
    let hopf = h.hopf().ok_or(Error::NoHopf)?;
    if n == 0 {
        return Ok(vec![(Vec::new(), hopf.epsilon[x].clone())].into_iter().filter(|(_, c)| !c.is_zero()).collect());
    }
    let mut terms: BTreeMap<Vec<usize>, Q> = [(vec![x], Q::one())].into_iter().collect();
    for _ in 1..n {
        let mut next = BTreeMap::new();
        for (legs, c) in terms {
            // split the last leg; δ has even degree so no signs arise
            let (last, head) = legs.split_last().expect("nonempty");
            for (a, b, k) in &hopf.delta[*last] {
                let mut l = head.to_vec();
                l.push(*a);
                l.push(*b);
                add_into(&mut next, l, k * &c);
            }
        }
        terms = next;
    }
    Ok(terms.into_iter().collect())
}

impl KummerAlgebra {
    pub fn build(h: &AlgebraPresentation, n: usize) -> Result<KummerAlgebra> {
        if h.hopf().is_none() {
            return Err(Error::NoHopf);
        }
        if n == 0 {
            return Err(Error::Malformed("Kummer algebras need n ≥ 1".into()));
        }
        let hilb = HilbertAlgebra::build(h, n)?;
        let hp = hilb.presentation();
        let eps = &hp.hopf().expect("checked").epsilon;
        let pivot = (0..hp.dim()).find(|&i| !eps[i].is_zero()).ok_or(Error::NoHopf)?;
        // ker ε: x − ε(x)/ε(p)·p for x ≠ p
        let generators: Vec<BTreeMap<usize, Q>> = (0..hp.dim())
            .filter(|&x| x != pivot)
            .map(|x| {
                let mut g = hilb.invariant_coords(&phi(&hilb, x)?)?;
                if !eps[x].is_zero() {
                    let k = &eps[x] / &eps[pivot];
                    let p = hilb.invariant_coords(&phi(&hilb, pivot)?)?;
                    for (i, c) in p {
                        add_into(&mut g, i, -(c * &k));
                    }
                }
                Ok(g)
            })
            .collect::<Result<_>>()?;

        let d = hilb.dim();
        let products: Vec<SparseVec> = generators
            .par_iter()
            .flat_map_iter(|g| {
                let hilb = &hilb;
                (0..d).map(move |j| {
                    let e: BTreeMap<usize, Q> = [(j, Q::one())].into_iter().collect();
                    hilb.multiply_invariant(g, &e)
                })
            })
            .collect();
        let mut ideal = SparseEchelon::new();
        for v in products {
            if !v.is_empty() {
                ideal.insert(v);
            }
        }
        let reps = (0..d).filter(|&j| !ideal.is_pivot(j)).collect();
        Ok(KummerAlgebra { hilb, ideal, reps })
    }

    pub fn hilbert(&self) -> &HilbertAlgebra {
        &self.hilb
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[usize] {
        &self.reps
    }

    pub fn ideal_rank(&self) -> usize {
        self.ideal.rank()
    }

    /// Reduces invariant coordinates modulo the ideal; the result is supported
    /// on the representatives.
    pub fn reduce(&self, v: BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        self.ideal.reduce(v)
    }

    pub fn product(&self, a: usize, b: usize) -> BTreeMap<usize, Q> {
        let x: BTreeMap<usize, Q> = [(self.reps[a], Q::one())].into_iter().collect();
        let y: BTreeMap<usize, Q> = [(self.reps[b], Q::one())].into_iter().collect();
        self.reduce(self.hilb.multiply_invariant(&x, &y))
    }

    /// Dimensions by degree (summed over weights).
    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &r in &self.reps {
            *out.entry(self.hilb.invariants()[r].degree).or_insert(0) += 1;
        }
        out
    }

    pub fn dims(&self) -> BTreeMap<(Weight, i32), usize> {
        let mut out = BTreeMap::new();
        for &r in &self.reps {
            let inv = &self.hilb.invariants()[r];
            *out.entry((inv.weight, inv.degree)).or_insert(0) += 1;
        }
        out
    }

    /// Checks that the ideal absorbs products: `(φ(x)·v_j)·v_k` reduces to
    /// zero for every ideal row and a sample of `v_k`.
    pub fn check_ideal(&self, sample: usize) -> bool {
        let d = self.hilb.dim();
        let step = (d / sample.max(1)).max(1);
        let rows: Vec<usize> = self.ideal.pivots().collect();
        rows.par_iter().all(|&p| {
            let row = self.ideal.row(p).expect("pivot").clone();
            (0..d).step_by(step).all(|k| {
                let e: BTreeMap<usize, Q> = [(k, Q::one())].into_iter().collect();
                self.reduce(self.hilb.multiply_invariant(&row, &e)).is_empty()
            })
        })
    }

    /// `K^[n]` as a presentation with basis `k<j>` (one per representative),
    /// unit and multiplication; no integral.
    pub fn to_presentation(&self) -> Result<AlgebraPresentation> {
        let hp = self.hilb.presentation();
        let n = self.hilb.n() as i32;
        let mut b = PresentationBuilder::new(n * hp.degree_d(), hp.group().clone());
        let pos: HashMap<usize, usize> = self.reps.iter().enumerate().map(|(a, &r)| (r, a)).collect();
        let id = |a: usize| format!("k{}", a);
        for (a, &r) in self.reps.iter().enumerate() {
            let inv = &self.hilb.invariants()[r];
            b.basis(&id(a), inv.degree, inv.weight, None);
        }
        for (r, c) in self.reduce(self.hilb.unit_invariant_coords()) {
            b.unit(&id(pos[&r]), c);
        }
        for a in 0..self.reps.len() {
            for c in 0..self.reps.len() {
                for (r, k) in self.product(a, c) {
                    b.mult(&id(a), &id(c), &id(pos[&r]), k);
                }
            }
        }
        b.build()
    }

    /// The Leray identity `Σ_L dim Fock_L(n)_k = Σ_{a+b+d=k} h_a · dim K^[n]_b`,
    /// per degree. Returns `(degree, lhs, rhs)` rows.
    pub fn leray_rows(&self) -> Result<Vec<(i32, u64, u64)>> {
        let hp = self.hilb.presentation();
        let n = self.hilb.n() as i64;
        let mut lhs: BTreeMap<i32, u64> = BTreeMap::new();
        for l in hp.group().elements() {
            let fock = FockSpace::new(hp, l)?;
            for ((w, k), c) in fock.dimensions(n) {
                if w == n {
                    *lhs.entry(k).or_insert(0) += c;
                }
            }
        }
        let mut h_dims: BTreeMap<i32, u64> = BTreeMap::new();
        for i in 0..hp.dim() {
            *h_dims.entry(hp.degree(i)).or_insert(0) += 1;
        }
        let mut rhs: BTreeMap<i32, u64> = BTreeMap::new();
        for (a, ha) in &h_dims {
            for (b, kb) in self.dims_by_degree() {
                *rhs.entry(a + b + hp.degree_d()).or_insert(0) += ha * kb as u64;
            }
        }
        let degrees: std::collections::BTreeSet<i32> = lhs.keys().chain(rhs.keys()).copied().collect();
        Ok(degrees
            .into_iter()
            .map(|k| (k, lhs.get(&k).copied().unwrap_or(0), rhs.get(&k).copied().unwrap_or(0)))
            .collect())
    }
}

/// `φ(x) = δ^{(n)}(x)⟨id⟩` for a basis vector `x` of the algebra's presentation.
pub fn phi(alg: &HilbertAlgebra, x: usize) -> Result<crate::hilbert::HilbertElement> {
    if alg.n() == 0 {
        return Err(Error::Malformed("φ needs n ≥ 1".into()));
    }
    alg.element_from_legs(&iterated_coproduct(alg.presentation(), x, alg.n())?)
}

impl HilbertAlgebra {
    /// `Σ c · (x_1 ⊗ … ⊗ x_n)⟨id⟩` in weight zero.
    pub fn element_from_legs(&self, terms: &[(Vec<usize>, Q)]) -> Result<crate::hilbert::HilbertElement> {
        let id = Permutation::identity(self.n());
        let mut out: Option<crate::hilbert::HilbertElement> = None;
        for (legs, c) in terms {
            let t = self.index_of(&id, legs, Weight::ZERO).ok_or_else(|| Error::WeightMismatch("coproduct legs leave weight zero".into()))?;
            let e = self.basis_element(t).scaled(c);
            out = Some(match out {
                None => e,
                Some(o) => o.plus(&e)?,
            });
        }
        Ok(out.unwrap_or_else(|| self.basis_element(0).scaled(&Q::zero())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{abelian_with_torsion, model};
    use crate::validate::validate;

    #[test]
    fn coproduct_of_top_class() {
        let h = model("abelian").unwrap().presentation;
        let top = h.index_of("a1234").unwrap();
        assert_eq!(iterated_coproduct(&h, top, 2).unwrap().len(), 16);
        assert_eq!(iterated_coproduct(&h, top, 3).unwrap().len(), 81);
        let one = h.index_of("1").unwrap();
        assert_eq!(iterated_coproduct(&h, one, 3).unwrap(), vec![(vec![one; 3], Q::one())]);
    }

    #[test]
    fn kummer_one_is_a_point() {
        let k = KummerAlgebra::build(&model("abelian").unwrap().presentation, 1).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.dims_by_degree(), [(-2, 1)].into_iter().collect());
        assert!(matches!(KummerAlgebra::build(&model("k3").unwrap().presentation, 2), Err(Error::NoHopf)));
    }

    #[test]
    fn kummer_two() {
        let h = abelian_with_torsion(2).unwrap();
        let k = KummerAlgebra::build(&h, 2).unwrap();
        assert_eq!(k.hilbert().dim(), 384);
        let dims: Vec<usize> = (-4..=0).map(|d| k.dims_by_degree().get(&d).copied().unwrap_or(0)).collect();
        assert_eq!(dims, vec![1, 0, 22, 0, 1]);
        assert!(k.check_ideal(8));
        for (deg, l, r) in k.leray_rows().unwrap() {
            assert_eq!(l, r, "degree {}", deg);
        }
        let p = k.to_presentation().unwrap();
        let report = validate(&p);
        assert!(report.passed(), "{}", report);
    }
}
