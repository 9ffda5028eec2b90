//! Bigraded generating functions for Hilbert schemes with twisted
//! coefficients:
//!
//! `Σ_n h(Hilbⁿ, L^[n]) z^n = Π_{m≥1} Π_{i,j} (1 − (−1)^{i+j} p^i q^j z^m)^{−(−1)^{i+j} h^{i,j}(L^m)}`
//!
//! Bidegrees are shifted (a surface's unit sits at `(−1,−1)`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::presentation::AlgebraPresentation;
use crate::scalar::binomial;
use crate::weights::Weight;

/// Finitely supported Laurent polynomial in `p`, `q` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HodgePolynomial {
    terms: BTreeMap<(i32, i32), BigInt>,
}

impl HodgePolynomial {
    pub fn zero() -> HodgePolynomial {
        HodgePolynomial::default()
    }

    pub fn one() -> HodgePolynomial {
        HodgePolynomial::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(i: i32, j: i32, c: BigInt) -> HodgePolynomial {
        let mut p = HodgePolynomial::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn from_counts(counts: &BTreeMap<(i32, i32), i64>) -> HodgePolynomial {
        let mut p = HodgePolynomial::zero();
        for (&(i, j), &c) in counts {
            p.add_term(i, j, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, i: i32, j: i32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> &BTreeMap<(i32, i32), BigInt> {
        &self.terms
    }

    pub fn coeff(&self, i: i32, j: i32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &HodgePolynomial) -> HodgePolynomial {
        let mut out = self.clone();
        for ((i, j), c) in &other.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }

    pub fn times(&self, other: &HodgePolynomial) -> HodgePolynomial {
        let mut out = HodgePolynomial::zero();
        for ((i, j), a) in &self.terms {
            for ((k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }

    /// Shifts every bidegree by `(s, s)`.
    pub fn shifted(&self, s: i32) -> HodgePolynomial {
        HodgePolynomial { terms: self.terms.iter().map(|(&(i, j), c)| ((i + s, j + s), c.clone())).collect() }
    }

    /// Collapses `p = q = t`: coefficients by total degree `i + j`.
    pub fn by_total_degree(&self) -> BTreeMap<i32, BigInt> {
        let mut out: BTreeMap<i32, BigInt> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            *out.entry(i + j).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Value at `p = q = 1`.
    pub fn total(&self) -> BigInt {
        self.terms.values().sum()
    }
}

impl fmt::Display for HodgePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|((i, j), c)| format!("{}·p^{}q^{}", c, i, j)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Truncated power series in `z` with [`HodgePolynomial`] coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeSeries {
    coeffs: Vec<HodgePolynomial>,
}

impl HodgeSeries {
    pub fn one(order: usize) -> HodgeSeries {
        let mut coeffs = vec![HodgePolynomial::zero(); order + 1];
        coeffs[0] = HodgePolynomial::one();
        HodgeSeries { coeffs }
    }

    pub fn zero(order: usize) -> HodgeSeries {
        HodgeSeries { coeffs: vec![HodgePolynomial::zero(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &HodgePolynomial {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[HodgePolynomial] {
        &self.coeffs
    }

    pub fn plus(&self, other: &HodgeSeries) -> HodgeSeries {
        let order = self.order().min(other.order());
        HodgeSeries { coeffs: (0..=order).map(|n| self.coeffs[n].plus(&other.coeffs[n])).collect() }
    }

    pub fn times(&self, other: &HodgeSeries) -> HodgeSeries {
        let order = self.order().min(other.order());
        let mut out = HodgeSeries::zero(order);
        for a in 0..=order {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..=order - a {
                if !other.coeffs[b].is_zero() {
                    out.coeffs[a + b] = out.coeffs[a + b].plus(&self.coeffs[a].times(&other.coeffs[b]));
                }
            }
        }
        out
    }

    /// `(1 − (−1)^{i+j} p^i q^j z^m)^{−(−1)^{i+j} h}`, truncated.
    pub fn factor(order: usize, i: i32, j: i32, m: usize, h: u64) -> HodgeSeries {
        let mut out = HodgeSeries::zero(order);
        let even = (i + j).rem_euclid(2) == 0;
        for k in 0..=order / m {
            // even: Σ C(h+k−1, k) u^k; odd: Σ C(h, k) u^k
            let c = if even {
                if h == 0 {
                    if k == 0 { BigInt::one() } else { BigInt::zero() }
                } else {
                    binomial(h + k as u64 - 1, k as u64)
                }
            } else if k as u64 > h {
                BigInt::zero()
            } else {
                binomial(h, k as u64)
            };
            out.coeffs[k * m].add_term(i * k as i32, j * k as i32, c);
        }
        out
    }

    /// Coefficient of `z^n` shifted by `(n, n)` to ordinary bidegrees.
    pub fn unshifted(&self) -> HodgeSeries {
        HodgeSeries { coeffs: self.coeffs.iter().enumerate().map(|(n, c)| c.shifted(n as i32)).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| json!({
                "n": n,
                "terms": c.terms().iter().map(|((i, j), v)| json!([i, j, v.to_string()])).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>())
    }
}

impl fmt::Display for HodgeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in self.coeffs.iter().enumerate() {
            writeln!(f, "z^{}: {}", n, c)?;
        }
        Ok(())
    }
}

/// Level data `m ↦ h(X, L^m[2])`, periodic in `m`.
#[derive(Debug, Clone)]
pub struct LevelData {
    /// `levels[m mod period]`; index 0 holds the untwisted level.
    levels: Vec<HodgePolynomial>,
}

impl LevelData {
    pub fn periodic(levels: Vec<HodgePolynomial>) -> LevelData {
        LevelData { levels }
    }

    /// Levels of a presentation for the weight `l`: `m ↦ bidegree counts of A(m·l)`.
    pub fn from_presentation(h: &AlgebraPresentation, l: Weight) -> LevelData {
        let period = h.group().element_order(l).max(1) as usize;
        let levels = (0..period)
            .map(|m| HodgePolynomial::from_counts(&h.bidegree_counts(h.group().scale(m as i64, l))))
            .collect();
        LevelData { levels }
    }

    pub fn level(&self, m: usize) -> Option<&HodgePolynomial> {
        if self.levels.is_empty() {
            None
        } else {
            self.levels.get(m % self.levels.len())
        }
    }
}

/// Expands the product formula up to `z^order`; `levels(m)` supplies
/// `h(X, L^m[2])` for `1 ≤ m ≤ order`.
pub fn hilbert_series(levels: &dyn Fn(usize) -> Option<HodgePolynomial>, order: usize) -> Result<HodgeSeries> {
    let mut out = HodgeSeries::one(order);
    for m in 1..=order {
        let level = levels(m).ok_or(Error::MissingLevel(m as i64))?;
        for ((i, j), h) in level.terms() {
            if h.is_negative() {
                return Err(Error::Malformed(format!("negative Hodge number at level {}", m)));
            }
            let h: u64 = h.try_into().map_err(|_| Error::Malformed("Hodge number too large".into()))?;
            out = out.times(&HodgeSeries::factor(order, *i, *j, m, h));
        }
    }
    Ok(out)
}

pub fn hilbert_series_for(h: &AlgebraPresentation, l: Weight, order: usize) -> Result<HodgeSeries> {
    let data = LevelData::from_presentation(h, l);
    hilbert_series(&|m| data.level(m).cloned(), order)
}

/// `Σ_{L ∈ G} hilbert_series(L)`.
pub fn cover_series(family: &[LevelData], order: usize) -> Result<HodgeSeries> {
    let mut out = HodgeSeries::zero(order);
    for data in family {
        out = out.plus(&hilbert_series(&|m| data.level(m).cloned(), order)?);
    }
    Ok(out)
}

pub fn cover_series_for(h: &AlgebraPresentation, order: usize) -> Result<HodgeSeries> {
    let family: Vec<LevelData> = h.group().elements().map(|l| LevelData::from_presentation(h, l)).collect();
    cover_series(&family, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;
    use crate::models::model;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn first_coefficient_is_level_one() {
        let h = model("k3").unwrap().presentation;
        let s = hilbert_series_for(&h, Weight::ZERO, 3).unwrap();
        assert_eq!(s.coeff(1), &HodgePolynomial::from_counts(&h.bidegree_counts(Weight::ZERO)));
        assert_eq!(s.coeff(0), &HodgePolynomial::one());
    }

    #[test]
    fn k3_second_betti_number() {
        let h = model("k3").unwrap().presentation;
        let s = hilbert_series_for(&h, Weight::ZERO, 2).unwrap().unshifted();
        let b = s.coeff(2).by_total_degree();
        assert_eq!(b[&2], big(23));
        assert_eq!(b[&4], big(276));
        assert_eq!(s.coeff(2).total(), big(324));
    }

    #[test]
    fn odd_factor_is_a_polynomial() {
        let f = HodgeSeries::factor(6, 1, 0, 1, 2);
        assert_eq!(f.coeff(1), &HodgePolynomial::monomial(1, 0, big(2)));
        assert_eq!(f.coeff(2), &HodgePolynomial::monomial(2, 0, big(1)));
        assert!(f.coeff(3).is_zero());
        let g = HodgeSeries::factor(6, 1, 1, 2, 3);
        assert_eq!(g.coeff(4), &HodgePolynomial::monomial(2, 2, big(6)));
        assert!(g.coeff(3).is_zero());
    }

    #[test]
    fn missing_level() {
        let lv = |m: usize| (m < 2).then(HodgePolynomial::one);
        assert_eq!(hilbert_series(&lv, 3), Err(Error::MissingLevel(2)));
    }

    #[test]
    fn split_product_agrees() {
        let h = model("enriques-z2").unwrap().presentation;
        let l = h.group().default_level_generator();
        let data = LevelData::from_presentation(&h, l);
        let order = 5;
        let whole = hilbert_series(&|m| data.level(m).cloned(), order).unwrap();
        let odd = hilbert_series(&|m| Some(if m % 2 == 1 { data.level(m).cloned().unwrap() } else { HodgePolynomial::zero() }), order).unwrap();
        let even = hilbert_series(&|m| Some(if m % 2 == 0 { data.level(m).cloned().unwrap() } else { HodgePolynomial::zero() }), order).unwrap();
        assert_eq!(odd.times(&even), whole);
    }

    #[test]
    fn abelian_twisted_by_order_two() {
        let h = crate::models::abelian_with_torsion(2).unwrap();
        let l = h.group().from_coords(&[1, 0, 0, 0]).unwrap();
        let s = hilbert_series_for(&h, l, 2).unwrap();
        assert!(s.coeff(1).is_zero());
        assert_eq!(s.coeff(2), &HodgePolynomial::from_counts(&h.bidegree_counts(Weight::ZERO)));
        let cover = cover_series_for(&h, 2).unwrap();
        assert_eq!(cover.coeff(2).total(), big(16 * 24));
    }

    #[test]
    fn enriques_cover_corners() {
        let h = model("enriques-z2").unwrap().presentation;
        let s = cover_series_for(&h, 3).unwrap().unshifted();
        for n in [2usize, 3] {
            let row: Vec<BigInt> = (0..=2 * n as i32).map(|k| s.coeff(n).coeff(k, 0)).collect();
            let mut want = vec![big(0); 2 * n + 1];
            want[0] = big(1);
            want[2 * n] = big(1);
            assert_eq!(row, want, "n = {}", n);
        }
    }

    #[test]
    fn matches_fock_dimensions() {
        for name in ["toy-sphere", "k3", "abelian", "enriques-z2"] {
            let h = model(name).unwrap().presentation;
            for l in h.group().elements() {
                let order = if name == "toy-sphere" { 6 } else { 3 };
                let s = hilbert_series_for(&h, l, order).unwrap();
                let fock = FockSpace::new(&h, l).unwrap();
                let dims = fock.dimensions(order as i64);
                for n in 0..=order {
                    let from_fock: BTreeMap<i32, BigInt> = dims
                        .iter()
                        .filter(|((w, _), _)| *w == n as i64)
                        .map(|((_, k), c)| (*k, BigInt::from(*c)))
                        .collect();
                    assert_eq!(s.coeff(n).by_total_degree(), from_fock, "{} n={}", name, n);
                }
            }
        }
    }
}
