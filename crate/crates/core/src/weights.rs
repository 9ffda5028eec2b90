//! Finite abelian weight groups.
//!
//! Group elements are stored as dense indices (mixed radix over the invariant
//! factors), so weights are `Copy` and addition is a table-free computation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightGroupKind {
    /// Integer weights whose weight spaces repeat with the given period.
    IntegersModPeriod,
    FiniteAbelian,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightGroup {
    kind: WeightGroupKind,
    moduli: Vec<u32>,
}

/// An element of a [`WeightGroup`], as a dense index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub u32);

impl Weight {
    pub const ZERO: Weight = Weight(0);
}

impl WeightGroup {
    /// Integer weights with period `k`: weight `ν` lives at residue `ν mod k`.
    pub fn periodic(k: u32) -> Result<WeightGroup> {
        if k == 0 {
            return Err(Error::Malformed("period must be at least 1".into()));
        }
        Ok(WeightGroup { kind: WeightGroupKind::IntegersModPeriod, moduli: vec![k] })
    }

    pub fn trivial() -> WeightGroup {
        WeightGroup { kind: WeightGroupKind::IntegersModPeriod, moduli: vec![1] }
    }

    /// `∏ ℤ/m_i` from invariant factors `m_1 | m_2 | ...`.
    pub fn finite_abelian(factors: &[u32]) -> Result<WeightGroup> {
        if factors.contains(&0) {
            return Err(Error::Malformed("invariant factors must be at least 1".into()));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Malformed(format!(
                    "invariant factors must divide each other, got {:?}",
                    factors
                )));
            }
        }
        Ok(WeightGroup { kind: WeightGroupKind::FiniteAbelian, moduli: factors.to_vec() })
    }

    pub fn kind(&self) -> WeightGroupKind {
        self.kind
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    pub fn elements(&self) -> impl Iterator<Item = Weight> {
        (0..self.order() as u32).map(Weight)
    }

    pub fn coords(&self, w: Weight) -> Vec<u32> {
        let mut rest = w.0;
        let mut out = vec![0; self.moduli.len()];
        for (i, &m) in self.moduli.iter().enumerate().rev() {
            out[i] = rest % m;
            rest /= m;
        }
        out
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn from_coords(&self, coords: &[i64]) -> Result<Weight> {
        if coords.len() != self.moduli.len() {
            return Err(Error::Malformed(format!(
                "weight {:?} has {} coordinates, group has {}",
                coords,
                coords.len(),
                self.moduli.len()
            )));
        }
        let mut idx = 0u32;
        for (&c, &m) in coords.iter().zip(&self.moduli) {
            idx = idx * m + c.rem_euclid(m as i64) as u32;
        }
        Ok(Weight(idx))
    }

    pub fn add(&self, a: Weight, b: Weight) -> Weight {
        if self.moduli.len() == 1 {
            return Weight((a.0 + b.0) % self.moduli[0]);
        }
        let (ca, cb) = (self.coords(a), self.coords(b));
        let sum: Vec<i64> = ca.iter().zip(&cb).map(|(x, y)| (*x + *y) as i64).collect();
        self.from_coords(&sum).expect("same arity")
    }

    pub fn neg(&self, a: Weight) -> Weight {
        self.scale(-1, a)
    }

    pub fn scale(&self, k: i64, a: Weight) -> Weight {
        let c: Vec<i64> = self.coords(a).iter().map(|&x| x as i64 * k).collect();
        self.from_coords(&c).expect("same arity")
    }

    /// Order of `a` as a group element.
    pub fn element_order(&self, a: Weight) -> u32 {
        let mut k = 1;
        while self.scale(k as i64, a) != Weight::ZERO {
            k += 1;
        }
        k
    }

    /// The standard generator used for integer-weighted (Fock) data: residue 1
    /// for periodic groups, zero otherwise.
    pub fn default_level_generator(&self) -> Weight {
        match self.kind {
            WeightGroupKind::IntegersModPeriod => self.from_coords(&[1]).expect("one coordinate"),
            WeightGroupKind::FiniteAbelian => Weight::ZERO,
        }
    }

    pub fn display(&self, w: Weight) -> WeightDisplay {
        WeightDisplay(self.coords(w))
    }
}

pub struct WeightDisplay(Vec<u32>);

impl fmt::Display for WeightDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coords_round_trip() {
        let g = WeightGroup::finite_abelian(&[2, 4]).unwrap();
        assert_eq!(g.order(), 8);
        for w in g.elements() {
            let c: Vec<i64> = g.coords(w).iter().map(|&x| x as i64).collect();
            assert_eq!(g.from_coords(&c).unwrap(), w);
        }
    }

    #[test]
    fn group_law() {
        let g = WeightGroup::finite_abelian(&[3, 3]).unwrap();
        for a in g.elements() {
            assert_eq!(g.add(a, g.neg(a)), Weight::ZERO);
            for b in g.elements() {
                assert_eq!(g.add(a, b), g.add(b, a));
            }
        }
        let a = g.from_coords(&[1, 2]).unwrap();
        assert_eq!(g.element_order(a), 3);
        assert_eq!(g.scale(3, a), Weight::ZERO);
    }

    #[test]
    fn periodic_reduction() {
        let g = WeightGroup::periodic(2).unwrap();
        assert_eq!(g.from_coords(&[-3]).unwrap(), Weight(1));
        assert_eq!(g.scale(4, g.default_level_generator()), Weight::ZERO);
        assert!(WeightGroup::periodic(0).is_err());
        assert!(WeightGroup::finite_abelian(&[2, 3]).is_err());
    }
}
