//! Exact linear algebra over `Q`: small dense inverses and an incremental
//! sparse row-echelon basis.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Sparse vector keyed by column.
pub type SparseVec = BTreeMap<usize, Q>;

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= &t;
                let t = &f * &inv[col][j];
                inv[r][j] -= &t;
            }
        }
    }
    Some(inv)
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut ech = SparseEchelon::new();
    for r in rows {
        let v: SparseVec =
            r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        ech.insert(v);
    }
    ech.rank()
}

/// Row-echelon basis of a growing subspace.
///
/// Each stored row has leading coefficient one at its pivot column and only
/// entries at larger columns; pivots are the smallest columns available.
#[derive(Debug, Clone, Default)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl SparseEchelon {
    pub fn new() -> SparseEchelon {
        SparseEchelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, pivot: usize) -> Option<&SparseVec> {
        self.rows.get(&pivot)
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Reduces `v` until no pivot column remains in its support.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut from = 0usize;
        loop {
            let next = v.range(from..).map(|(c, _)| *c).find(|c| self.rows.contains_key(c));
            let Some(col) = next else { break };
            let f = v.remove(&col).expect("present");
            for (c, x) in self.rows[&col].iter().skip(1) {
                let t = &f * x;
                let e = v.entry(*c).or_insert_with(Q::zero);
                *e -= &t;
                if e.is_zero() {
                    v.remove(c);
                }
            }
            from = col + 1;
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((&lead, lc)) = r.iter().next() else { return false };
        let inv = lc.recip();
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        debug_assert!(r[&lead].is_one());
        self.rows.insert(lead, r);
        true
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(invert(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
        assert!(invert(&[]).unwrap().is_empty());
    }

    #[test]
    fn echelon_reduction() {
        let mut e = SparseEchelon::new();
        assert!(e.insert([(0, q(1)), (2, q(1))].into_iter().collect()));
        assert!(e.insert([(0, q(1)), (1, q(1))].into_iter().collect()));
        assert!(!e.insert([(1, q(2)), (2, q(-2))].into_iter().collect()));
        assert_eq!(e.rank(), 2);
        let rem = e.reduce([(0, q(3))].into_iter().collect());
        // pivots at 0 and 1; remainder lives on column 2
        assert_eq!(rem.keys().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
    }
}
