//! Permutations of `{0..n-1}`, orbit partitions and the graph defect.
//!
//! Composition is right-to-left: `(σ∘τ)(i) = σ(τ(i))`. Cycle notation in text
//! is one-based, as in `(1 2 3)(4 5)`; the identity prints as `()`.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest `n` for which [`enumerate_sn`] lists `𝔖_n` without an explicit bound.
pub const DEFAULT_SN_BOUND: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parse(format!("not a permutation: {:?}", images)));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `{0..n-1}` from zero-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for c in cycles {
            for (k, &i) in c.iter().enumerate() {
                if i >= n || used[i] {
                    return Err(Error::Parse(format!("bad cycle {:?} in S_{}", c, n)));
                }
                used[i] = true;
                images[i] = c[(k + 1) % c.len()];
            }
        }
        Ok(Permutation { images })
    }

    /// Parses one-based cycle notation. Without `n` the degree is the largest
    /// point mentioned.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Permutation> {
        let bad = || Error::Parse(format!("bad cycle notation {:?}", s));
        let mut cycles = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let body = &inner[..close];
            let cycle: Vec<usize> = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().ok().filter(|&v| v >= 1).map(|v| v - 1).ok_or_else(bad))
                .collect::<Result<_>>()?;
            cycles.push(cycle);
            rest = inner[close + 1..].trim_start();
        }
        let top = cycles.iter().flatten().map(|&i| i + 1).max().unwrap_or(0);
        let n = match n {
            Some(n) if n < top => return Err(Error::Parse(format!("{:?} does not fit in S_{}", s, n))),
            Some(n) => n,
            None => top,
        };
        Permutation::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        Ok(Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `π σ π⁻¹` for `σ = self`.
    pub fn conjugate_by(&self, pi: &Permutation) -> Result<Permutation> {
        pi.compose(self)?.compose(&pi.inverse())
    }

    /// Zero-based cycles, each starting at its minimum, ordered by minimum;
    /// fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut i = self.images[start];
            while i != start {
                seen[i] = true;
                c.push(i);
                i = self.images[i];
            }
            out.push(c);
        }
        out
    }

    /// Parity of the permutation (true for odd).
    pub fn is_odd(&self) -> bool {
        self.cycles().iter().filter(|c| c.len() % 2 == 0).count() % 2 == 1
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "({})", c.iter().map(|i| i + 1).join(" "))?;
        }
        Ok(())
    }
}

/// A set partition of `{0..n-1}` with sorted blocks ordered by minimum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl OrbitPartition {
    /// Canonicalises arbitrary blocks; they must partition `{0..n-1}`.
    pub fn from_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<OrbitPartition> {
        let mut block_of = vec![usize::MAX; n];
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        for (k, b) in blocks.iter().enumerate() {
            for &i in b {
                if i >= n || block_of[i] != usize::MAX {
                    return Err(Error::Malformed(format!("blocks {:?} do not partition 0..{}", blocks, n)));
                }
                block_of[i] = k;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(Error::Malformed(format!("blocks {:?} do not cover 0..{}", blocks, n)));
        }
        Ok(OrbitPartition { blocks, block_of })
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn refines(&self, coarse: &OrbitPartition) -> bool {
        self.n() == coarse.n()
            && self.blocks.iter().all(|b| b.iter().all(|&i| coarse.block_of[i] == coarse.block_of[b[0]]))
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &OrbitPartition) -> Result<OrbitPartition> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch(self.n(), other.n()));
        }
        let mut uf = UnionFind::new(self.n());
        for b in self.blocks.iter().chain(&other.blocks) {
            for &i in &b[1..] {
                uf.union(b[0], i);
            }
        }
        Ok(uf.into_partition())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root so blocks are labelled by their minimum
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    fn into_partition(mut self) -> OrbitPartition {
        let n = self.parent.len();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = self.find(i);
            if slot[r] == usize::MAX {
                slot[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[r]].push(i);
        }
        OrbitPartition::from_blocks(n, blocks).expect("union-find yields a partition")
    }
}

pub fn orbits(sigma: &Permutation) -> OrbitPartition {
    OrbitPartition::from_blocks(sigma.n(), sigma.cycles()).expect("cycles partition the points")
}

/// Orbits of the subgroup generated by `σ` and `τ`.
pub fn joint_orbits(sigma: &Permutation, tau: &Permutation) -> Result<OrbitPartition> {
    orbits(sigma).join(&orbits(tau))
}

/// For each block of `fine`, the index of the block of `coarse` containing it.
pub fn orbit_surjection(fine: &OrbitPartition, coarse: &OrbitPartition) -> Result<Vec<usize>> {
    if !fine.refines(coarse) {
        return Err(Error::NotARefinement);
    }
    Ok(fine.blocks.iter().map(|b| coarse.block_of[b[0]]).collect())
}

/// The graph defect `γ(σ,τ)` on each joint orbit `B` (in the order of
/// [`joint_orbits`]): `(|B| + 2 − #σ-orbits − #τ-orbits − #στ-orbits) / 2`.
pub fn graph_defect(sigma: &Permutation, tau: &Permutation) -> Result<Vec<u32>> {
    let joint = joint_orbits(sigma, tau)?;
    let st = sigma.compose(tau)?;
    let mut count = vec![[0i64; 3]; joint.len()];
    for (k, p) in [sigma, tau, &st].into_iter().enumerate() {
        for c in p.cycles() {
            count[joint.block_of(c[0])][k] += 1;
        }
    }
    Ok(joint
        .blocks()
        .iter()
        .zip(&count)
        .map(|(b, c)| {
            let twice = b.len() as i64 + 2 - c[0] - c[1] - c[2];
            debug_assert!(twice >= 0 && twice % 2 == 0, "graph defect {} / 2", twice);
            (twice / 2) as u32
        })
        .collect())
}

/// All of `𝔖_n` in lexicographic order of image arrays, refusing `n` above
/// [`DEFAULT_SN_BOUND`].
pub fn enumerate_sn(n: usize) -> Result<Vec<Permutation>> {
    enumerate_sn_bounded(n, DEFAULT_SN_BOUND)
}

pub fn enumerate_sn_bounded(n: usize, bound: usize) -> Result<Vec<Permutation>> {
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    Ok((0..n).permutations(n).map(|images| Permutation { images }).collect())
}

/// Cycle lengths in non-increasing order, fixed points included.
pub fn cycle_type(sigma: &Permutation) -> Vec<usize> {
    let mut t: Vec<usize> = sigma.cycles().iter().map(|c| c.len()).collect();
    t.sort_unstable_by(|a, b| b.cmp(a));
    t
}

/// Some `π` with `π σ π⁻¹ = τ`, if the cycle types agree.
pub fn conjugators(sigma: &Permutation, tau: &Permutation) -> Result<Option<Permutation>> {
    if sigma.n() != tau.n() {
        return Err(Error::SizeMismatch(sigma.n(), tau.n()));
    }
    if cycle_type(sigma) != cycle_type(tau) {
        return Ok(None);
    }
    let by_len = |p: &Permutation| {
        let mut c = p.cycles();
        c.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        c
    };
    // map the k-th cycle of σ onto the k-th cycle of τ position by position
    let mut images = vec![0; sigma.n()];
    for (cs, ct) in by_len(sigma).iter().zip(by_len(tau).iter()) {
        for (a, b) in cs.iter().zip(ct) {
            images[*a] = *b;
        }
    }
    Ok(Some(Permutation { images }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn blocks(s: &OrbitPartition) -> Vec<Vec<usize>> {
        s.blocks().iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(blocks(&orbits(&p("(1 2 3)(4 5)", 5))), vec![vec![1, 2, 3], vec![4, 5]]);
        assert_eq!(blocks(&orbits(&p("()", 3))), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(blocks(&orbits(&p("(1 2)", 4))), vec![vec![1, 2], vec![3], vec![4]]);
    }

    #[test]
    fn joint_orbit_examples() {
        assert_eq!(blocks(&joint_orbits(&p("(1 2)", 3), &p("(2 3)", 3)).unwrap()), vec![vec![1, 2, 3]]);
        assert_eq!(joint_orbits(&p("()", 3), &p("()", 3)).unwrap().len(), 3);
        assert_eq!(
            blocks(&joint_orbits(&p("(1 2)", 4), &p("(3 4)", 4)).unwrap()),
            vec![vec![1, 2], vec![3, 4]]
        );
        assert_eq!(joint_orbits(&p("()", 3), &p("()", 4)), Err(Error::SizeMismatch(3, 4)));
    }

    #[test]
    fn surjection_examples() {
        let single = orbits(&p("()", 2));
        let one = orbits(&p("(1 2)", 2));
        assert_eq!(orbit_surjection(&single, &one).unwrap(), vec![0, 0]);
        assert_eq!(orbit_surjection(&one, &single), Err(Error::NotARefinement));
        let c = orbits(&p("(1 2 3)", 3));
        let j = joint_orbits(&p("(1 2 3)", 3), &p("(1 2)", 3)).unwrap();
        assert_eq!(orbit_surjection(&c, &j).unwrap(), vec![0]);
        let x = orbits(&p("(1 3)", 4));
        assert_eq!(orbit_surjection(&x, &x).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn defect_examples() {
        assert_eq!(graph_defect(&p("()", 3), &p("()", 3)).unwrap(), vec![0, 0, 0]);
        let c = p("(1 2 3)", 3);
        assert_eq!(c.compose(&c).unwrap(), p("(1 3 2)", 3));
        assert_eq!(graph_defect(&c, &c).unwrap(), vec![1]);
        let t = p("(1 2)", 2);
        assert_eq!(graph_defect(&t, &t).unwrap(), vec![0]);
    }

    #[test]
    fn defect_is_integral_symmetric_and_conjugation_invariant() {
        for n in 1..=5 {
            let all = enumerate_sn(n).unwrap();
            for s in &all {
                for t in &all {
                    // the debug assertion inside checks parity and sign
                    let g = graph_defect(s, t).unwrap();
                    let joint = joint_orbits(s, t).unwrap();
                    let g2 = graph_defect(t, s).unwrap();
                    assert_eq!(g, g2);
                    if n <= 4 {
                        for pi in &all {
                            let (s2, t2) = (s.conjugate_by(pi).unwrap(), t.conjugate_by(pi).unwrap());
                            let joint2 = joint_orbits(&s2, &t2).unwrap();
                            let g3 = graph_defect(&s2, &t2).unwrap();
                            for (k, b) in joint.blocks().iter().enumerate() {
                                assert_eq!(g[k], g3[joint2.block_of(pi.apply(b[0]))]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn join_is_a_lattice_join() {
        let all = enumerate_sn(4).unwrap();
        for a in all.iter().step_by(5) {
            for b in all.iter().step_by(3) {
                let (oa, ob) = (orbits(a), orbits(b));
                let j = oa.join(&ob).unwrap();
                assert!(oa.refines(&j) && ob.refines(&j));
                assert_eq!(j, ob.join(&oa).unwrap());
                assert_eq!(j.join(&j).unwrap(), j);
            }
        }
    }

    #[test]
    fn enumeration_and_types() {
        let s3 = enumerate_sn(3).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(s3.windows(2).all(|w| w[0] < w[1]));
        assert!(s3[0].is_identity());
        assert_eq!(enumerate_sn(7), Err(Error::BoundExceeded { n: 7, bound: 6 }));
        assert_eq!(cycle_type(&p("(1 2)(3 4 5)", 5)), vec![3, 2]);
    }

    #[test]
    fn conjugator_witness() {
        let (s, t) = (p("(1 2)", 3), p("(2 3)", 3));
        let pi = conjugators(&s, &t).unwrap().unwrap();
        assert_eq!(s.conjugate_by(&pi).unwrap(), t);
        assert_eq!(conjugators(&s, &p("(1 2 3)", 3)).unwrap(), None);
        for a in enumerate_sn(4).unwrap() {
            for b in enumerate_sn(4).unwrap() {
                if let Some(pi) = conjugators(&a, &b).unwrap() {
                    assert_eq!(a.conjugate_by(&pi).unwrap(), b);
                }
            }
        }
    }

    #[test]
    fn notation_round_trip() {
        for s in ["()", "(1 2 3)(4 5)", "(1 3)", "(2 4 3)"] {
            assert_eq!(p(s, 5).to_string(), s);
        }
        assert_eq!(Permutation::parse("(1 2)", None).unwrap().n(), 2);
        assert!(Permutation::parse("(1 2", None).is_err());
        assert!(Permutation::parse("(1 1)", None).is_err());
        assert!(Permutation::parse("(1 6)", Some(3)).is_err());
    }
}
