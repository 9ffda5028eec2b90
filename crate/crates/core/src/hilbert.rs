//! The Hilbert algebras `H^[n]` of a weighted Frobenius algebra.
//!
//! `H_n(L) = ⊕_σ ⊗_{B ∈ σ\[n]} H(|B|L)⟨σ⟩` with orbits ordered by their
//! minimum. `𝔖_n` acts by conjugation on `σ` and by permuting tensor legs with
//! Koszul signs; `H^[n]` is the invariant part, with basis the signed orbit
//! sums `v_O = (1/|O|) Σ_{t ∈ O} s_t t` (orbits with a sign-reversing
//! stabiliser vanish and are dropped).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::One;
use rayon::prelude::*;
use serde_json::json;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::koszul::{koszul_sign, reorder_is_odd};
use crate::perm::{enumerate_sn, joint_orbits, orbits, OrbitPartition, Permutation};
use crate::presentation::{add_into, AlgebraPresentation};
use crate::scalar::{factorial, Q};
use crate::weights::Weight;

/// Default cap on the number of `H_n` basis vectors.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

/// The budget from `HILBFROB_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> u64 {
    std::env::var("HILBFROB_BUDGET").ok().and_then(|s| s.trim().parse().ok()).filter(|&b| b > 0).unwrap_or(DEFAULT_BUDGET)
}

type Legs = SmallVec<[usize; 6]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    weight: Weight,
    sigma: usize,
    labels: Legs,
}

/// A basis vector `α⟨σ⟩` of `H_n(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasisVector {
    pub sigma: Permutation,
    /// One basis index of the presentation per `σ`-orbit, in canonical order.
    pub labels: Vec<usize>,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertElement {
    owner: u64,
    coords: BTreeMap<usize, Q>,
}

impl HilbertElement {
    pub fn coords(&self) -> &BTreeMap<usize, Q> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn plus(&self, other: &HilbertElement) -> Result<HilbertElement> {
        if self.owner != other.owner {
            return Err(Error::OwnerMismatch);
        }
        let mut coords = self.coords.clone();
        for (t, c) in &other.coords {
            add_into(&mut coords, *t, c.clone());
        }
        Ok(HilbertElement { owner: self.owner, coords })
    }

    pub fn scaled(&self, q: &Q) -> HilbertElement {
        let mut coords = BTreeMap::new();
        for (t, c) in &self.coords {
            add_into(&mut coords, *t, c * q);
        }
        HilbertElement { owner: self.owner, coords }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OrbitSlot {
    Unvisited,
    Vanishing,
    /// Invariant index and whether `π·r = −t` for the orbit representative.
    Member(usize, bool),
}

#[derive(Debug, Clone)]
pub struct Invariant {
    pub representative: usize,
    /// `(t, odd)` with `π·r = ±t`.
    pub members: Vec<(usize, bool)>,
    pub weight: Weight,
    pub degree: i32,
}

/// Per pair `(σ, τ)`: everything about `m_{σ,τ}` that does not depend on labels.
#[derive(Debug)]
struct PairData {
    st: usize,
    joint: OrbitPartition,
    /// Orbit indices of `σ`, `τ`, `στ` grouped by joint orbit.
    sigma_groups: Vec<Vec<usize>>,
    tau_groups: Vec<Vec<usize>>,
    st_groups: Vec<Vec<usize>>,
    gamma: Vec<u32>,
}

pub struct HilbertAlgebra {
    h: AlgebraPresentation,
    n: usize,
    uid: u64,
    perms: Vec<Permutation>,
    perm_index: HashMap<Vec<usize>, usize>,
    perm_orbits: Vec<OrbitPartition>,
    euler_powers: Vec<BTreeMap<usize, Q>>,
    basis: Vec<Key>,
    index: HashMap<Key, usize>,
    slots: Vec<OrbitSlot>,
    invariants: Vec<Invariant>,
    pairs: RwLock<HashMap<(usize, usize), Arc<PairData>>>,
    table: RwLock<HashMap<(usize, usize), ProductRow>>,
}

static NEXT_UID: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(1);

type Tensor = Vec<(Legs, Q)>;
/// A row of the invariant product table: `(invariant index, coefficient)`.
type ProductRow = Arc<Vec<(usize, Q)>>;

impl HilbertAlgebra {
    /// Builds `H_n(L)` for every `L` in the weight group, with the default
    /// (or environment) budget.
    pub fn build(h: &AlgebraPresentation, n: usize) -> Result<HilbertAlgebra> {
        HilbertAlgebra::build_with_budget(h, n, budget_from_env())
    }

    pub fn build_with_budget(h: &AlgebraPresentation, n: usize, budget: u64) -> Result<HilbertAlgebra> {
        if h.degree_d() % 2 != 0 {
            return Err(Error::Malformed("Hilbert algebras are implemented for even d only".into()));
        }
        let h = h.with_diagonal()?;
        let perms = if n == 0 { vec![Permutation::identity(0)] } else { enumerate_sn(n)? };
        let perm_orbits: Vec<OrbitPartition> = perms.iter().map(orbits).collect();
        let g = h.group().clone();

        let estimate: u64 = g
            .elements()
            .map(|l| {
                perm_orbits
                    .iter()
                    .map(|o| {
                        o.blocks()
                            .iter()
                            .map(|b| h.basis_of_weight(g.scale(b.len() as i64, l)).len() as u64)
                            .product::<u64>()
                    })
                    .sum::<u64>()
            })
            .sum();
        if estimate > budget {
            return Err(Error::BudgetExceeded(estimate, budget));
        }

        let perm_index = perms.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i)).collect();
        let mut basis = Vec::new();
        for l in g.elements() {
            for (s, o) in perm_orbits.iter().enumerate() {
                let choices: Vec<&[usize]> =
                    o.blocks().iter().map(|b| h.basis_of_weight(g.scale(b.len() as i64, l))).collect();
                if choices.iter().any(|c| c.is_empty()) {
                    continue;
                }
                let mut cur: Legs = SmallVec::new();
                cartesian(&choices, &mut cur, &mut |labels| {
                    basis.push(Key { weight: l, sigma: s, labels: labels.clone() })
                });
            }
        }
        let index: HashMap<Key, usize> = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();

        let euler = if h.dim() == 0 { BTreeMap::new() } else { h.euler_class()?.coords().clone() };
        let mut euler_powers = vec![h.unit_coords().iter().cloned().collect::<BTreeMap<_, _>>()];
        for _ in 0..n {
            let next = h.mul_coords(euler_powers.last().expect("nonempty"), &euler);
            euler_powers.push(next);
        }

        let mut alg = HilbertAlgebra {
            h,
            n,
            uid: NEXT_UID.fetch_add(1, std::sync::atomic::Ordering::Relaxed),
            perms,
            perm_index,
            perm_orbits,
            euler_powers,
            basis,
            index,
            slots: Vec::new(),
            invariants: Vec::new(),
            pairs: RwLock::new(HashMap::new()),
            table: RwLock::new(HashMap::new()),
        };
        alg.find_invariants();
        Ok(alg)
    }

    fn find_invariants(&mut self) {
        let mut slots = vec![OrbitSlot::Unvisited; self.basis.len()];
        let mut invariants = Vec::new();
        for t in 0..self.basis.len() {
            if slots[t] != OrbitSlot::Unvisited {
                continue;
            }
            let mut members: BTreeMap<usize, bool> = BTreeMap::new();
            let mut vanishing = false;
            for p in 0..self.perms.len() {
                let (t2, odd) = self.act_basis(p, t);
                match members.get(&t2) {
                    Some(&o) if o != odd => vanishing = true,
                    Some(_) => {}
                    None => {
                        members.insert(t2, odd);
                    }
                }
            }
            if vanishing {
                for m in members.keys() {
                    slots[*m] = OrbitSlot::Vanishing;
                }
                continue;
            }
            let k = invariants.len();
            for (m, odd) in &members {
                slots[*m] = OrbitSlot::Member(k, *odd);
            }
            invariants.push(Invariant {
                representative: t,
                members: members.into_iter().collect(),
                weight: self.basis[t].weight,
                degree: self.degree_of(t),
            });
        }
        self.slots = slots;
        self.invariants = invariants;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.h
    }

    pub fn dim_hn(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.invariants.len()
    }

    pub fn invariants(&self) -> &[Invariant] {
        &self.invariants
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn basis_vector(&self, t: usize) -> HilbertBasisVector {
        let k = &self.basis[t];
        HilbertBasisVector { sigma: self.perms[k.sigma].clone(), labels: k.labels.to_vec(), weight: k.weight }
    }

    pub fn index_of(&self, sigma: &Permutation, labels: &[usize], weight: Weight) -> Option<usize> {
        let s = *self.perm_index.get(sigma.images())?;
        self.index.get(&Key { weight, sigma: s, labels: labels.iter().copied().collect() }).copied()
    }

    fn degree_of(&self, t: usize) -> i32 {
        self.basis[t].labels.iter().map(|&i| self.h.degree(i)).sum()
    }

    pub fn degree(&self, t: usize) -> i32 {
        self.degree_of(t)
    }

    fn odd_legs(&self, legs: &[usize]) -> Vec<bool> {
        legs.iter().map(|&i| self.h.is_odd(i)).collect()
    }

    /// `π·t = ±t'`, with `π` given by index.
    fn act_basis(&self, p: usize, t: usize) -> (usize, bool) {
        let pi = &self.perms[p];
        let key = &self.basis[t];
        let conj = self.perms[key.sigma].conjugate_by(pi).expect("same n");
        let s2 = self.perm_index[conj.images()];
        let (old, new) = (&self.perm_orbits[key.sigma], &self.perm_orbits[s2]);
        let pos: Vec<usize> = old.blocks().iter().map(|b| new.block_of(pi.apply(b[0]))).collect();
        let mut labels: Legs = SmallVec::from_elem(0, pos.len());
        for (i, &p) in pos.iter().enumerate() {
            labels[p] = key.labels[i];
        }
        let degrees: Vec<i32> = key.labels.iter().map(|&i| self.h.degree(i)).collect();
        let odd = koszul_sign(&pos, &degrees) < 0;
        let t2 = self.index[&Key { weight: key.weight, sigma: s2, labels }];
        (t2, odd)
    }

    fn element(&self, coords: BTreeMap<usize, Q>) -> HilbertElement {
        HilbertElement { owner: self.uid, coords }
    }

    fn check(&self, x: &HilbertElement) -> Result<()> {
        if x.owner != self.uid {
            return Err(Error::OwnerMismatch);
        }
        Ok(())
    }

    pub fn basis_element(&self, t: usize) -> HilbertElement {
        self.element([(t, Q::one())].into_iter().collect())
    }

    /// `π·x`.
    pub fn sn_act(&self, pi: &Permutation, x: &HilbertElement) -> Result<HilbertElement> {
        self.check(x)?;
        if pi.n() != self.n {
            return Err(Error::SizeMismatch(pi.n(), self.n));
        }
        let p = self.perm_index[pi.images()];
        let mut coords = BTreeMap::new();
        for (t, c) in &x.coords {
            let (t2, odd) = self.act_basis(p, *t);
            add_into(&mut coords, t2, c.clone().signed(odd));
        }
        Ok(self.element(coords))
    }

    /// Coordinates of `(1/n!) Σ_π π·x` in the invariant basis.
    pub fn invariant_coords(&self, x: &HilbertElement) -> Result<BTreeMap<usize, Q>> {
        self.check(x)?;
        Ok(self.project_coords(x.coords.iter().map(|(t, c)| (*t, c.clone()))))
    }

    fn project_coords(&self, terms: impl IntoIterator<Item = (usize, Q)>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (t, c) in terms {
            if let OrbitSlot::Member(k, odd) = self.slots[t] {
                add_into(&mut out, k, c.signed(odd));
            }
        }
        out
    }

    /// The invariant basis vector `v_O` as an element of `H_n`.
    pub fn invariant_element(&self, k: usize) -> HilbertElement {
        let inv = &self.invariants[k];
        let w = Q::new(1, inv.members.len() as i64);
        self.element(inv.members.iter().map(|(t, odd)| (*t, w.clone().signed(*odd))).collect())
    }

    pub fn from_invariant_coords(&self, coords: &BTreeMap<usize, Q>) -> HilbertElement {
        let mut out = BTreeMap::new();
        for (k, c) in coords {
            for (t, x) in self.invariant_element(*k).coords {
                add_into(&mut out, t, x * c);
            }
        }
        self.element(out)
    }

    pub fn invariant_projection(&self, x: &HilbertElement) -> Result<HilbertElement> {
        Ok(self.from_invariant_coords(&self.invariant_coords(x)?))
    }

    pub fn is_invariant(&self, x: &HilbertElement) -> Result<bool> {
        Ok(&self.invariant_projection(x)? == x)
    }

    /// `(1⊗…⊗1)⟨id⟩`.
    pub fn unit(&self) -> HilbertElement {
        let unit: Vec<(usize, Q)> = self.h.unit_coords().to_vec();
        let choices: Vec<Vec<(usize, Q)>> = vec![unit; self.n];
        let mut coords = BTreeMap::new();
        let mut stack: Vec<(Legs, Q)> = vec![(SmallVec::new(), Q::one())];
        for c in &choices {
            stack = stack
                .into_iter()
                .flat_map(|(legs, q)| {
                    c.iter().map(move |(i, k)| {
                        let mut l = legs.clone();
                        l.push(*i);
                        (l, &q * k)
                    })
                })
                .collect();
        }
        for (labels, c) in stack {
            let t = self.index[&Key { weight: Weight::ZERO, sigma: 0, labels }];
            add_into(&mut coords, t, c);
        }
        self.element(coords)
    }

    pub fn unit_invariant_coords(&self) -> BTreeMap<usize, Q> {
        self.project_coords(self.unit().coords)
    }

    /// Graded dimensions of `H^[n]`, by weight and degree.
    pub fn dims(&self) -> BTreeMap<(Weight, i32), usize> {
        let mut out = BTreeMap::new();
        for inv in &self.invariants {
            *out.entry((inv.weight, inv.degree)).or_insert(0) += 1;
        }
        out
    }

    // ---- the product ----

    fn pair_data(&self, s: usize, t: usize) -> Arc<PairData> {
        if let Some(p) = self.pairs.read().expect("lock").get(&(s, t)) {
            return p.clone();
        }
        let (sigma, tau) = (&self.perms[s], &self.perms[t]);
        let stp = sigma.compose(tau).expect("same n");
        let st = self.perm_index[stp.images()];
        let joint = joint_orbits(sigma, tau).expect("same n");
        let group = |o: &OrbitPartition| {
            let mut g = vec![Vec::new(); joint.len()];
            for (k, b) in o.blocks().iter().enumerate() {
                g[joint.block_of(b[0])].push(k);
            }
            g
        };
        let sigma_groups = group(&self.perm_orbits[s]);
        let tau_groups = group(&self.perm_orbits[t]);
        let st_groups = group(&self.perm_orbits[st]);
        let gamma = joint
            .blocks()
            .iter()
            .enumerate()
            .map(|(c, b)| {
                let twice =
                    b.len() as i64 + 2 - (sigma_groups[c].len() + tau_groups[c].len() + st_groups[c].len()) as i64;
                debug_assert!(twice >= 0 && twice % 2 == 0);
                (twice / 2) as u32
            })
            .collect();
        let data = Arc::new(PairData { st, joint, sigma_groups, tau_groups, st_groups, gamma });
        self.pairs.write().expect("lock").insert((s, t), data.clone());
        data
    }

    /// Multiplies the legs of each group, after moving them into group order.
    fn nabla(&self, labels: &[usize], groups: &[Vec<usize>]) -> Tensor {
        let order: Vec<usize> = groups.iter().flatten().copied().collect();
        let sign = Q::one().signed(reorder_is_odd(&order, &self.odd_legs(labels)));
        let mut out: Tensor = vec![(SmallVec::new(), sign)];
        for g in groups {
            let mut prod: BTreeMap<usize, Q> = self.h.unit_coords().iter().cloned().collect();
            for &k in g {
                let x: BTreeMap<usize, Q> = [(labels[k], Q::one())].into_iter().collect();
                prod = self.h.mul_coords(&prod, &x);
            }
            out = out
                .into_iter()
                .flat_map(|(legs, c)| {
                    prod.iter().map(move |(i, k)| {
                        let mut l = legs.clone();
                        l.push(*i);
                        (l, &c * k)
                    })
                })
                .collect();
        }
        out
    }

    /// `m_{σ,τ}(α, β)` for basis vectors, as `H_n` coordinates over `στ`.
    pub fn basis_product(&self, t1: usize, t2: usize) -> Vec<(usize, Q)> {
        let g = self.h.group();
        let (k1, k2) = (&self.basis[t1], &self.basis[t2]);
        let pd = self.pair_data(k1.sigma, k2.sigma);
        let lm = g.add(k1.weight, k2.weight);
        let a = self.nabla(&k1.labels, &pd.sigma_groups);
        let b = self.nabla(&k2.labels, &pd.tau_groups);
        let st_orbits = &self.perm_orbits[pd.st];
        let st_order: Vec<usize> = pd.st_groups.iter().flatten().copied().collect();
        let mut st_pos = vec![0; st_order.len()];
        for (p, &k) in st_order.iter().enumerate() {
            st_pos[k] = p;
        }

        let mut out: BTreeMap<usize, Q> = BTreeMap::new();
        for (la, ca) in &a {
            for (lb, cb) in &b {
                // (a_1 ⊗ … ⊗ a_J)(b_1 ⊗ … ⊗ b_J) = ± ⊗_C a_C b_C
                let mut odd = false;
                let mut odd_after = false;
                for c in (0..la.len()).rev() {
                    if self.h.is_odd(lb[c]) && odd_after {
                        odd = !odd;
                    }
                    if self.h.is_odd(la[c]) {
                        odd_after = !odd_after;
                    }
                }
                let coeff = (ca * cb).signed(odd);
                // per joint orbit: product, Euler insertion, split
                let mut acc: Tensor = vec![(SmallVec::new(), coeff)];
                for c in 0..pd.joint.len() {
                    let x: BTreeMap<usize, Q> = [(la[c], Q::one())].into_iter().collect();
                    let y: BTreeMap<usize, Q> = [(lb[c], Q::one())].into_iter().collect();
                    let xy = self.h.mul_coords(&x, &y);
                    let xye = self.h.mul_coords(&xy, &self.euler_powers[pd.gamma[c] as usize]);
                    let weights: Vec<Weight> = pd.st_groups[c]
                        .iter()
                        .map(|&k| g.scale(st_orbits.blocks()[k].len() as i64, lm))
                        .collect();
                    let mut pieces: Tensor = Vec::new();
                    for (i, k) in &xye {
                        for (legs, c2) in self.h.iterated_diagonal(*i, &weights).expect("diagonal present") {
                            pieces.push((legs.into_iter().collect(), c2 * k));
                        }
                    }
                    if pieces.is_empty() {
                        acc.clear();
                        break;
                    }
                    acc = acc
                        .into_iter()
                        .flat_map(|(legs, c1)| {
                            pieces.iter().map(move |(p, c2)| {
                                let mut l = legs.clone();
                                l.extend(p.iter().copied());
                                (l, &c1 * c2)
                            })
                        })
                        .collect();
                }
                for (grouped, c) in acc {
                    // grouped[p] is the leg of στ-orbit st_order[p]
                    let order: Vec<usize> = (0..grouped.len()).map(|k| st_pos[k]).collect();
                    let odd = reorder_is_odd(&order, &self.odd_legs(&grouped));
                    let labels: Legs = order.iter().map(|&p| grouped[p]).collect();
                    let t = self.index[&Key { weight: lm, sigma: pd.st, labels }];
                    add_into(&mut out, t, c.signed(odd));
                }
            }
        }
        out.into_iter().collect()
    }

    /// Product of arbitrary elements of `H_n`.
    pub fn product(&self, x: &HilbertElement, y: &HilbertElement) -> Result<HilbertElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = BTreeMap::new();
        for (t1, c1) in &x.coords {
            for (t2, c2) in &y.coords {
                let k = c1 * c2;
                for (t, c) in self.basis_product(*t1, *t2) {
                    add_into(&mut out, t, c * &k);
                }
            }
        }
        Ok(self.element(out))
    }

    /// `v_i · v_j` in invariant coordinates, computed as `P(r_i · v_j)` and
    /// memoised.
    pub fn invariant_product(&self, i: usize, j: usize) -> Arc<Vec<(usize, Q)>> {
        if let Some(v) = self.table.read().expect("lock").get(&(i, j)) {
            return v.clone();
        }
        let r = self.invariants[i].representative;
        let inv = &self.invariants[j];
        let w = Q::new(1, inv.members.len() as i64);
        let mut terms = Vec::new();
        for (t, odd) in &inv.members {
            let c = w.clone().signed(*odd);
            for (t3, k) in self.basis_product(r, *t) {
                terms.push((t3, k * &c));
            }
        }
        let v: Arc<Vec<(usize, Q)>> = Arc::new(self.project_coords(terms).into_iter().collect());
        self.table.write().expect("lock").insert((i, j), v.clone());
        v
    }

    /// Fills the memo table for all pairs in parallel.
    pub fn fill_table(&self) {
        let d = self.dim();
        (0..d * d).into_par_iter().for_each(|k| {
            self.invariant_product(k / d, k % d);
        });
    }

    /// Product of elements given by invariant coordinates.
    pub fn multiply_invariant(&self, x: &BTreeMap<usize, Q>, y: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a * b;
                for (k, c) in self.invariant_product(*i, *j).iter() {
                    add_into(&mut out, *k, c * &ab);
                }
            }
        }
        out
    }

    // ---- symmetrisation ----

    /// `Σ_σ ⊗_B α_{σ,B}⟨σ⟩ ↦ (1/n!) Σ_σ Π_B α_{σ,B}` with `α_{σ,B}` at level `|B|`.
    pub fn to_symmetric_word(&self, x: &HilbertElement, fock: &FockSpace<'_>) -> Result<FockVector> {
        if !self.is_invariant(x)? {
            return Err(Error::NotInvariant);
        }
        let scale = factorial(self.n).recip();
        let mut terms = Vec::new();
        for (t, c) in &x.coords {
            let key = &self.basis[*t];
            let blocks = self.perm_orbits[key.sigma].blocks();
            let factors: Vec<(i64, usize)> =
                blocks.iter().zip(&key.labels).map(|(b, &i)| (b.len() as i64, i)).collect();
            if let Some((m, odd)) = fock.normalize(&factors)? {
                terms.push((m, (c * &scale).signed(odd)));
            }
        }
        Ok(FockVector::from_terms(terms))
    }

    // ---- serialisation ----

    pub fn element_to_json(&self, x: &HilbertElement) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = x
            .coords
            .iter()
            .map(|(t, c)| {
                let key = &self.basis[*t];
                let blocks = self.perm_orbits[key.sigma].blocks();
                let labels: serde_json::Map<String, serde_json::Value> = blocks
                    .iter()
                    .zip(&key.labels)
                    .map(|(b, &i)| {
                        let name = b.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",");
                        (format!("{{{}}}", name), json!(self.h.id(i)))
                    })
                    .collect();
                json!({
                    "sigma": self.perms[key.sigma].to_string(),
                    "weight": self.h.group().display(key.weight).to_string(),
                    "labels": labels,
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    /// Parses the output of [`element_to_json`](Self::element_to_json).
    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<HilbertElement> {
        let bad = |m: &str| Error::Parse(format!("Hilbert element: {}", m));
        let arr = v.as_array().ok_or_else(|| bad("expected a list"))?;
        let mut coords = BTreeMap::new();
        for term in arr {
            let sigma = Permutation::parse(
                term["sigma"].as_str().ok_or_else(|| bad("missing sigma"))?,
                Some(self.n),
            )?;
            let s = *self.perm_index.get(sigma.images()).ok_or_else(|| bad("bad sigma"))?;
            let labels_obj = term["labels"].as_object().ok_or_else(|| bad("missing labels"))?;
            let blocks = self.perm_orbits[s].blocks();
            let mut labels: Legs = SmallVec::new();
            for b in blocks {
                let name = format!("{{{}}}", b.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(","));
                let id = labels_obj.get(&name).and_then(|x| x.as_str()).ok_or_else(|| bad("missing orbit label"))?;
                labels.push(self.h.index_of(id).ok_or_else(|| bad("unknown basis id"))?);
            }
            let weight = match term.get("weight").and_then(|w| w.as_str()) {
                None => Weight::ZERO,
                Some(w) => {
                    let coords: Vec<i64> = w
                        .trim_matches(|c| c == '(' || c == ')')
                        .split(',')
                        .map(|x| x.trim().parse().map_err(|_| bad("bad weight")))
                        .collect::<Result<_>>()?;
                    self.h.group().from_coords(&coords)?
                }
            };
            let c: Q = term["coeff"].as_str().ok_or_else(|| bad("missing coeff"))?.parse()?;
            let t = *self
                .index
                .get(&Key { weight, sigma: s, labels })
                .ok_or_else(|| bad("labels do not match the orbit weights"))?;
            add_into(&mut coords, t, c);
        }
        Ok(self.element(coords))
    }
}

/// `∇^f`: multiplies, per coarse orbit, the legs of the fine orbits mapping to
/// it (in canonical order, with the Koszul sign of the regrouping). `labels`
/// has one basis index per fine orbit; the result has one per coarse orbit.
pub fn nabla(
    h: &AlgebraPresentation,
    labels: &[usize],
    fine: &OrbitPartition,
    coarse: &OrbitPartition,
) -> Result<Vec<(Vec<usize>, Q)>> {
    if labels.len() != fine.len() {
        return Err(Error::SizeMismatch(labels.len(), fine.len()));
    }
    let f = crate::perm::orbit_surjection(fine, coarse)?;
    let mut groups = vec![Vec::new(); coarse.len()];
    for (k, &c) in f.iter().enumerate() {
        groups[c].push(k);
    }
    let order: Vec<usize> = groups.iter().flatten().copied().collect();
    let odd: Vec<bool> = labels.iter().map(|&i| h.is_odd(i)).collect();
    let mut out: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::one().signed(reorder_is_odd(&order, &odd)))];
    for g in &groups {
        let mut prod: BTreeMap<usize, Q> = h.unit_coords().iter().cloned().collect();
        for &k in g {
            prod = h.mul_coords(&prod, &[(labels[k], Q::one())].into_iter().collect());
        }
        out = out
            .into_iter()
            .flat_map(|(legs, c)| {
                prod.iter().map(move |(i, k)| {
                    let mut l = legs.clone();
                    l.push(*i);
                    (l, &c * k)
                })
            })
            .collect();
    }
    Ok(out)
}

/// `Δ_{J,I}`: splits the leg of each coarse orbit over the fine orbits mapping
/// to it, projecting fine orbit `B` to weight `fine_weights[B]`, then puts the
/// legs in canonical fine order with Koszul signs.
pub fn delta_map(
    h: &AlgebraPresentation,
    labels: &[usize],
    coarse: &OrbitPartition,
    fine: &OrbitPartition,
    fine_weights: &[Weight],
) -> Result<Vec<(Vec<usize>, Q)>> {
    if labels.len() != coarse.len() {
        return Err(Error::SizeMismatch(labels.len(), coarse.len()));
    }
    if fine_weights.len() != fine.len() {
        return Err(Error::SizeMismatch(fine_weights.len(), fine.len()));
    }
    if !h.has_diagonal() {
        return Err(Error::NoDiagonal);
    }
    let f = crate::perm::orbit_surjection(fine, coarse)?;
    let mut groups = vec![Vec::new(); coarse.len()];
    for (k, &c) in f.iter().enumerate() {
        groups[c].push(k);
    }
    let grouped: Vec<usize> = groups.iter().flatten().copied().collect();
    let mut pos = vec![0; grouped.len()];
    for (p, &k) in grouped.iter().enumerate() {
        pos[k] = p;
    }
    let mut acc: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::one())];
    for (c, g) in groups.iter().enumerate() {
        let weights: Vec<Weight> = g.iter().map(|&k| fine_weights[k]).collect();
        let pieces = h.iterated_diagonal(labels[c], &weights)?;
        acc = acc
            .into_iter()
            .flat_map(|(legs, c1)| {
                pieces.iter().map(move |(p, c2)| {
                    let mut l = legs.clone();
                    l.extend(p.iter().copied());
                    (l, &c1 * c2)
                })
            })
            .collect();
    }
    Ok(acc
        .into_iter()
        .map(|(legs, c)| {
            let odd: Vec<bool> = legs.iter().map(|&i| h.is_odd(i)).collect();
            let sign = reorder_is_odd(&pos, &odd);
            (pos.iter().map(|&p| legs[p]).collect(), c.signed(sign))
        })
        .collect())
}

/// Which triples of invariant basis vectors the ring check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triples {
    All,
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Default)]
pub struct RingReport {
    pub associativity: usize,
    pub commutativity: usize,
    pub unit: usize,
    pub degree: usize,
    pub failure: Option<String>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl std::fmt::Display for RingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "associativity {} triples, commutativity {} pairs, unit {} vectors, degree {} pairs: {}",
            self.associativity,
            self.commutativity,
            self.unit,
            self.degree,
            match &self.failure {
                None => "pass".to_string(),
                Some(w) => format!("FAIL ({})", w),
            }
        )
    }
}

impl HilbertAlgebra {
    fn unit_vector(&self, i: usize) -> BTreeMap<usize, Q> {
        [(i, Q::one())].into_iter().collect()
    }

    /// Associativity, graded commutativity, degree additivity and unit
    /// neutrality on the invariant basis.
    pub fn check_ring_axioms(&self, triples: Triples) -> RingReport {
        use rand::{Rng, SeedableRng};
        let d = self.dim();
        let mut report = RingReport::default();
        if d == 0 {
            return report;
        }
        let list: Vec<(usize, usize, usize)> = match triples {
            Triples::All => (0..d * d * d).map(|k| (k / (d * d), (k / d) % d, k % d)).collect(),
            Triples::Random { count, seed } => {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                (0..count).map(|_| (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d))).collect()
            }
        };
        let mut pairs: Vec<(usize, usize)> = match triples {
            Triples::All => (0..d * d).map(|k| (k / d, k % d)).collect(),
            Triples::Random { .. } => list.iter().flat_map(|&(i, j, k)| [(i, j), (j, k), (i, k)]).collect(),
        };
        pairs.sort_unstable();
        pairs.dedup();
        let shift = self.n as i32 * self.h.degree_d();

        let pair_failure = pairs.par_iter().find_map_first(|&(i, j)| {
            let ij = self.invariant_product(i, j);
            let ji = self.invariant_product(j, i);
            let (di, dj) = (self.invariants[i].degree, self.invariants[j].degree);
            let odd = di.rem_euclid(2) == 1 && dj.rem_euclid(2) == 1;
            let ji_signed: Vec<(usize, Q)> = ji.iter().map(|(k, c)| (*k, c.clone().signed(odd))).collect();
            if *ij != ji_signed {
                return Some(format!("v{} v{} ≠ ±v{} v{}", i, j, j, i));
            }
            ij.iter()
                .find(|(k, _)| self.invariants[*k].degree != di + dj + shift)
                .map(|(k, _)| format!("v{} v{} has a component v{} of the wrong degree", i, j, k))
        });
        report.commutativity = pairs.len();
        report.degree = pairs.len();
        if let Some(w) = pair_failure {
            report.failure = Some(w);
            return report;
        }

        let unit = self.unit_invariant_coords();
        let unit_failure = (0..d).into_par_iter().find_map_first(|i| {
            let x = self.unit_vector(i);
            (self.multiply_invariant(&unit, &x) != x || self.multiply_invariant(&x, &unit) != x)
                .then(|| format!("unit does not fix v{}", i))
        });
        report.unit = d;
        if let Some(w) = unit_failure {
            report.failure = Some(w);
            return report;
        }

        let assoc_failure = list.par_iter().find_map_first(|&(i, j, k)| {
            let (x, y, z) = (self.unit_vector(i), self.unit_vector(j), self.unit_vector(k));
            let left = self.multiply_invariant(&self.multiply_invariant(&x, &y), &z);
            let right = self.multiply_invariant(&x, &self.multiply_invariant(&y, &z));
            (left != right).then(|| format!("(v{} v{}) v{} ≠ v{} (v{} v{})", i, j, k, i, j, k))
        });
        report.associativity = list.len();
        report.failure = assoc_failure;
        report
    }
}

fn cartesian(choices: &[&[usize]], cur: &mut Legs, f: &mut dyn FnMut(&Legs)) {
    if cur.len() == choices.len() {
        f(cur);
        return;
    }
    for &i in choices[cur.len()] {
        cur.push(i);
        cartesian(choices, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::model;

    fn toy(n: usize) -> HilbertAlgebra {
        HilbertAlgebra::build(&model("toy-sphere").unwrap().presentation, n).unwrap()
    }

    #[test]
    fn toy_dimensions() {
        let a = toy(2);
        assert_eq!(a.dim_hn(), 6);
        assert_eq!(a.dim(), 5);
        assert_eq!(toy(0).dim(), 1);
        assert_eq!(toy(1).dim(), 2);
        assert_eq!(toy(3).dim(), 10);
    }

    #[test]
    fn transposition_squared() {
        let a = toy(2);
        let h = a.presentation();
        let (one, p) = (h.index_of("1").unwrap(), h.index_of("p").unwrap());
        let s = Permutation::parse("(1 2)", Some(2)).unwrap();
        let id = Permutation::identity(2);
        let t = a.index_of(&s, &[one], Weight::ZERO).unwrap();
        let x = a.basis_element(t);
        let sq = a.product(&x, &x).unwrap();
        let expect = a
            .basis_element(a.index_of(&id, &[one, p], Weight::ZERO).unwrap())
            .plus(&a.basis_element(a.index_of(&id, &[p, one], Weight::ZERO).unwrap()))
            .unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn three_cycle_squared_on_toy() {
        // σ = τ = (1 2 3): one joint orbit, γ = 1, στ = (1 3 2) has one orbit
        let a = toy(3);
        let h = a.presentation();
        let (one, p) = (h.index_of("1").unwrap(), h.index_of("p").unwrap());
        let c = Permutation::parse("(1 2 3)", Some(3)).unwrap();
        let c2 = Permutation::parse("(1 3 2)", Some(3)).unwrap();
        let x = a.basis_element(a.index_of(&c, &[one], Weight::ZERO).unwrap());
        let sq = a.product(&x, &x).unwrap();
        let expect = a.basis_element(a.index_of(&c2, &[p], Weight::ZERO).unwrap()).scaled(&Q::from_int(2));
        assert_eq!(sq, expect);
    }

    #[test]
    fn unit_is_neutral_and_h1_is_h() {
        for n in 0..=3 {
            let a = toy(n);
            let u = a.unit_invariant_coords();
            for i in 0..a.dim() {
                let x: BTreeMap<usize, Q> = [(i, Q::one())].into_iter().collect();
                assert_eq!(a.multiply_invariant(&u, &x), x);
                assert_eq!(a.multiply_invariant(&x, &u), x);
            }
        }
        let h = model("k3").unwrap().presentation;
        let a = HilbertAlgebra::build(&h, 1).unwrap();
        assert_eq!(a.dim(), h.dim());
        for x in 0..h.dim() {
            for y in 0..h.dim() {
                let tx = a.index_of(&Permutation::identity(1), &[x], Weight::ZERO).unwrap();
                let ty = a.index_of(&Permutation::identity(1), &[y], Weight::ZERO).unwrap();
                let got: Vec<(usize, Q)> = a.basis_product(tx, ty);
                let want: Vec<(usize, Q)> = h
                    .mult_basis(x, y)
                    .iter()
                    .map(|(o, c)| (a.index_of(&Permutation::identity(1), &[*o], Weight::ZERO).unwrap(), c.clone()))
                    .collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn action_is_a_group_action() {
        let a = HilbertAlgebra::build(&model("abelian").unwrap().presentation, 3).unwrap();
        let perms = a.permutations().to_vec();
        for t in (0..a.dim_hn()).step_by(37) {
            let x = a.basis_element(t);
            for p1 in &perms {
                for p2 in &perms {
                    let lhs = a.sn_act(p1, &a.sn_act(p2, &x).unwrap()).unwrap();
                    let rhs = a.sn_act(&p1.compose(p2).unwrap(), &x).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        assert_eq!(a.sn_act(&Permutation::identity(3), &a.basis_element(5)).unwrap(), a.basis_element(5));
    }

    #[test]
    fn odd_swap_sign() {
        let a = HilbertAlgebra::build(&model("abelian").unwrap().presentation, 2).unwrap();
        let h = a.presentation();
        let (a1, a2) = (h.index_of("a1").unwrap(), h.index_of("a2").unwrap());
        let id = Permutation::identity(2);
        let s = Permutation::parse("(1 2)", Some(2)).unwrap();
        let t = a.index_of(&id, &[a1, a2], Weight::ZERO).unwrap();
        let swapped = a.sn_act(&s, &a.basis_element(t)).unwrap();
        let u = a.index_of(&id, &[a2, a1], Weight::ZERO).unwrap();
        assert_eq!(swapped, a.basis_element(u).scaled(&-Q::one()));
        // a1 ⊗ a1 is killed by the swap
        let v = a.index_of(&id, &[a1, a1], Weight::ZERO).unwrap();
        assert_eq!(a.invariant_coords(&a.basis_element(v)).unwrap(), BTreeMap::new());
    }

    #[test]
    fn equivariance_on_basis_pairs() {
        let a = HilbertAlgebra::build(&model("abelian").unwrap().presentation, 2).unwrap();
        let perms = a.permutations().to_vec();
        for t1 in (0..a.dim_hn()).step_by(7) {
            for t2 in (0..a.dim_hn()).step_by(11) {
                let (x, y) = (a.basis_element(t1), a.basis_element(t2));
                let xy = a.product(&x, &y).unwrap();
                for p in &perms {
                    let lhs = a.sn_act(p, &xy).unwrap();
                    let rhs = a.product(&a.sn_act(p, &x).unwrap(), &a.sn_act(p, &y).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn symmetric_words() {
        let h = model("toy-sphere").unwrap().presentation;
        let fock = FockSpace::standard(&h).unwrap();
        let a1 = HilbertAlgebra::build(&h, 1).unwrap();
        let w = a1.to_symmetric_word(&a1.unit(), &fock).unwrap();
        assert_eq!(w, fock.monomial(&[(1, "1")]).unwrap());
        let a2 = HilbertAlgebra::build(&h, 2).unwrap();
        let x = a2.basis_element(0);
        if !a2.is_invariant(&x).unwrap() {
            assert_eq!(a2.to_symmetric_word(&x, &fock), Err(Error::NotInvariant));
        }
    }

    #[test]
    fn json_round_trip() {
        let h = model("enriques-z2").unwrap().presentation;
        let a = HilbertAlgebra::build(&h, 2).unwrap();
        for k in (0..a.dim()).step_by(13) {
            let x = a.invariant_element(k);
            let back = a.element_from_json(&a.element_to_json(&x)).unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn ring_axioms_small() {
        for name in ["toy-sphere", "abelian", "enriques-z2"] {
            let a = HilbertAlgebra::build(&model(name).unwrap().presentation, 2).unwrap();
            let r = a.check_ring_axioms(Triples::Random { count: 300, seed: 7 });
            assert!(r.passed(), "{}: {}", name, r);
        }
        let r = toy(3).check_ring_axioms(Triples::All);
        assert!(r.passed(), "{}", r);
        assert_eq!(r.associativity, 1000);
    }

    #[test]
    fn nabla_and_delta_on_toy() {
        let h = model("toy-sphere").unwrap().presentation;
        let (one, p) = (h.index_of("1").unwrap(), h.index_of("p").unwrap());
        let two = OrbitPartition::from_blocks(2, vec![vec![0], vec![1]]).unwrap();
        let merged = OrbitPartition::from_blocks(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(nabla(&h, &[one, one], &two, &merged).unwrap(), vec![(vec![one], Q::one())]);
        assert!(nabla(&h, &[p, p], &two, &merged).unwrap().is_empty());
        assert_eq!(nabla(&h, &[p, one], &two, &two).unwrap(), vec![(vec![p, one], Q::one())]);
        assert!(matches!(nabla(&h, &[one], &merged, &two), Err(Error::NotARefinement)));

        let z = [Weight::ZERO; 3];
        let split = delta_map(&h, &[one], &merged, &two, &z[..2]).unwrap();
        assert_eq!(split, vec![(vec![one, p], Q::one()), (vec![p, one], Q::one())]);
        // splitting into three in one go or in two steps agrees
        let three = OrbitPartition::from_blocks(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        let all = OrbitPartition::from_blocks(3, vec![vec![0, 1, 2]]).unwrap();
        let mid = OrbitPartition::from_blocks(3, vec![vec![0, 1], vec![2]]).unwrap();
        let direct: BTreeMap<Vec<usize>, Q> = delta_map(&h, &[one], &all, &three, &z).unwrap().into_iter().collect();
        let mut stepwise: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (legs, c) in delta_map(&h, &[one], &all, &mid, &z[..2]).unwrap() {
            for (l2, c2) in delta_map(&h, &legs, &mid, &three, &z).unwrap() {
                add_into(&mut stepwise, l2, c2 * &c);
            }
        }
        assert_eq!(direct, stepwise);
        assert_eq!(direct.len(), 3);
    }

    #[test]
    fn budget_guard() {
        let h = model("k3").unwrap().presentation;
        assert!(matches!(HilbertAlgebra::build_with_budget(&h, 3, 1000), Err(Error::BudgetExceeded(_, 1000))));
    }
}
