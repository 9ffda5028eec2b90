//! Weighted, graded Frobenius algebra presentations and their elements.
//!
//! Degrees follow the shifted convention: for a surface the unit sits in degree
//! `-d = -2` and the point class in degree `2`. Multiplication has degree `d`,
//! the integral degree `-d`, the diagonal degree `d`. Signs use the parity of
//! the stored degree.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Q;
use crate::weights::{Weight, WeightGroup};

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub id: String,
    pub degree: i32,
    pub weight: Weight,
    /// Shifted Hodge bidegree with `p + q = degree`.
    pub bidegree: Option<(i32, i32)>,
}

/// Sparse coproduct of one basis vector: `Σ c · a ⊗ b`.
pub type Coproduct = Vec<(usize, usize, Q)>;

#[derive(Debug, Clone)]
pub struct HopfData {
    /// Comultiplication `δ`, of degree `-d`.
    pub delta: Vec<Coproduct>,
    /// Counit `ε`, of degree `d`.
    pub epsilon: Vec<Q>,
}

#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    uid: u64,
    degree_d: i32,
    group: WeightGroup,
    basis: Vec<BasisVector>,
    index: HashMap<String, usize>,
    by_weight: Vec<Vec<usize>>,
    unit: Vec<(usize, Q)>,
    mult: Vec<Vec<(usize, Q)>>,
    integral: Option<Vec<Q>>,
    diagonal: Option<Vec<Coproduct>>,
    hopf: Option<HopfData>,
}

/// A rational combination of basis vectors of one presentation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    owner: u64,
    coords: BTreeMap<usize, Q>,
}

/// A rational combination of pure tensors of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    owner: u64,
    pub terms: BTreeMap<Vec<usize>, Q>,
}

pub(crate) fn add_into<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl Element {
    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn coords(&self) -> &BTreeMap<usize, Q> {
        &self.coords
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coords.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn plus(&self, other: &Element) -> Result<Element> {
        if self.owner != other.owner {
            return Err(Error::OwnerMismatch);
        }
        let mut coords = self.coords.clone();
        for (i, c) in &other.coords {
            add_into(&mut coords, *i, c.clone());
        }
        Ok(Element { owner: self.owner, coords })
    }

    pub fn minus(&self, other: &Element) -> Result<Element> {
        self.plus(&other.scaled(&-Q::one()))
    }

    pub fn scaled(&self, q: &Q) -> Element {
        if q.is_zero() {
            return Element { owner: self.owner, coords: BTreeMap::new() };
        }
        let coords = self.coords.iter().map(|(i, c)| (*i, c * q)).collect();
        Element { owner: self.owner, coords }
    }
}

impl TensorElement {
    pub fn owner(&self) -> u64 {
        self.owner
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Collects presentation data by basis id and resolves it in [`build`].
///
/// [`build`]: PresentationBuilder::build
#[derive(Debug, Clone)]
pub struct PresentationBuilder {
    degree_d: i32,
    group: WeightGroup,
    basis: Vec<BasisVector>,
    unit: Vec<(String, Q)>,
    mult: Vec<(String, String, String, Q)>,
    integral: Option<Vec<(String, Q)>>,
    diagonal: Option<Vec<(String, String, String, Q)>>,
    delta: Option<Vec<(String, String, String, Q)>>,
    epsilon: Option<Vec<(String, Q)>>,
}

impl PresentationBuilder {
    pub fn new(degree_d: i32, group: WeightGroup) -> PresentationBuilder {
        PresentationBuilder {
            degree_d,
            group,
            basis: Vec::new(),
            unit: Vec::new(),
            mult: Vec::new(),
            integral: None,
            diagonal: None,
            delta: None,
            epsilon: None,
        }
    }

    pub fn basis(
        &mut self,
        id: &str,
        degree: i32,
        weight: Weight,
        bidegree: Option<(i32, i32)>,
    ) -> &mut Self {
        self.basis.push(BasisVector { id: id.to_string(), degree, weight, bidegree });
        self
    }

    pub fn unit(&mut self, id: &str, c: Q) -> &mut Self {
        self.unit.push((id.to_string(), c));
        self
    }

    pub fn mult(&mut self, a: &str, b: &str, out: &str, c: Q) -> &mut Self {
        self.mult.push((a.to_string(), b.to_string(), out.to_string(), c));
        self
    }

    pub fn integral(&mut self, id: &str, c: Q) -> &mut Self {
        self.integral.get_or_insert_with(Vec::new).push((id.to_string(), c));
        self
    }

    pub fn diagonal(&mut self, x: &str, a: &str, b: &str, c: Q) -> &mut Self {
        self.diagonal.get_or_insert_with(Vec::new).push((
            x.to_string(),
            a.to_string(),
            b.to_string(),
            c,
        ));
        self
    }

    /// Marks the diagonal as present even if it has no entries.
    pub fn empty_diagonal(&mut self) -> &mut Self {
        self.diagonal.get_or_insert_with(Vec::new);
        self
    }

    pub fn hopf_delta(&mut self, x: &str, a: &str, b: &str, c: Q) -> &mut Self {
        self.delta.get_or_insert_with(Vec::new).push((
            x.to_string(),
            a.to_string(),
            b.to_string(),
            c,
        ));
        self
    }

    pub fn hopf_epsilon(&mut self, id: &str, c: Q) -> &mut Self {
        self.epsilon.get_or_insert_with(Vec::new).push((id.to_string(), c));
        self
    }

    pub fn build(&self) -> Result<AlgebraPresentation> {
        let mut index = HashMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            if b.id.is_empty() {
                return Err(Error::Malformed("empty basis id".into()));
            }
            if index.insert(b.id.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate basis id `{}`", b.id)));
            }
            if b.weight.0 as usize >= self.group.order() {
                return Err(Error::Malformed(format!("weight of `{}` outside the group", b.id)));
            }
            if let Some((p, q)) = b.bidegree {
                if p + q != b.degree {
                    return Err(Error::Malformed(format!(
                        "bidegree ({}, {}) of `{}` does not sum to its degree {}",
                        p, q, b.id, b.degree
                    )));
                }
            }
        }
        let look = |id: &str| -> Result<usize> {
            index.get(id).copied().ok_or_else(|| Error::Malformed(format!("unknown basis id `{}`", id)))
        };
        let dim = self.basis.len();

        let mut unit = BTreeMap::new();
        for (id, c) in &self.unit {
            add_into(&mut unit, look(id)?, c.clone());
        }
        if unit.is_empty() {
            return Err(Error::Malformed("unit is zero".into()));
        }

        let mut mult: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); dim * dim];
        for (a, b, out, c) in &self.mult {
            let (a, b, out) = (look(a)?, look(b)?, look(out)?);
            add_into(&mut mult[a * dim + b], out, c.clone());
        }

        let integral = match &self.integral {
            None => None,
            Some(entries) => {
                let mut v = vec![Q::zero(); dim];
                for (id, c) in entries {
                    let i = look(id)?;
                    v[i] += c;
                }
                Some(v)
            }
        };

        let coproduct = |entries: &Vec<(String, String, String, Q)>| -> Result<Vec<Coproduct>> {
            let mut per: Vec<BTreeMap<(usize, usize), Q>> = vec![BTreeMap::new(); dim];
            for (x, a, b, c) in entries {
                add_into(&mut per[look(x)?], (look(a)?, look(b)?), c.clone());
            }
            Ok(per
                .into_iter()
                .map(|m| m.into_iter().map(|((a, b), c)| (a, b, c)).collect())
                .collect())
        };

        let diagonal = self.diagonal.as_ref().map(coproduct).transpose()?;

        let hopf = match (&self.delta, &self.epsilon) {
            (None, None) => None,
            (Some(delta), Some(eps)) => {
                let mut epsilon = vec![Q::zero(); dim];
                for (id, c) in eps {
                    epsilon[look(id)?] += c;
                }
                Some(HopfData { delta: coproduct(delta)?, epsilon })
            }
            _ => return Err(Error::Malformed("Hopf data needs both delta and epsilon".into())),
        };

        let mut by_weight = vec![Vec::new(); self.group.order()];
        for (i, b) in self.basis.iter().enumerate() {
            by_weight[b.weight.0 as usize].push(i);
        }

        Ok(AlgebraPresentation {
            uid: fresh_uid(),
            degree_d: self.degree_d,
            group: self.group.clone(),
            basis: self.basis.clone(),
            index,
            by_weight,
            unit: unit.into_iter().collect(),
            mult: mult.into_iter().map(|m| m.into_iter().collect()).collect(),
            integral,
            diagonal,
            hopf,
        })
    }
}

impl AlgebraPresentation {
    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn degree_d(&self) -> i32 {
        self.degree_d
    }

    pub fn group(&self) -> &WeightGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.basis[i].id
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].degree % 2 != 0
    }

    pub fn weight(&self, i: usize) -> Weight {
        self.basis[i].weight
    }

    pub fn basis_of_weight(&self, w: Weight) -> &[usize] {
        &self.by_weight[w.0 as usize]
    }

    pub fn unit_coords(&self) -> &[(usize, Q)] {
        &self.unit
    }

    /// Index of the unit when it is a single basis vector with coefficient one.
    pub fn unit_index(&self) -> Option<usize> {
        match self.unit.as_slice() {
            [(i, c)] if c.is_one() => Some(*i),
            _ => None,
        }
    }

    pub fn mult_basis(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.mult[a * self.dim() + b]
    }

    pub fn integral(&self) -> Option<&[Q]> {
        self.integral.as_deref()
    }

    pub fn has_diagonal(&self) -> bool {
        self.diagonal.is_some()
    }

    pub fn diagonal_of_basis(&self, x: usize) -> Result<&[(usize, usize, Q)]> {
        self.diagonal.as_ref().map(|d| d[x].as_slice()).ok_or(Error::NoDiagonal)
    }

    pub fn hopf(&self) -> Option<&HopfData> {
        self.hopf.as_ref()
    }

    // ---- elements ----

    pub fn element(&self, coords: impl IntoIterator<Item = (usize, Q)>) -> Element {
        let mut map = BTreeMap::new();
        for (i, c) in coords {
            assert!(i < self.dim(), "basis index out of range");
            add_into(&mut map, i, c);
        }
        Element { owner: self.uid, coords: map }
    }

    pub fn basis_element(&self, i: usize) -> Element {
        self.element([(i, Q::one())])
    }

    pub fn element_by_id(&self, id: &str) -> Option<Element> {
        self.index_of(id).map(|i| self.basis_element(i))
    }

    pub fn zero(&self) -> Element {
        self.element([])
    }

    pub fn unit(&self) -> Element {
        self.element(self.unit.iter().cloned())
    }

    fn check_owner(&self, x: &Element) -> Result<()> {
        if x.owner != self.uid {
            return Err(Error::OwnerMismatch);
        }
        Ok(())
    }

    pub fn is_homogeneous_degree(&self, x: &Element) -> Option<i32> {
        let mut it = x.coords.keys().map(|&i| self.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_weight(&self, x: &Element) -> Option<Weight> {
        let mut it = x.coords.keys().map(|&i| self.weight(i));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Product of two sparse coordinate vectors.
    pub fn mul_coords(&self, x: &BTreeMap<usize, Q>, y: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                let cab = ca * cb;
                for (o, c) in self.mult_basis(*a, *b) {
                    add_into(&mut out, *o, &cab * c);
                }
            }
        }
        out
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_owner(a)?;
        self.check_owner(b)?;
        Ok(Element { owner: self.uid, coords: self.mul_coords(&a.coords, &b.coords) })
    }

    pub fn integrate(&self, x: &Element) -> Result<Q> {
        self.check_owner(x)?;
        let integral = self.integral.as_ref().ok_or(Error::NoIntegral)?;
        Ok(x.coords.iter().map(|(i, c)| c * &integral[*i]).sum())
    }

    /// `⟨a, b⟩ = ∫ a·b`.
    pub fn pair(&self, a: &Element, b: &Element) -> Result<Q> {
        if self.integral.is_none() {
            return Err(Error::NoIntegral);
        }
        let ab = self.multiply(a, b)?;
        self.integrate(&ab)
    }

    pub(crate) fn pair_basis(&self, a: usize, b: usize) -> Q {
        let integral = self.integral.as_ref().expect("integral present");
        self.mult_basis(a, b).iter().map(|(o, c)| c * &integral[*o]).sum()
    }

    /// `Δ(x)` for an arbitrary element.
    pub fn diagonal(&self, x: &Element) -> Result<TensorElement> {
        self.check_owner(x)?;
        let mut terms = BTreeMap::new();
        for (i, c) in &x.coords {
            for (a, b, k) in self.diagonal_of_basis(*i)? {
                add_into(&mut terms, vec![*a, *b], c * k);
            }
        }
        Ok(TensorElement { owner: self.uid, terms })
    }

    /// The `(L, M)` component of `Δ(x)`, in `H(L) ⊗ H(M)`.
    pub fn diagonal_component(&self, x: &Element, l: Weight, m: Weight) -> Result<TensorElement> {
        self.check_owner(x)?;
        if !self.has_diagonal() {
            return Err(Error::NoDiagonal);
        }
        if let Some(w) = self.is_homogeneous_weight(x) {
            if w != self.group.add(l, m) {
                return Err(Error::WeightMismatch(format!(
                    "element of weight {} split as {} + {}",
                    self.group.display(w),
                    self.group.display(l),
                    self.group.display(m)
                )));
            }
        } else if !x.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        let full = self.diagonal(x)?;
        let terms = full.terms.into_iter().filter(|(k, _)| self.weight(k[0]) == l).collect();
        Ok(TensorElement { owner: self.uid, terms })
    }

    /// Iterated diagonal of a basis vector into `weights.len()` legs, projected
    /// onto `H(w_1) ⊗ ... ⊗ H(w_k)`.
    pub fn iterated_diagonal(&self, x: usize, weights: &[Weight]) -> Result<Vec<(Vec<usize>, Q)>> {
        let mut out = Vec::new();
        self.split_into(x, weights, &mut Vec::new(), &Q::one(), 0, &mut out)?;
        Ok(out)
    }

    fn split_into(
        &self,
        x: usize,
        weights: &[Weight],
        prefix: &mut Vec<usize>,
        coeff: &Q,
        prefix_degree: i32,
        out: &mut Vec<(Vec<usize>, Q)>,
    ) -> Result<()> {
        match weights {
            [] => Ok(()),
            [w] => {
                if self.weight(x) == *w {
                    let mut legs = prefix.clone();
                    legs.push(x);
                    out.push((legs, coeff.clone()));
                }
                Ok(())
            }
            [w, rest @ ..] => {
                // Δ has degree d and passes the legs already produced
                let odd = (self.degree_d * prefix_degree) % 2 != 0;
                for (a, b, c) in self.diagonal_of_basis(x)? {
                    if self.weight(*a) != *w {
                        continue;
                    }
                    let k = (coeff * c).signed(odd);
                    prefix.push(*a);
                    self.split_into(*b, rest, prefix, &k, prefix_degree + self.degree(*a), out)?;
                    prefix.pop();
                }
                Ok(())
            }
        }
    }

    /// `Δ(w)1 = Σ e_(1)(w) ⊗ e_(2)(w) ∈ H(w) ⊗ H(-w)`, characterised by
    /// `Σ ⟨a, e_(1)⟩ e_(2) = a` for every `a` of weight `-w`.
    pub fn dual_basis(&self, w: Weight) -> Result<TensorElement> {
        if self.integral.is_none() {
            return Err(Error::NoIntegral);
        }
        let xs = self.basis_of_weight(w);
        let ys = self.basis_of_weight(self.group.neg(w));
        let degenerate = || Error::DegeneratePairing(self.group.display(w).to_string());
        if xs.len() != ys.len() {
            return Err(degenerate());
        }
        // m[k][i] = ⟨y_k, x_i⟩
        let m: Vec<Vec<Q>> =
            ys.iter().map(|&y| xs.iter().map(|&x| self.pair_basis(y, x)).collect()).collect();
        let c = linalg::invert(&m).ok_or_else(degenerate)?;
        let mut terms = BTreeMap::new();
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                add_into(&mut terms, vec![x, y], c[i][j].clone());
            }
        }
        Ok(TensorElement { owner: self.uid, terms })
    }

    /// A copy of this presentation whose diagonal is the pairing-dual of the
    /// multiplication, `Δ(x) = (x ⊗ 1) · Σ_w Δ(w)1`.
    pub fn derive_diagonal_from_integral(&self) -> Result<AlgebraPresentation> {
        if self.integral.is_none() {
            return Err(Error::NoIntegral);
        }
        let mut copairing: Vec<(usize, usize, Q)> = Vec::new();
        for w in self.group.elements() {
            if self.basis_of_weight(w).is_empty() && self.basis_of_weight(self.group.neg(w)).is_empty()
            {
                continue;
            }
            for (k, c) in self.dual_basis(w)?.terms {
                copairing.push((k[0], k[1], c));
            }
        }
        let mut diagonal = Vec::with_capacity(self.dim());
        for x in 0..self.dim() {
            let mut m: BTreeMap<(usize, usize), Q> = BTreeMap::new();
            for (a, b, c) in &copairing {
                for (xa, k) in self.mult_basis(x, *a) {
                    add_into(&mut m, (*xa, *b), c * k);
                }
            }
            diagonal.push(m.into_iter().map(|((a, b), c)| (a, b, c)).collect());
        }
        let mut out = self.clone();
        out.uid = fresh_uid();
        out.diagonal = Some(diagonal);
        Ok(out)
    }

    /// Returns `self` if it already carries a diagonal, otherwise derives one.
    pub fn with_diagonal(&self) -> Result<AlgebraPresentation> {
        if self.has_diagonal() {
            Ok(self.clone())
        } else {
            self.derive_diagonal_from_integral()
        }
    }

    /// `e = ∇(Δ_{0,0}(1))`.
    pub fn euler_class(&self) -> Result<Element> {
        let d = self.diagonal_component(&self.unit(), Weight::ZERO, Weight::ZERO)?;
        let mut coords = BTreeMap::new();
        for (k, c) in &d.terms {
            for (o, m) in self.mult_basis(k[0], k[1]) {
                add_into(&mut coords, *o, c * m);
            }
        }
        Ok(Element { owner: self.uid, coords })
    }

    /// `∇(Δ(w)1) ∈ H(0)`, the weight-`w` contribution to the Euler class.
    pub fn local_euler_class(&self, w: Weight) -> Result<Element> {
        let d = self.dual_basis(w)?;
        let mut coords = BTreeMap::new();
        for (k, c) in &d.terms {
            for (o, m) in self.mult_basis(k[0], k[1]) {
                add_into(&mut coords, *o, c * m);
            }
        }
        Ok(Element { owner: self.uid, coords })
    }

    /// Hodge-number bookkeeping of the weight-`w` component: counts of basis
    /// vectors by shifted bidegree. Missing bidegrees count as `(degree, 0)`.
    pub fn bidegree_counts(&self, w: Weight) -> BTreeMap<(i32, i32), i64> {
        let mut out = BTreeMap::new();
        for &i in self.basis_of_weight(w) {
            let b = &self.basis[i];
            *out.entry(b.bidegree.unwrap_or((b.degree, 0))).or_insert(0) += 1;
        }
        out
    }

    pub(crate) fn parts(&self) -> PresentationParts {
        PresentationParts {
            degree_d: self.degree_d,
            group: self.group.clone(),
            basis: self.basis.clone(),
            unit: self.unit.clone(),
            mult: self.mult.clone(),
            integral: self.integral.clone(),
            diagonal: self.diagonal.clone(),
            hopf: self.hopf.clone(),
        }
    }
}

/// Raw, index-based contents of a presentation.
pub(crate) struct PresentationParts {
    pub degree_d: i32,
    pub group: WeightGroup,
    pub basis: Vec<BasisVector>,
    pub unit: Vec<(usize, Q)>,
    pub mult: Vec<Vec<(usize, Q)>>,
    pub integral: Option<Vec<Q>>,
    pub diagonal: Option<Vec<Coproduct>>,
    pub hopf: Option<HopfData>,
}

impl PresentationParts {
    /// Converts back into a builder, keyed by basis id.
    pub fn to_builder(&self) -> PresentationBuilder {
        let dim = self.basis.len();
        let id = |i: usize| self.basis[i].id.as_str();
        let mut b = PresentationBuilder::new(self.degree_d, self.group.clone());
        for v in &self.basis {
            b.basis(&v.id, v.degree, v.weight, v.bidegree);
        }
        for (i, c) in &self.unit {
            b.unit(id(*i), c.clone());
        }
        for x in 0..dim {
            for y in 0..dim {
                for (o, c) in &self.mult[x * dim + y] {
                    b.mult(id(x), id(y), id(*o), c.clone());
                }
            }
        }
        if let Some(integral) = &self.integral {
            for (i, c) in integral.iter().enumerate() {
                if !c.is_zero() {
                    b.integral(id(i), c.clone());
                }
            }
            if integral.iter().all(|c| c.is_zero()) {
                b.integral.get_or_insert_with(Vec::new);
            }
        }
        if let Some(diag) = &self.diagonal {
            b.empty_diagonal();
            for (x, cop) in diag.iter().enumerate() {
                for (a, bb, c) in cop {
                    b.diagonal(id(x), id(*a), id(*bb), c.clone());
                }
            }
        }
        if let Some(h) = &self.hopf {
            b.delta.get_or_insert_with(Vec::new);
            b.epsilon.get_or_insert_with(Vec::new);
            for (x, cop) in h.delta.iter().enumerate() {
                for (a, bb, c) in cop {
                    b.hopf_delta(id(x), id(*a), id(*bb), c.clone());
                }
            }
            for (i, c) in h.epsilon.iter().enumerate() {
                if !c.is_zero() {
                    b.hopf_epsilon(id(i), c.clone());
                }
            }
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> AlgebraPresentation {
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, Some((-1, -1)))
            .basis("p", 2, Weight::ZERO, Some((1, 1)))
            .unit("1", Q::one())
            .mult("1", "1", "1", Q::one())
            .mult("1", "p", "p", Q::one())
            .mult("p", "1", "p", Q::one())
            .integral("p", Q::one());
        b.build().unwrap()
    }

    #[test]
    fn toy_products_and_pairing() {
        let h = toy();
        let one = h.element_by_id("1").unwrap();
        let p = h.element_by_id("p").unwrap();
        assert!(h.multiply(&p, &p).unwrap().is_zero());
        assert_eq!(h.multiply(&one, &p).unwrap(), p);
        assert_eq!(h.pair(&one, &p).unwrap(), Q::one());
        assert_eq!(h.pair(&one, &one).unwrap(), Q::zero());
    }

    #[test]
    fn owner_mismatch_is_rejected() {
        let h1 = toy();
        let h2 = toy();
        let a = h1.unit();
        let b = h2.unit();
        assert_eq!(h1.multiply(&a, &b), Err(Error::OwnerMismatch));
        assert_eq!(a.plus(&b), Err(Error::OwnerMismatch));
    }

    #[test]
    fn toy_diagonal_and_euler_class() {
        let h = toy().derive_diagonal_from_integral().unwrap();
        let (one, p) = (h.index_of("1").unwrap(), h.index_of("p").unwrap());
        let d1 = h.diagonal_component(&h.unit(), Weight::ZERO, Weight::ZERO).unwrap();
        let expect: BTreeMap<Vec<usize>, Q> =
            [(vec![one, p], Q::one()), (vec![p, one], Q::one())].into_iter().collect();
        assert_eq!(d1.terms, expect);
        let dp = h.diagonal(&h.basis_element(p)).unwrap();
        assert_eq!(dp.terms, [(vec![p, p], Q::one())].into_iter().collect());
        assert_eq!(h.euler_class().unwrap(), h.element([(p, Q::from_int(2))]));
        assert_eq!(h.dual_basis(Weight::ZERO).unwrap().terms, expect);
    }

    #[test]
    fn missing_structure_errors() {
        let h = toy();
        assert_eq!(h.euler_class(), Err(Error::NoDiagonal));
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, None).unit("1", Q::one()).mult("1", "1", "1", Q::one());
        let bare = b.build().unwrap();
        assert_eq!(bare.pair(&bare.unit(), &bare.unit()), Err(Error::NoIntegral));
        assert_eq!(bare.derive_diagonal_from_integral().err(), Some(Error::NoIntegral));
    }

    #[test]
    fn degenerate_pairing_detected() {
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, None)
            .basis("p", 2, Weight::ZERO, None)
            .unit("1", Q::one())
            .mult("1", "1", "1", Q::one())
            .mult("1", "p", "p", Q::one())
            .mult("p", "1", "p", Q::one())
            .integral("1", Q::one());
        let h = b.build().unwrap();
        assert!(matches!(h.derive_diagonal_from_integral(), Err(Error::DegeneratePairing(_))));
    }

    #[test]
    fn builder_rejects_bad_structure() {
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, None).basis("1", 2, Weight::ZERO, None).unit("1", Q::one());
        assert!(matches!(b.build(), Err(Error::Malformed(_))));
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, Some((0, 0))).unit("1", Q::one());
        assert!(matches!(b.build(), Err(Error::Malformed(_))));
        let mut b = PresentationBuilder::new(2, WeightGroup::trivial());
        b.basis("1", -2, Weight::ZERO, None).unit("x", Q::one());
        assert!(matches!(b.build(), Err(Error::Malformed(_))));
    }
}
