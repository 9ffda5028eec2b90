//! The Fock module of a weighted Frobenius algebra: creation and annihilation
//! operators `q(α)`, Virasoro operators `L(α)` and the boundary operator `∂`.
//!
//! For a chosen weight `L`, level `ν` of the Fock space carries `A(ν) = H(νL)`.
//! Vectors are combinations of monomials `q(f_1)···q(f_k)|0⟩` with the factors
//! `f = (level ≥ 1, basis vector)` sorted; reordering costs Koszul signs and
//! odd factors square to zero.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::presentation::{add_into, AlgebraPresentation, Element};
use crate::scalar::Q;
use crate::weights::Weight;

type Code = u32;

fn code(level: i64, idx: usize) -> Code {
    debug_assert!(level > 0 && level < 1 << 16 && idx < 1 << 16);
    ((level as u32) << 16) | idx as u32
}

fn level_of(c: Code) -> i64 {
    (c >> 16) as i64
}

fn idx_of(c: Code) -> usize {
    (c & 0xffff) as usize
}

/// A normalised creation monomial; the empty monomial is the vacuum.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial(SmallVec<[Code; 8]>);

impl FockMonomial {
    pub fn vacuum() -> FockMonomial {
        FockMonomial::default()
    }

    /// `(level, basis index)` pairs in canonical order.
    pub fn factors(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|&c| (level_of(c), idx_of(c)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().map(|&c| level_of(c)).sum()
    }
}

/// Unmerged list of terms.
pub type Terms = Vec<(FockMonomial, Q)>;

fn merge(mut t: Terms) -> Terms {
    t.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Terms = Vec::with_capacity(t.len());
    for (m, c) in t {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += &c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// Whether unmerged terms sum to zero; reorders them.
fn cancels(t: &mut Terms) -> bool {
    match t.len() {
        0 => true,
        1 => t[0].1.is_zero(),
        2 if t[0].0 == t[1].0 => (&t[0].1 + &t[1].1).is_zero(),
        _ => {
            t.sort_by(|a, b| a.0.cmp(&b.0));
            let mut i = 0;
            while i < t.len() {
                let mut j = i;
                let mut acc = Q::zero();
                while j < t.len() && t[j].0 == t[i].0 {
                    acc += &t[j].1;
                    j += 1;
                }
                if !acc.is_zero() {
                    return false;
                }
                i = j;
            }
            true
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: BTreeMap<FockMonomial, Q>,
}

impl FockVector {
    pub fn zero() -> FockVector {
        FockVector::default()
    }

    pub fn vacuum() -> FockVector {
        FockVector::monomial(FockMonomial::vacuum())
    }

    pub fn monomial(m: FockMonomial) -> FockVector {
        FockVector { terms: [(m, Q::one())].into_iter().collect() }
    }

    pub fn from_terms(t: Terms) -> FockVector {
        let mut terms = BTreeMap::new();
        for (m, c) in t {
            add_into(&mut terms, m, c);
        }
        FockVector { terms }
    }

    pub fn terms(&self) -> &BTreeMap<FockMonomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn plus(&self, other: &FockVector) -> FockVector {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_into(&mut terms, m.clone(), c.clone());
        }
        FockVector { terms }
    }

    pub fn scaled(&self, q: &Q) -> FockVector {
        FockVector::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect())
    }

    fn as_terms(&self) -> Terms {
        self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect()
    }
}

/// Generators of the Heisenberg algebra: the central `c`, the degree operator
/// `d`, and `a(ν, x)` for a basis vector `x` of `A(ν)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeisenbergElement {
    C,
    D,
    A { level: i64, id: String },
}

/// How the boundary recursion splits a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Expansion {
    FirstFactor,
    LastFactor,
}

pub struct FockSpace<'a> {
    h: &'a AlgebraPresentation,
    l: Weight,
    order: i64,
    odd: Vec<bool>,
    pairing: Vec<Vec<Q>>,
    /// `Δ(rL)1` for each residue `r` modulo the order of `L`.
    dual: Vec<Vec<(usize, usize, Q)>>,
    /// `virasoro[x][r]`: the terms of `L(x)` whose first leg has level `≡ r`.
    virasoro: Vec<Vec<Vec<(usize, usize, Q)>>>,
}

impl<'a> FockSpace<'a> {
    pub fn new(h: &'a AlgebraPresentation, l: Weight) -> Result<FockSpace<'a>> {
        let integral = h.integral().ok_or(Error::NoIntegral)?;
        if h.dim() >= 1 << 16 {
            return Err(Error::Malformed("basis too large for the Fock encoding".into()));
        }
        let g = h.group();
        let order = g.element_order(l) as i64;
        let dim = h.dim();
        let pairing = (0..dim)
            .map(|a| {
                (0..dim).map(|b| h.mult_basis(a, b).iter().map(|(o, c)| c * &integral[*o]).sum()).collect()
            })
            .collect();
        let mut dual = Vec::new();
        for r in 0..order {
            let t = h.dual_basis(g.scale(r, l))?;
            dual.push(t.terms.into_iter().map(|(k, c)| (k[0], k[1], c)).collect());
        }
        let mut f = FockSpace {
            h,
            l,
            order,
            odd: (0..dim).map(|i| h.is_odd(i)).collect(),
            pairing,
            dual,
            virasoro: Vec::new(),
        };
        f.virasoro = (0..dim).map(|x| f.virasoro_terms(x)).collect();
        Ok(f)
    }

    /// The Fock space at the group's default level generator.
    pub fn standard(h: &'a AlgebraPresentation) -> Result<FockSpace<'a>> {
        FockSpace::new(h, h.group().default_level_generator())
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        self.h
    }

    pub fn level_weight(&self, level: i64) -> Weight {
        self.h.group().scale(level, self.l)
    }

    pub fn level_basis(&self, level: i64) -> &[usize] {
        self.h.basis_of_weight(self.level_weight(level))
    }

    fn residue(&self, level: i64) -> usize {
        level.rem_euclid(self.order) as usize
    }

    pub fn degree(&self, m: &FockMonomial) -> i32 {
        m.factors().map(|(_, i)| self.h.degree(i)).sum()
    }

    pub fn is_odd_monomial(&self, m: &FockMonomial) -> bool {
        m.0.iter().filter(|&&c| self.odd[idx_of(c)]).count() % 2 == 1
    }

    /// Sorts arbitrary factors into a monomial, returning the Koszul sign as a
    /// parity; `None` if an odd factor repeats.
    pub fn normalize(&self, factors: &[(i64, usize)]) -> Result<Option<(FockMonomial, bool)>> {
        let mut codes: SmallVec<[Code; 8]> = SmallVec::new();
        for &(level, i) in factors {
            if level < 1 || i >= self.h.dim() || self.h.weight(i) != self.level_weight(level) {
                return Err(Error::WeightMismatch(format!(
                    "basis vector {} does not live at level {}",
                    self.h.id(i.min(self.h.dim() - 1)),
                    level
                )));
            }
            codes.push(code(level, i));
        }
        let mut odd = false;
        for i in 0..codes.len() {
            for j in i + 1..codes.len() {
                let (a, b) = (codes[i], codes[j]);
                if self.odd[idx_of(a)] && self.odd[idx_of(b)] {
                    if a == b {
                        return Ok(None);
                    }
                    if a > b {
                        odd = !odd;
                    }
                }
            }
        }
        codes.sort_unstable();
        Ok(Some((FockMonomial(codes), odd)))
    }

    pub fn monomial(&self, factors: &[(i64, &str)]) -> Result<FockVector> {
        let mut idx = Vec::new();
        for (level, id) in factors {
            let i = self.h.index_of(id).ok_or_else(|| Error::Malformed(format!("unknown basis id `{}`", id)))?;
            idx.push((*level, i));
        }
        Ok(match self.normalize(&idx)? {
            None => FockVector::zero(),
            Some((m, odd)) => FockVector::monomial(m).scaled(&Q::one().signed(odd)),
        })
    }

    /// Visits all monomials of exactly weight `w`, in canonical order.
    fn visit(&self, w: i64, f: &mut dyn FnMut(&FockMonomial)) {
        let mut cur = FockMonomial::vacuum();
        let bases: Vec<Vec<usize>> = (0..=w).map(|lv| if lv == 0 { vec![] } else { self.level_basis(lv).to_vec() }).collect();
        self.visit_rec(w, code(1, 0), &bases, &mut cur, f);
    }

    fn visit_rec(
        &self,
        remaining: i64,
        min_code: Code,
        bases: &[Vec<usize>],
        cur: &mut FockMonomial,
        f: &mut dyn FnMut(&FockMonomial),
    ) {
        if remaining == 0 {
            f(cur);
            return;
        }
        for level in level_of(min_code).max(1)..=remaining {
            for &i in &bases[level as usize] {
                let c = code(level, i);
                if c < min_code {
                    continue;
                }
                cur.0.push(c);
                let next = if self.odd[i] { c + 1 } else { c };
                self.visit_rec(remaining - level, next, bases, cur, f);
                cur.0.pop();
            }
        }
    }

    pub fn monomials(&self, w: i64) -> Vec<FockMonomial> {
        let mut out = Vec::new();
        self.visit(w, &mut |m| out.push(m.clone()));
        out
    }

    pub fn monomials_up_to(&self, w: i64) -> Vec<FockMonomial> {
        (0..=w).flat_map(|k| self.monomials(k)).collect()
    }

    /// Dimensions of the weight-`n` spaces, by degree, for `n ≤ max_weight`.
    pub fn dimensions(&self, max_weight: i64) -> BTreeMap<(i64, i32), u64> {
        let mut out = BTreeMap::new();
        for w in 0..=max_weight {
            self.visit(w, &mut |m| *out.entry((w, self.degree(m))).or_insert(0) += 1);
        }
        out
    }

    // ---- single-monomial operators ----

    /// `q(x)` for a basis vector `x` at `level`, applied to `c·m`.
    fn q_mono(&self, level: i64, x: usize, m: &FockMonomial, c: &Q, out: &mut Terms) {
        if level > 0 {
            let new = code(level, x);
            let pos = m.0.partition_point(|&f| f < new);
            if self.odd[x] && m.0.get(pos) == Some(&new) {
                return;
            }
            let odd = self.odd[x] && m.0[..pos].iter().filter(|&&f| self.odd[idx_of(f)]).count() % 2 == 1;
            let mut v = m.0.clone();
            v.insert(pos, new);
            out.push((FockMonomial(v), c.clone().signed(odd)));
        } else if level < 0 {
            let k = -level;
            let lo = code(k, 0);
            let start = m.0.partition_point(|&f| f < lo);
            let mut odd_before = m.0[..start].iter().filter(|&&f| self.odd[idx_of(f)]).count() % 2 == 1;
            for j in start..m.0.len() {
                let f = m.0[j];
                if level_of(f) != k {
                    break;
                }
                let p = &self.pairing[x][idx_of(f)];
                if !p.is_zero() {
                    let mut v = m.0.clone();
                    v.remove(j);
                    let coeff = (c * p * Q::from_int(level)).signed(self.odd[x] && odd_before);
                    out.push((FockMonomial(v), coeff));
                }
                if self.odd[idx_of(f)] {
                    odd_before = !odd_before;
                }
            }
        }
    }

    fn q_terms(&self, level: i64, x: &[(usize, Q)], input: &Terms) -> Terms {
        let mut out = Vec::new();
        for (m, c) in input {
            for (i, k) in x {
                self.q_mono(level, *i, m, &(c * k), &mut out);
            }
        }
        out
    }

    /// Terms of `L(x)` for a basis vector `x` of `A(n)`, grouped by residue of
    /// the first leg's level: `(e1, e2·x, ½·coefficient)`.
    fn virasoro_terms(&self, x: usize) -> Vec<Vec<(usize, usize, Q)>> {
        let half = Q::new(1, 2);
        self.dual
            .iter()
            .map(|d| {
                let mut acc: BTreeMap<(usize, usize), Q> = BTreeMap::new();
                for (e1, e2, c) in d {
                    for (b, k) in self.h.mult_basis(*e2, x) {
                        add_into(&mut acc, (*e1, *b), c * k * &half);
                    }
                }
                acc.into_iter().map(|((a, b), c)| (a, b, c)).collect()
            })
            .collect()
    }

    fn l_terms(&self, n: i64, x: &[(usize, Q)], input: &Terms) -> Terms {
        let mut out = Vec::new();
        for (i, k) in x {
            let table = &self.virasoro[*i];
            for (m, c) in input {
                let w = m.weight();
                let span = w + n.abs();
                for nu in -span..=span {
                    if nu == 0 || nu == n {
                        continue;
                    }
                    let mu = n - nu;
                    for (e1, b, t) in &table[self.residue(nu)] {
                        let coeff = c * k * t;
                        let mut mid = Vec::new();
                        // normal order: the lower level acts first
                        if nu >= mu {
                            self.q_mono(mu, *b, m, &coeff, &mut mid);
                            for (m2, c2) in &mid {
                                self.q_mono(nu, *e1, m2, c2, &mut out);
                            }
                        } else {
                            let coeff = coeff.signed(self.odd[*e1] && self.odd[*b]);
                            self.q_mono(nu, *e1, m, &coeff, &mut mid);
                            for (m2, c2) in &mid {
                                self.q_mono(mu, *b, m2, c2, &mut out);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn check_level(&self, level: i64, x: &Element) -> Result<Vec<(usize, Q)>> {
        if x.owner() != self.h.uid() {
            return Err(Error::OwnerMismatch);
        }
        match self.h.is_homogeneous_weight(x) {
            None if x.is_zero() => Ok(Vec::new()),
            None => Err(Error::NotHomogeneous),
            Some(w) if w != self.level_weight(level) => Err(Error::WeightMismatch(format!(
                "element of weight {} used at level {}",
                self.h.group().display(w),
                level
            ))),
            Some(_) => Ok(x.coords().iter().map(|(i, c)| (*i, c.clone())).collect()),
        }
    }

    // ---- public operators ----

    /// `q(α)` for `α ∈ A(level)`.
    pub fn q_apply(&self, level: i64, alpha: &Element, v: &FockVector) -> Result<FockVector> {
        let x = self.check_level(level, alpha)?;
        Ok(FockVector::from_terms(self.q_terms(level, &x, &v.as_terms())))
    }

    /// `L(α)` for `α ∈ A(n)`.
    pub fn virasoro_l(&self, n: i64, alpha: &Element, v: &FockVector) -> Result<FockVector> {
        let x = self.check_level(n, alpha)?;
        Ok(FockVector::from_terms(self.l_terms(n, &x, &v.as_terms())))
    }

    pub fn heisenberg_apply(&self, x: &HeisenbergElement, v: &FockVector) -> Result<FockVector> {
        match x {
            HeisenbergElement::C => Ok(v.clone()),
            HeisenbergElement::D => Ok(FockVector::from_terms(
                v.terms.iter().map(|(m, c)| (m.clone(), c * Q::from_int(m.weight()))).collect(),
            )),
            HeisenbergElement::A { level, id } => {
                let e = self
                    .h
                    .element_by_id(id)
                    .ok_or_else(|| Error::Malformed(format!("unknown basis id `{}`", id)))?;
                self.q_apply(*level, &e, v)
            }
        }
    }

    /// `e_ν = ∇Δ(νL)1`.
    fn local_euler(&self, nu: i64) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (a, b, c) in &self.dual[self.residue(nu)] {
            for (o, k) in self.h.mult_basis(*a, *b) {
                add_into(&mut out, *o, c * k);
            }
        }
        out
    }

    fn integrate(&self, x: &BTreeMap<usize, Q>) -> Q {
        let integral = self.h.integral().expect("checked at construction");
        x.iter().map(|(i, c)| c * &integral[*i]).sum()
    }

    fn euler_form_raw(&self, n: i64, a: &[(usize, Q)], b: &[(usize, Q)]) -> Q {
        if n < 0 {
            // e(β, α) = −(−1)^{|α||β|} e(α, β), basis component by component
            let mut acc = Q::zero();
            for (i, ci) in a {
                for (j, cj) in b {
                    let e = self.euler_form_raw(-n, &[(*j, Q::one())], &[(*i, Q::one())]);
                    acc -= (e * ci * cj).signed(self.odd[*i] && self.odd[*j]);
                }
            }
            return acc;
        }
        let av: BTreeMap<usize, Q> = a.iter().cloned().collect();
        let bv: BTreeMap<usize, Q> = b.iter().cloned().collect();
        let ab = self.h.mul_coords(&av, &bv);
        let mut acc = Q::zero();
        for nu in 1..n {
            let e = self.local_euler(nu);
            let w = Q::new(nu * (n - nu), 2);
            acc += w * self.integrate(&self.h.mul_coords(&e, &ab));
        }
        acc
    }

    /// The Euler form `e(α, β)` for `α ∈ A(n)`, `β ∈ A(−n)`.
    pub fn euler_form(&self, n: i64, alpha: &Element, beta: &Element) -> Result<Q> {
        let a = self.check_level(n, alpha)?;
        let b = self.check_level(-n, beta)?;
        Ok(self.euler_form_raw(n, &a, &b))
    }

    /// The closed form `(n³ − n)/12 · ∫ e α β`, valid when every level carries
    /// the same local Euler class.
    pub fn euler_form_closed(&self, n: i64, alpha: &Element, beta: &Element) -> Result<Q> {
        let a = self.check_level(n, alpha)?;
        let b = self.check_level(-n, beta)?;
        let av: BTreeMap<usize, Q> = a.into_iter().collect();
        let bv: BTreeMap<usize, Q> = b.into_iter().collect();
        let e = self.local_euler(0);
        let x = self.h.mul_coords(&e, &self.h.mul_coords(&av, &bv));
        Ok(Q::new(n * n * n - n, 12) * self.integrate(&x))
    }

    pub fn boundary(&self, canonical: Option<&Element>, expansion: Expansion) -> Result<Boundary<'_, 'a>> {
        let k = match canonical {
            None => Vec::new(),
            Some(k) => {
                let x = self.check_level(0, k)?;
                if let Some(d) = self.h.is_homogeneous_degree(k) {
                    if d != 0 {
                        return Err(Error::Malformed(format!("canonical class has degree {}, expected 0", d)));
                    }
                }
                x
            }
        };
        Ok(Boundary { fock: self, k, expansion, memo: HashMap::new() })
    }

    pub fn vector_to_json(&self, v: &FockVector) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = v
            .terms
            .iter()
            .map(|(m, c)| {
                let f: Vec<serde_json::Value> = m.factors().map(|(l, i)| json!([l, self.h.id(i)])).collect();
                json!({ "factors": f, "coeff": c.to_string() })
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    pub fn display_monomial(&self, m: &FockMonomial) -> String {
        if m.is_empty() {
            return "|0⟩".into();
        }
        let parts: Vec<String> = m.factors().map(|(l, i)| format!("q{}({})", l, self.h.id(i))).collect();
        format!("{}|0⟩", parts.join(""))
    }

    pub fn display_vector(&self, v: &FockVector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms.iter().map(|(m, c)| format!("{}·{}", c, self.display_monomial(m))).collect::<Vec<_>>().join(" + ")
    }
}

/// The boundary operator `∂`, determined by `∂|0⟩ = 0` and
/// `[∂, q(α)] = L(nα) + q(K(nα))` with `K(β) = (|n|−1)/2 · K·β`.
pub struct Boundary<'f, 'a> {
    fock: &'f FockSpace<'a>,
    k: Vec<(usize, Q)>,
    expansion: Expansion,
    memo: HashMap<FockMonomial, Terms>,
}

impl<'f, 'a> Boundary<'f, 'a> {
    /// `[∂, q(x)]` for a basis vector `x` at `level`.
    fn bracket_terms(&self, level: i64, x: usize, input: &Terms) -> Terms {
        let f = self.fock;
        let n = Q::from_int(level);
        let mut out = f.l_terms(level, &[(x, n.clone())], input);
        if !self.k.is_empty() && level.abs() > 1 {
            let scale = Q::new(level.abs() - 1, 2) * &n;
            let kv: BTreeMap<usize, Q> = self.k.iter().cloned().collect();
            let xv: BTreeMap<usize, Q> = [(x, scale)].into_iter().collect();
            let kx: Vec<(usize, Q)> = f.h.mul_coords(&kv, &xv).into_iter().collect();
            out.extend(f.q_terms(level, &kx, input));
        }
        out
    }

    fn mono(&mut self, m: &FockMonomial) -> Terms {
        if m.is_empty() {
            return Vec::new();
        }
        if let Some(t) = self.memo.get(m) {
            return t.clone();
        }
        let f = self.fock;
        let (pick, odd) = match self.expansion {
            Expansion::FirstFactor => (0, false),
            Expansion::LastFactor => {
                let last = m.len() - 1;
                let x = idx_of(m.0[last]);
                let odd = f.odd[x] && m.0[..last].iter().filter(|&&c| f.odd[idx_of(c)]).count() % 2 == 1;
                (last, odd)
            }
        };
        let c = m.0[pick];
        let (level, x) = (level_of(c), idx_of(c));
        let mut rest = m.clone();
        rest.0.remove(pick);
        let sign = Q::one().signed(odd);
        // m = ±q(x) rest, and ∂ q(x) rest = [∂, q(x)] rest + q(x) ∂ rest
        let mut out = self.bracket_terms(level, x, &vec![(rest.clone(), sign.clone())]);
        let inner = self.mono(&rest);
        let scaled: Terms = inner.into_iter().map(|(mm, cc)| (mm, cc * &sign)).collect();
        out.extend(f.q_terms(level, &[(x, Q::one())], &scaled));
        let out = merge(out);
        self.memo.insert(m.clone(), out.clone());
        out
    }

    fn terms(&mut self, input: &Terms) -> Terms {
        let mut out = Vec::new();
        for (m, c) in input {
            for (mm, cc) in self.mono(m) {
                out.push((mm, cc * c));
            }
        }
        out
    }

    pub fn apply(&mut self, v: &FockVector) -> FockVector {
        FockVector::from_terms(self.terms(&v.as_terms()))
    }
}

// ---- relation sweeps ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `[q(α), q(β)] = ⟨[d,α], β⟩`.
    Heisenberg,
    /// `[L(α), L(β)] = (m−n) L(αβ) − e(α,β)`.
    Virasoro,
    /// `[L(α), q(β)] = −q(α[d,β])`.
    VirasoroAndQ,
    /// `[∂, q(α)] = L([d,α]) + q(K([d,α]))`.
    Boundary,
    /// `[q'(α), q(β)] = −q([d,α][d,β]) − ∫ K([d,α])[d,β]`.
    Lehn,
    /// Expanding `∂` along the first or the last factor agrees.
    OrderIndependence,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Heisenberg => "heisenberg",
            Relation::Virasoro => "virasoro",
            Relation::VirasoroAndQ => "virasoro-and-q",
            Relation::Boundary => "boundary",
            Relation::Lehn => "lehn",
            Relation::OrderIndependence => "order-independence",
        }
    }

    pub fn parse(s: &str) -> Result<Relation> {
        Ok(match s {
            "heisenberg" => Relation::Heisenberg,
            "virasoro" => Relation::Virasoro,
            "virasoro-and-q" | "vir-and-q" => Relation::VirasoroAndQ,
            "boundary" => Relation::Boundary,
            "lehn" | "lehn-main" => Relation::Lehn,
            "order-independence" => Relation::OrderIndependence,
            other => return Err(Error::Parse(format!("unknown relation `{}`", other))),
        })
    }

    pub const ALL: [Relation; 6] = [
        Relation::Heisenberg,
        Relation::Virasoro,
        Relation::VirasoroAndQ,
        Relation::Boundary,
        Relation::Lehn,
        Relation::OrderIndependence,
    ];
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Relations are evaluated on all monomials of weight at most this.
    pub max_weight: i64,
    /// Operator levels range over `[-max_level, max_level]`.
    pub max_level: i64,
    pub canonical_class: Option<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub relation: Relation,
    pub cases: u64,
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "{:<20} pass ({} cases)", self.relation.name(), self.cases),
            Some(w) => write!(f, "{:<20} FAIL ({} cases) witness: {}", self.relation.name(), self.cases, w),
        }
    }
}

/// A homogeneous basis operator label: `(level, basis index)`.
type Label = (i64, usize);

impl<'a> FockSpace<'a> {
    fn labels(&self, max_level: i64) -> Vec<Label> {
        let mut out = Vec::new();
        for level in -max_level..=max_level {
            for &i in self.level_basis(level) {
                out.push((level, i));
            }
        }
        out
    }

    fn label(&self, (level, i): Label) -> String {
        format!("{}@{}", self.h.id(i), level)
    }

    fn mul_basis(&self, a: usize, b: usize) -> Vec<(usize, Q)> {
        self.h.mult_basis(a, b).to_vec()
    }

    /// Evaluates `relation` on every monomial up to the configured weight for
    /// every pair (or single) of basis operators; stops at the first failure.
    pub fn commutator_check(&self, relation: Relation, cfg: &CheckConfig) -> Result<CheckReport> {
        let monos = self.monomials_up_to(cfg.max_weight);
        let labels = self.labels(cfg.max_level);
        let one = Q::one();
        let k = cfg.canonical_class.as_ref();
        // sanity: the canonical class must be usable
        self.boundary(k, Expansion::FirstFactor)?;

        if relation == Relation::Heisenberg {
            let cases = (labels.len() * labels.len() * monos.len()) as u64;
            let witness = self.heisenberg_sweep(&monos, &labels);
            return Ok(CheckReport { relation, cases, witness });
        }

        let pairs: Vec<(Label, Label)> = match relation {
            Relation::Boundary | Relation::OrderIndependence => labels.iter().map(|&a| (a, a)).collect(),
            _ => labels.iter().flat_map(|&a| labels.iter().map(move |&b| (a, b))).collect(),
        };
        let pairs = if relation == Relation::OrderIndependence { vec![((0, 0), (0, 0))] } else { pairs };
        let cases = (pairs.len() * monos.len()) as u64;

        // precomputed per pair: Euler-form scalars and products
        let witness = monos
            .par_iter()
            .map_init(
                || {
                    (
                        self.boundary(k, Expansion::FirstFactor).expect("checked"),
                        self.boundary(k, Expansion::LastFactor).expect("checked"),
                    )
                },
                |(bd, bd_last), m| {
                    let input: Terms = vec![(m.clone(), one.clone())];
                    for &(a, b) in &pairs {
                        let residual = self.residual(relation, a, b, &input, bd, bd_last);
                        if !residual.is_empty() {
                            let what = match relation {
                                Relation::Boundary => self.label(a),
                                Relation::OrderIndependence => String::new(),
                                _ => format!("{}, {}", self.label(a), self.label(b)),
                            };
                            return Some(format!(
                                "({}) on {}: residual {}",
                                what,
                                self.display_monomial(m),
                                self.display_vector(&FockVector::from_terms(residual))
                            ));
                        }
                    }
                    None
                },
            )
            .find_map_first(|w| w);
        Ok(CheckReport { relation, cases, witness })
    }

    /// Heisenberg relation on all label pairs, caching `q(x)m` per monomial;
    /// a pair whose two single applications both vanish needs no more work.
    fn heisenberg_sweep(&self, monos: &[FockMonomial], labels: &[Label]) -> Option<String> {
        let one = Q::one();
        monos
            .par_iter()
            .map_init(Vec::new, |scratch: &mut Terms, m| {
                let qs: Vec<Terms> = labels
                    .iter()
                    .map(|&(level, x)| {
                        let mut o = Vec::new();
                        self.q_mono(level, x, m, &one, &mut o);
                        o
                    })
                    .collect();
                for (ia, &(la, a)) in labels.iter().enumerate() {
                    for (ib, &(lb, b)) in labels.iter().enumerate() {
                        let central = la + lb == 0 && la != 0 && !self.pairing[a][b].is_zero();
                        if qs[ia].is_empty() && qs[ib].is_empty() && !central {
                            continue;
                        }
                        let swap = self.odd[a] && self.odd[b];
                        scratch.clear();
                        for (t, c) in &qs[ib] {
                            self.q_mono(la, a, t, c, scratch);
                        }
                        let minus = (-one.clone()).signed(swap);
                        for (t, c) in &qs[ia] {
                            self.q_mono(lb, b, t, &(c * &minus), scratch);
                        }
                        if central {
                            scratch.push((m.clone(), -(Q::from_int(la) * &self.pairing[a][b])));
                        }
                        if !cancels(scratch) {
                            let residual = merge(std::mem::take(scratch));
                            return Some(format!(
                                "({}, {}) on {}: residual {}",
                                self.label((la, a)),
                                self.label((lb, b)),
                                self.display_monomial(m),
                                self.display_vector(&FockVector::from_terms(residual))
                            ));
                        }
                    }
                }
                None
            })
            .find_map_first(|w| w)
    }

    fn residual(
        &self,
        relation: Relation,
        (m, a): Label,
        (n, b): Label,
        input: &Terms,
        bd: &mut Boundary<'_, 'a>,
        bd_last: &mut Boundary<'_, 'a>,
    ) -> Terms {
        let one = Q::one();
        let xa = [(a, one.clone())];
        let xb = [(b, one.clone())];
        let swap = self.odd[a] && self.odd[b];
        let mut out: Terms;
        match relation {
            Relation::Heisenberg => {
                out = self.q_terms(m, &xa, &self.q_terms(n, &xb, input));
                let ba = self.q_terms(n, &xb, &self.q_terms(m, &xa, input));
                out.extend(ba.into_iter().map(|(t, c)| (t, (-c).signed(swap))));
                if m + n == 0 && m != 0 {
                    let c = Q::from_int(m) * &self.pairing[a][b];
                    out.extend(input.iter().map(|(t, k)| (t.clone(), -(k * &c))));
                }
            }
            Relation::Virasoro => {
                out = self.l_terms(m, &xa, &self.l_terms(n, &xb, input));
                let ba = self.l_terms(n, &xb, &self.l_terms(m, &xa, input));
                out.extend(ba.into_iter().map(|(t, c)| (t, (-c).signed(swap))));
                let ab: Vec<(usize, Q)> =
                    self.mul_basis(a, b).into_iter().map(|(i, c)| (i, c * Q::from_int(n - m))).collect();
                out.extend(self.l_terms(m + n, &ab, input));
                if m + n == 0 {
                    let e = self.euler_form_raw(m, &xa, &xb);
                    out.extend(input.iter().map(|(t, k)| (t.clone(), k * &e)));
                }
            }
            Relation::VirasoroAndQ => {
                out = self.l_terms(m, &xa, &self.q_terms(n, &xb, input));
                let ba = self.q_terms(n, &xb, &self.l_terms(m, &xa, input));
                out.extend(ba.into_iter().map(|(t, c)| (t, (-c).signed(swap))));
                let ab: Vec<(usize, Q)> =
                    self.mul_basis(a, b).into_iter().map(|(i, c)| (i, c * Q::from_int(n))).collect();
                out.extend(self.q_terms(m + n, &ab, input));
            }
            Relation::Boundary => {
                out = bd.terms(&self.q_terms(m, &xa, input));
                let qd = self.q_terms(m, &xa, &bd.terms(input));
                out.extend(qd.into_iter().map(|(t, c)| (t, -c)));
                let rhs = bd.bracket_terms(m, a, input);
                out.extend(rhs.into_iter().map(|(t, c)| (t, -c)));
            }
            Relation::Lehn => {
                // q'(α) w = ∂ q(α) w − q(α) ∂ w
                let qprime = |bd: &mut Boundary<'_, 'a>, w: &Terms| -> Terms {
                    let mut o = bd.terms(&self.q_terms(m, &xa, w));
                    let qd = self.q_terms(m, &xa, &bd.terms(w));
                    o.extend(qd.into_iter().map(|(t, c)| (t, -c)));
                    o
                };
                out = qprime(bd, &self.q_terms(n, &xb, input));
                let inner = qprime(bd, input);
                let ba = self.q_terms(n, &xb, &inner);
                out.extend(ba.into_iter().map(|(t, c)| (t, (-c).signed(swap))));
                let mn = Q::from_int(m * n);
                let ab: Vec<(usize, Q)> = self.mul_basis(a, b).into_iter().map(|(i, c)| (i, c * &mn)).collect();
                out.extend(self.q_terms(m + n, &ab, input));
                if m + n == 0 && !bd.k.is_empty() {
                    let kv: BTreeMap<usize, Q> = bd.k.iter().cloned().collect();
                    let abv: BTreeMap<usize, Q> = self.mul_basis(a, b).into_iter().collect();
                    let s = self.integrate(&self.h.mul_coords(&kv, &abv)) * &mn * Q::new(m.abs() - 1, 2);
                    out.extend(input.iter().map(|(t, k)| (t.clone(), k * &s)));
                }
            }
            Relation::OrderIndependence => {
                out = bd.terms(input);
                let other = bd_last.terms(input);
                out.extend(other.into_iter().map(|(t, c)| (t, -c)));
            }
        }
        merge(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::model;

    #[test]
    fn creation_and_annihilation_on_toy() {
        let h = model("toy-sphere").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let one = h.element_by_id("1").unwrap();
        let p = h.element_by_id("p").unwrap();
        let v = f.q_apply(1, &one, &FockVector::vacuum()).unwrap();
        assert_eq!(v, f.monomial(&[(1, "1")]).unwrap());
        let back = f.q_apply(-1, &p, &v).unwrap();
        assert_eq!(back, FockVector::vacuum().scaled(&Q::from_int(-1)));
        assert!(f.q_apply(0, &one, &v).unwrap().is_zero());
        assert!(f.q_apply(-1, &p, &FockVector::vacuum()).unwrap().is_zero());
        let mixed = one.plus(&p).unwrap();
        assert!(f.q_apply(1, &mixed, &v).is_ok());
    }

    #[test]
    fn odd_factors_anticommute() {
        let h = model("abelian").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let m12 = f.monomial(&[(1, "a1"), (1, "a2")]).unwrap();
        let m21 = f.monomial(&[(1, "a2"), (1, "a1")]).unwrap();
        assert_eq!(m12, m21.scaled(&-Q::one()));
        assert!(f.monomial(&[(2, "a3"), (2, "a3")]).unwrap().is_zero());
    }

    #[test]
    fn toy_dimensions() {
        let h = model("toy-sphere").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let d = f.dimensions(3);
        let total = |w| d.iter().filter(|((k, _), _)| *k == w).map(|(_, c)| *c).sum::<u64>();
        assert_eq!(total(0), 1);
        assert_eq!(total(1), 2);
        assert_eq!(total(2), 5);
        assert_eq!(total(3), 10);
        let a = model("abelian").unwrap().presentation;
        let f = FockSpace::standard(&a).unwrap();
        let counts: Vec<usize> = (0..4).map(|w| f.monomials(w).len()).collect();
        assert_eq!(counts, vec![1, 16, 144, 960]);
    }

    #[test]
    fn euler_form_values() {
        let h = model("toy-sphere").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let one = h.element_by_id("1").unwrap();
        assert_eq!(f.euler_form(2, &one, &one).unwrap(), Q::one());
        assert_eq!(f.euler_form_closed(2, &one, &one).unwrap(), Q::one());
        assert_eq!(f.euler_form(-2, &one, &one).unwrap(), -Q::one());
        assert_eq!(f.euler_form(1, &one, &one).unwrap(), Q::zero());
        assert_eq!(f.euler_form(0, &one, &one).unwrap(), Q::zero());
    }

    #[test]
    fn central_term_on_vacuum() {
        let h = model("toy-sphere").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let one = h.element_by_id("1").unwrap();
        let vac = FockVector::vacuum();
        // [L(1@2), L(1@-2)]|0⟩ = −L(1@-2) L(1@2)|0⟩ = −e(1,1)|0⟩
        let up = f.virasoro_l(2, &one, &vac).unwrap();
        assert!(!up.is_zero());
        let down = f.virasoro_l(-2, &one, &up).unwrap();
        assert_eq!(down, vac.scaled(&Q::one()));
        assert!(f.virasoro_l(-2, &one, &vac).unwrap().is_zero());
    }

    #[test]
    fn boundary_basics() {
        let h = model("toy-sphere").unwrap().presentation;
        let f = FockSpace::standard(&h).unwrap();
        let mut bd = f.boundary(None, Expansion::FirstFactor).unwrap();
        assert!(bd.apply(&FockVector::vacuum()).is_zero());
        let one = h.element_by_id("1").unwrap();
        let v = f.monomial(&[(1, "1")]).unwrap();
        assert_eq!(bd.apply(&v), f.virasoro_l(1, &one, &FockVector::vacuum()).unwrap());
    }

    fn quick(name: &str, rel: Relation, w: i64, k: bool) {
        let m = model(name).unwrap();
        let f = FockSpace::standard(&m.presentation).unwrap();
        let cfg = CheckConfig {
            max_weight: w,
            max_level: 2,
            canonical_class: if k { m.canonical_class.clone() } else { None },
        };
        let r = f.commutator_check(rel, &cfg).unwrap();
        assert!(r.passed(), "{} {}", name, r);
    }

    #[test]
    fn small_relation_sweeps() {
        for rel in Relation::ALL {
            quick("toy-sphere", rel, 3, false);
            quick("toy-plane", rel, 3, true);
        }
        quick("abelian", Relation::Heisenberg, 2, false);
        quick("abelian", Relation::VirasoroAndQ, 2, false);
        quick("abelian", Relation::Virasoro, 2, false);
    }
}
