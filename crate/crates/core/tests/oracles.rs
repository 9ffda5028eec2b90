//! Cross-checks between independently computed quantities.

use std::collections::{BTreeMap, BTreeSet};

use hilbfrob::fock::FockSpace;
use hilbfrob::hilbert::HilbertAlgebra;
use hilbfrob::kummer::{phi, KummerAlgebra};
use hilbfrob::models::{abelian_with_torsion, model};
use hilbfrob::perm::{cycle_type, Permutation};
use hilbfrob::series::hilbert_series_for;
use hilbfrob::{Weight, Q};
use num_bigint::BigInt;

fn partitions(n: usize) -> usize {
    fn count(n: usize, max: usize) -> usize {
        if n == 0 {
            return 1;
        }
        (1..=max.min(n)).map(|k| count(n - k, k)).sum()
    }
    count(n, n)
}

#[test]
fn point_gives_class_algebras() {
    let h = model("point").unwrap().presentation;
    for n in 0..=5 {
        assert_eq!(HilbertAlgebra::build(&h, n).unwrap().dim(), partitions(n), "n = {}", n);
    }
    // centre of Q[S_3]: with T, C the averages of transpositions and 3-cycles,
    // T·T = 1/3 + 2/3 C
    let alg = HilbertAlgebra::build(&h, 3).unwrap();
    let class_of = |k: usize| cycle_type(&alg.basis_vector(alg.invariants()[k].representative).sigma);
    let find = |ct: Vec<usize>| (0..alg.dim()).find(|&k| class_of(k) == ct).unwrap();
    let (id, t, c) = (find(vec![1, 1, 1]), find(vec![2, 1]), find(vec![3]));
    let got: BTreeMap<usize, Q> = alg.invariant_product(t, t).iter().cloned().collect();
    let want: BTreeMap<usize, Q> = [(id, Q::new(1, 3)), (c, Q::new(2, 3))].into_iter().collect();
    assert_eq!(got, want);
}

#[test]
fn symmetrisation_is_a_bijection() {
    for (name, max_n) in [("toy-sphere", 4), ("k3", 3), ("abelian", 2)] {
        let h = model(name).unwrap().presentation;
        let fock = FockSpace::standard(&h).unwrap();
        let dims = fock.dimensions(max_n as i64);
        for n in 0..=max_n {
            let alg = HilbertAlgebra::build(&h, n).unwrap();
            let mut seen = BTreeSet::new();
            for k in 0..alg.dim() {
                let w = alg.to_symmetric_word(&alg.invariant_element(k), &fock).unwrap();
                let terms = w.terms();
                assert_eq!(terms.len(), 1, "{} n={} v{} maps to {} monomials", name, n, k, terms.len());
                assert!(seen.insert(terms.iter().next().unwrap().0.clone()), "{} n={}: two invariants share a monomial", name, n);
            }
            let fock_dim: u64 = dims.iter().filter(|((w, _), _)| *w == n as i64).map(|(_, c)| *c).sum();
            assert_eq!(seen.len() as u64, fock_dim, "{} n={}", name, n);
        }
    }
}

#[test]
fn twisted_dimension_triangle() {
    let h = model("enriques-z2").unwrap().presentation;
    for l in h.group().elements() {
        let fock = FockSpace::new(&h, l).unwrap();
        let dims = fock.dimensions(3);
        let series = hilbert_series_for(&h, l, 3).unwrap();
        for n in 0..=3 {
            let alg = HilbertAlgebra::build(&h, n).unwrap();
            let mut hilb: BTreeMap<i32, BigInt> = BTreeMap::new();
            for ((w, k), c) in alg.dims() {
                if w == l {
                    *hilb.entry(k).or_default() += BigInt::from(c);
                }
            }
            let from_fock: BTreeMap<i32, BigInt> =
                dims.iter().filter(|((w, _), _)| *w == n as i64).map(|((_, k), c)| (*k, BigInt::from(*c))).collect();
            assert_eq!(from_fock, series.coeff(n).by_total_degree(), "L = {:?}, n = {}", l, n);
            assert_eq!(hilb, from_fock, "L = {:?}, n = {}", l, n);
        }
    }
}

#[test]
fn phi_is_a_homomorphism() {
    let h = model("abelian").unwrap().presentation;
    let alg = HilbertAlgebra::build(&h, 2).unwrap();
    let (one, a1) = (h.index_of("1").unwrap(), h.index_of("a1").unwrap());
    let id = Permutation::identity(2);
    let expect = alg
        .basis_element(alg.index_of(&id, &[a1, one], Weight::ZERO).unwrap())
        .plus(&alg.basis_element(alg.index_of(&id, &[one, a1], Weight::ZERO).unwrap()))
        .unwrap();
    assert_eq!(phi(&alg, a1).unwrap(), expect);
    assert_eq!(phi(&alg, one).unwrap(), alg.unit());
    for x in 0..h.dim() {
        for y in 0..h.dim() {
            let lhs = alg.product(&phi(&alg, x).unwrap(), &phi(&alg, y).unwrap()).unwrap();
            let mut rhs = alg.basis_element(0).scaled(&Q::from_int(0));
            for (o, c) in h.mult_basis(x, y) {
                rhs = rhs.plus(&phi(&alg, *o).unwrap().scaled(c)).unwrap();
            }
            assert_eq!(lhs, rhs, "{} · {}", h.id(x), h.id(y));
            assert!(alg.is_invariant(&lhs).unwrap());
        }
    }
}

#[test]
fn generalised_kummer_fourfold_betti_numbers() {
    let k = KummerAlgebra::build(&abelian_with_torsion(3).unwrap(), 3).unwrap();
    let dims: Vec<usize> = (-6..=2).map(|d| k.dims_by_degree().get(&d).copied().unwrap_or(0)).collect();
    assert_eq!(dims, vec![1, 0, 7, 8, 108, 8, 7, 0, 1]);
}
