use std::collections::BTreeMap;

use hilbfrob::hilbert::HilbertAlgebra;
use hilbfrob::models::model;
use hilbfrob::perm::{enumerate_sn, orbits, Permutation};
use hilbfrob::Q;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn big(q: &Q) -> BigRational {
    q.to_big()
}

fn small_or_huge() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![
        (-50i64..50, 1i64..50),
        (any::<i64>(), 1i64..i64::MAX),
        (i64::MAX - 3..=i64::MAX, 1i64..3),
    ]
}

proptest! {
    #[test]
    fn rationals_match_bigrational((a, b) in small_or_huge(), (c, d) in small_or_huge()) {
        let (x, y) = (Q::new(a, b), Q::new(c, d));
        let (bx, by) = (BigRational::new(BigInt::from(a), BigInt::from(b)), BigRational::new(BigInt::from(c), BigInt::from(d)));
        prop_assert_eq!(big(&(&x + &y)), &bx + &by);
        prop_assert_eq!(big(&(&x - &y)), &bx - &by);
        prop_assert_eq!(big(&(&x * &y)), &bx * &by);
        if c != 0 {
            prop_assert_eq!(big(&(&x / &y)), &bx / &by);
        }
        let printed: Q = x.to_string().parse().unwrap();
        prop_assert_eq!(printed, x);
    }

    #[test]
    fn permutations_form_a_group(seed in 0usize..720, other in 0usize..720) {
        let all = enumerate_sn(6).unwrap();
        let (s, t) = (&all[seed], &all[other]);
        prop_assert!(s.compose(&s.inverse()).unwrap().is_identity());
        let st = s.compose(t).unwrap();
        for i in 0..6 {
            prop_assert_eq!(st.apply(i), s.apply(t.apply(i)));
        }
        let text = s.to_string();
        prop_assert_eq!(&Permutation::parse(&text, Some(6)).unwrap(), s);
        let conj = s.conjugate_by(t).unwrap();
        prop_assert_eq!(orbits(&conj).len(), orbits(s).len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hilbert_product_is_equivariant(i in 0usize..4896, j in 0usize..4896, p in 0usize..6) {
        let h = model("abelian").unwrap().presentation;
        let alg = HilbertAlgebra::build(&h, 3).unwrap();
        let (i, j) = (i % alg.dim_hn(), j % alg.dim_hn());
        let pi = &alg.permutations()[p];
        let (x, y) = (alg.basis_element(i), alg.basis_element(j));
        let lhs = alg.sn_act(pi, &alg.product(&x, &y).unwrap()).unwrap();
        let rhs = alg.product(&alg.sn_act(pi, &x).unwrap(), &alg.sn_act(pi, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_products_are_associative(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let h = model("abelian").unwrap().presentation;
        let alg = HilbertAlgebra::build(&h, 3).unwrap();
        let d = alg.dim();
        let e = |a: usize| -> BTreeMap<usize, Q> { [(a % d, Q::from_int(1))].into_iter().collect() };
        let left = alg.multiply_invariant(&alg.multiply_invariant(&e(i), &e(j)), &e(k));
        let right = alg.multiply_invariant(&e(i), &alg.multiply_invariant(&e(j), &e(k)));
        prop_assert_eq!(left, right);
    }
}
