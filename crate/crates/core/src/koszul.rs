//! Koszul signs for reordering graded tensor factors.

/// Sign of moving the factor at position `i` to position `perm[i]`, for factors
/// of the given degrees.
///
/// Every inverted pair of factors contributes `(-1)^(|a||b|)`, which is the
/// product over any decomposition into adjacent transpositions.
///
/// # Panics
///
/// If `perm` and `degrees` differ in length or `perm` is not a permutation.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> i32 {
    assert_eq!(perm.len(), degrees.len(), "permutation and degree list differ in length");
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        assert!(p < perm.len() && !seen[p], "not a permutation: {:?}", perm);
        seen[p] = true;
    }
    let mut odd = false;
    for i in 0..perm.len() {
        if degrees[i] % 2 == 0 {
            continue;
        }
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && degrees[j] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    if odd {
        -1
    } else {
        1
    }
}

/// Parity of the Koszul sign for rearranging factors so that the new sequence
/// is `old[order[0]], old[order[1]], ...`. `odd[i]` is the parity of `old[i]`.
pub fn reorder_is_odd(order: &[usize], odd: &[bool]) -> bool {
    let mut acc = false;
    for k in 0..order.len() {
        if !odd[order[k]] {
            continue;
        }
        for l in k + 1..order.len() {
            if order[k] > order[l] && odd[order[l]] {
                acc = !acc;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_signs() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[2, 1]), 1);
        // (1 2 3) sends position 0 -> 1 -> 2 -> 0
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 1, 1]), 1);
        assert_eq!(koszul_sign(&[], &[]), 1);
    }

    #[test]
    fn reorder_agrees_with_perm_form() {
        // order lists old indices in new order; perm is its inverse
        let order = [2, 0, 1];
        let perm = [1, 2, 0];
        let degrees = [1, 1, 3];
        let odd: Vec<bool> = degrees.iter().map(|d| d % 2 != 0).collect();
        assert_eq!(reorder_is_odd(&order, &odd), koszul_sign(&perm, &degrees) < 0);
    }

    fn perm_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<i32>)> {
        (1usize..7).prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(-3i32..4, n),
            )
        })
    }

    proptest! {
        #[test]
        fn sign_is_multiplicative((p, q, deg) in perm_strategy()) {
            // apply p, then q to the permuted sequence
            let n = p.len();
            let mut moved = vec![0; n];
            for i in 0..n {
                moved[p[i]] = deg[i];
            }
            let composed: Vec<usize> = (0..n).map(|i| q[p[i]]).collect();
            prop_assert_eq!(
                koszul_sign(&composed, &deg),
                koszul_sign(&p, &deg) * koszul_sign(&q, &moved)
            );
        }
    }
}
