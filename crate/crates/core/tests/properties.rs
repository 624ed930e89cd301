mod common;

use common::checks;
use common::{random_cws, random_group};
use proptest::prelude::*;
use qbound::transforms::{binomial, kravchuk};

fn pow3(e: usize) -> i128 {
    3i128.pow(e as u32)
}

#[test]
fn kravchuk_orthogonality_up_to_twelve() {
    checks::kravchuk_orthogonality(12).unwrap();
}

proptest! {
    #[test]
    fn kravchuk_reciprocity(n in 0usize..=12, i in 0usize..=12, k in 0usize..=12) {
        prop_assume!(i <= n && k <= n);
        let lhs = pow3(k) * binomial(n as i64, k as i64) * kravchuk(i, k, n).unwrap();
        let rhs = pow3(i) * binomial(n as i64, i as i64) * kravchuk(k, i, n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kravchuk_matches_direct_sum(n in 0usize..=12, i in 0usize..=12, k in 0usize..=12) {
        prop_assume!(i <= n && k <= n);
        // K_i(k) = Σ_j (-1)^j 3^{i-j} C(k, j) C(n-k, i-j)
        let direct: i128 = (0..=i)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * pow3(i - j) * binomial(k as i64, j as i64) * binomial((n - k) as i64, (i - j) as i64)
            })
            .sum();
        prop_assert_eq!(kravchuk(i, k, n).unwrap(), direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn transforms_reproduce_dense_enumerators(seed in any::<u64>(), n in 1usize..=6, c in 0usize..=1) {
        prop_assume!(n + c <= 6);
        let code = random_cws(seed, n, c, 2);
        if let Err(e) = checks::transforms_match_dense(&code, 1e-9) {
            return Err(TestCaseError::fail(e));
        }
    }

    #[test]
    fn group_weight_equals_distance_enumerator(seed in any::<u64>(), m in 1usize..=5, gens in 1usize..=4) {
        if let Err(e) = checks::group_enumerators_agree(&random_group(seed, m, gens)) {
            return Err(TestCaseError::fail(e));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn block_spectrum_matches_full_matrix(n in 1usize..=3, raw in proptest::collection::vec(0.0f64..1.0, 64)) {
        if let Err(e) = checks::block_spectrum_matches(n, &raw, 1e-8) {
            return Err(TestCaseError::fail(e));
        }
    }
}
