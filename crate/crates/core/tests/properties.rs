mod props;

use props::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn curve_invariants((a, b) in pair(1_000_000), d in delta()) {
        check_curve_invariants(a, b, d)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn lpoly_and_trace_sets((x, y) in pair(50), q in small_prime()) {
        check_lpoly_and_trace_set(x, y, q)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn trace_set_signs((x, y) in pair(50), q in small_prime()) {
        check_trace_set_signs(x, y, q)?;
    }

    #[test]
    fn f_chi7_twist((a, b) in pair(200), d in delta(), q in small_prime()) {
        check_f_chi7_twist(a, b, d, q)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn self_survivor_e((a, b) in coprime_pair(10_000), q in small_prime(), p in target_prime()) {
        check_self_survivor_e(a, b, q, p)?;
    }

    #[test]
    fn self_survivor_f((a, b) in coprime_pair(10_000), d in delta(), q in small_prime(), p in target_prime()) {
        check_self_survivor_f(a, b, d, q, p)?;
    }

    #[test]
    fn self_survivor_j((x, y) in coprime_pair(1_000), q in split_q(), p in target_prime()) {
        check_self_survivor_j(x, y, q, p)?;
    }

    #[test]
    fn embedding_independence((x, y) in pair(1_000), shift in -6i64..=6, q in split_q()) {
        check_embedding_independence(x, y, shift, q)?;
    }
}
