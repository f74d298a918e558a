use frey_core::numfield::{prime_q2, prime_q3, prime_q7, residue_degree, split_prime, unit_gcd_primes, KElement};
use frey_core::poly;
use frey_core::traces::{count_points_c7, count_points_f, lpoly_from_counts, trace_set, LPoly};
use frey_core::BigInt;

#[test]
fn unit_gcd_primes_at_84() {
    assert_eq!(unit_gcd_primes(84).unwrap(), vec![13, 29, 43, 127, 337, 757, 2017]);
}

#[test]
fn splitting_of_small_primes() {
    for q in [13, 29, 43, 83] {
        assert_eq!(split_prime(q).len(), 3, "{} splits", q);
        assert_eq!(residue_degree(q), 1);
    }
    for q in [5, 11, 17] {
        let p = split_prime(q);
        assert_eq!(p.len(), 1, "{} is inert", q);
        assert_eq!(p[0].f, 3);
        assert_eq!(residue_degree(q), 3);
    }
    assert_eq!(prime_q2().norm(), 8);
    assert_eq!(prime_q3().norm(), 27);
    assert_eq!(prime_q7().norm(), 7);
    assert!(prime_q7().ramified);
}

#[test]
fn f_traces_at_q3_are_plus_minus_four() {
    let pr = prime_q3();
    let pairs = [(1, 1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)];
    for (a, b) in pairs {
        let t = count_points_f(&BigInt::from(a), &BigInt::from(b), &KElement::one(), &pr).unwrap();
        assert_eq!(t.abs(), 4, "F({}, {})", a, b);
    }
    // X^2 - aX + 27 has no root mod 11 for a = -4, 4.
    for a in [4i64, -4] {
        let f = poly::from_i64(&[27, a, 1], 11);
        assert!(poly::roots_small(&f, 11).is_empty());
        assert_eq!(poly::factor_degrees(&f, 11), vec![2]);
    }
}

#[test]
fn cm_curve_chain_at_13() {
    let (x, y) = (BigInt::from(0), BigInt::from(1));
    assert_eq!(count_points_c7(&x, &y, 13, 1).unwrap(), 14);
    let ts = trace_set(&x, &y, 13).unwrap();
    assert_eq!(ts.elements, vec![KElement::zero()]);
    let cm = LPoly::from_traces(13, [0, 0, 0]);
    assert_eq!(cm.coeffs, [1, 0, 39, 0, 507, 0, 2197]);
    let predicted = cm.counts(3);
    assert_eq!(predicted, vec![14, 248, 2198]);
    let counted: Vec<u64> = (1..=3).map(|k| count_points_c7(&x, &y, 13, k).unwrap()).collect();
    assert_eq!(counted, vec![14, 248, 2198]);
    assert_eq!(lpoly_from_counts([14, 248, 2198], 13).unwrap(), cm);
}
