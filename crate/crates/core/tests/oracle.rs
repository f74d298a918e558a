//! Reference values from scripts/oracle.py (brute-force counting, sympy resultants).

use frey_core::numfield::{nf_norm, split_prime, unit_gcd_primes, KElement, NFElement, NumberFieldSpec};
use frey_core::traces::{count_points_c7, count_points_e, count_points_f, trace_set, TraceSet};
use frey_core::{BigInt, BigRational};

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

/// (a, b, q, a_q(E_{a,b})); None at bad reduction.
const E_TRACES: [(i64, i64, u64, Option<i64>); 60] = [
    (1, 0, 3, Some(-1)),
    (1, 0, 5, Some(-3)),
    (1, 0, 11, Some(-3)),
    (1, 0, 13, Some(-2)),
    (1, 0, 17, Some(-3)),
    (1, 0, 19, Some(1)),
    (1, 0, 23, Some(3)),
    (1, 0, 29, Some(-6)),
    (1, 0, 31, Some(7)),
    (1, 0, 37, Some(-1)),
    (1, -1, 3, Some(-1)),
    (1, -1, 5, Some(-1)),
    (1, -1, 11, Some(3)),
    (1, -1, 13, Some(-6)),
    (1, -1, 17, Some(-5)),
    (1, -1, 19, Some(1)),
    (1, -1, 23, Some(-7)),
    (1, -1, 29, Some(2)),
    (1, -1, 31, Some(-5)),
    (1, -1, 37, Some(3)),
    (3, 1, 3, Some(-1)),
    (3, 1, 5, Some(3)),
    (3, 1, 11, Some(3)),
    (3, 1, 13, Some(-2)),
    (3, 1, 17, Some(3)),
    (3, 1, 19, Some(7)),
    (3, 1, 23, Some(3)),
    (3, 1, 29, Some(-2)),
    (3, 1, 31, Some(-5)),
    (3, 1, 37, Some(-7)),
    (2, 5, 3, Some(3)),
    (2, 5, 5, Some(-3)),
    (2, 5, 11, Some(-3)),
    (2, 5, 13, Some(-2)),
    (2, 5, 17, Some(3)),
    (2, 5, 19, Some(1)),
    (2, 5, 23, Some(-1)),
    (2, 5, 29, Some(6)),
    (2, 5, 31, Some(7)),
    (2, 5, 37, Some(-3)),
    (-3, 7, 3, Some(-1)),
    (-3, 7, 5, Some(1)),
    (-3, 7, 11, Some(-5)),
    (-3, 7, 13, Some(6)),
    (-3, 7, 17, Some(1)),
    (-3, 7, 19, Some(5)),
    (-3, 7, 23, Some(-9)),
    (-3, 7, 29, Some(6)),
    (-3, 7, 31, Some(9)),
    (-3, 7, 37, Some(-5)),
    (11, 4, 3, Some(-1)),
    (11, 4, 5, Some(-1)),
    (11, 4, 11, Some(-3)),
    (11, 4, 13, Some(2)),
    (11, 4, 17, Some(-3)),
    (11, 4, 19, Some(-5)),
    (11, 4, 23, Some(3)),
    (11, 4, 29, Some(-2)),
    (11, 4, 31, Some(7)),
    (11, 4, 37, Some(-11)),
];

/// (delta, a, b, q, prime index, a_pr(F^(delta)_{a,b})).
const F_SPLIT: [([i64; 3], i64, i64, u64, usize, Option<i64>); 135] = [
    ([1, 0, 0], 1, 1, 13, 0, Some(-6)),
    ([1, 0, 0], 1, 1, 13, 1, Some(2)),
    ([1, 0, 0], 1, 1, 13, 2, Some(2)),
    ([1, 0, 0], 1, 1, 29, 0, Some(-2)),
    ([1, 0, 0], 1, 1, 29, 1, Some(6)),
    ([1, 0, 0], 1, 1, 29, 2, Some(-2)),
    ([1, 0, 0], 1, 1, 43, 0, Some(4)),
    ([1, 0, 0], 1, 1, 43, 1, Some(4)),
    ([1, 0, 0], 1, 1, 43, 2, Some(-12)),
    ([1, 0, 0], 1, 0, 13, 0, Some(2)),
    ([1, 0, 0], 1, 0, 13, 1, Some(-6)),
    ([1, 0, 0], 1, 0, 13, 2, Some(2)),
    ([1, 0, 0], 1, 0, 29, 0, Some(-2)),
    ([1, 0, 0], 1, 0, 29, 1, Some(-2)),
    ([1, 0, 0], 1, 0, 29, 2, Some(6)),
    ([1, 0, 0], 1, 0, 43, 0, Some(12)),
    ([1, 0, 0], 1, 0, 43, 1, Some(-4)),
    ([1, 0, 0], 1, 0, 43, 2, Some(-4)),
    ([1, 0, 0], 2, 1, 13, 0, Some(-2)),
    ([1, 0, 0], 2, 1, 13, 1, Some(-2)),
    ([1, 0, 0], 2, 1, 13, 2, Some(2)),
    ([1, 0, 0], 2, 1, 29, 0, Some(-6)),
    ([1, 0, 0], 2, 1, 29, 1, Some(2)),
    ([1, 0, 0], 2, 1, 29, 2, Some(2)),
    ([1, 0, 0], 2, 1, 43, 0, None),
    ([1, 0, 0], 2, 1, 43, 1, Some(-4)),
    ([1, 0, 0], 2, 1, 43, 2, None),
    ([1, 0, 0], 3, -1, 13, 0, Some(-2)),
    ([1, 0, 0], 3, -1, 13, 1, Some(-2)),
    ([1, 0, 0], 3, -1, 13, 2, Some(-6)),
    ([1, 0, 0], 3, -1, 29, 0, Some(6)),
    ([1, 0, 0], 3, -1, 29, 1, Some(-6)),
    ([1, 0, 0], 3, -1, 29, 2, Some(2)),
    ([1, 0, 0], 3, -1, 43, 0, Some(-4)),
    ([1, 0, 0], 3, -1, 43, 1, Some(4)),
    ([1, 0, 0], 3, -1, 43, 2, Some(-4)),
    ([1, 0, 0], 5, 2, 13, 0, Some(-2)),
    ([1, 0, 0], 5, 2, 13, 1, Some(-2)),
    ([1, 0, 0], 5, 2, 13, 2, Some(-6)),
    ([1, 0, 0], 5, 2, 29, 0, Some(-2)),
    ([1, 0, 0], 5, 2, 29, 1, Some(6)),
    ([1, 0, 0], 5, 2, 29, 2, Some(-6)),
    ([1, 0, 0], 5, 2, 43, 0, Some(4)),
    ([1, 0, 0], 5, 2, 43, 1, Some(0)),
    ([1, 0, 0], 5, 2, 43, 2, Some(8)),
    ([-7, 0, 0], 1, 1, 13, 0, Some(6)),
    ([-7, 0, 0], 1, 1, 13, 1, Some(-2)),
    ([-7, 0, 0], 1, 1, 13, 2, Some(-2)),
    ([-7, 0, 0], 1, 1, 29, 0, Some(-2)),
    ([-7, 0, 0], 1, 1, 29, 1, Some(6)),
    ([-7, 0, 0], 1, 1, 29, 2, Some(-2)),
    ([-7, 0, 0], 1, 1, 43, 0, Some(4)),
    ([-7, 0, 0], 1, 1, 43, 1, Some(4)),
    ([-7, 0, 0], 1, 1, 43, 2, Some(-12)),
    ([-7, 0, 0], 1, 0, 13, 0, Some(-2)),
    ([-7, 0, 0], 1, 0, 13, 1, Some(6)),
    ([-7, 0, 0], 1, 0, 13, 2, Some(-2)),
    ([-7, 0, 0], 1, 0, 29, 0, Some(-2)),
    ([-7, 0, 0], 1, 0, 29, 1, Some(-2)),
    ([-7, 0, 0], 1, 0, 29, 2, Some(6)),
    ([-7, 0, 0], 1, 0, 43, 0, Some(12)),
    ([-7, 0, 0], 1, 0, 43, 1, Some(-4)),
    ([-7, 0, 0], 1, 0, 43, 2, Some(-4)),
    ([-7, 0, 0], 2, 1, 13, 0, Some(2)),
    ([-7, 0, 0], 2, 1, 13, 1, Some(2)),
    ([-7, 0, 0], 2, 1, 13, 2, Some(-2)),
    ([-7, 0, 0], 2, 1, 29, 0, Some(-6)),
    ([-7, 0, 0], 2, 1, 29, 1, Some(2)),
    ([-7, 0, 0], 2, 1, 29, 2, Some(2)),
    ([-7, 0, 0], 2, 1, 43, 0, None),
    ([-7, 0, 0], 2, 1, 43, 1, Some(-4)),
    ([-7, 0, 0], 2, 1, 43, 2, None),
    ([-7, 0, 0], 3, -1, 13, 0, Some(2)),
    ([-7, 0, 0], 3, -1, 13, 1, Some(2)),
    ([-7, 0, 0], 3, -1, 13, 2, Some(6)),
    ([-7, 0, 0], 3, -1, 29, 0, Some(6)),
    ([-7, 0, 0], 3, -1, 29, 1, Some(-6)),
    ([-7, 0, 0], 3, -1, 29, 2, Some(2)),
    ([-7, 0, 0], 3, -1, 43, 0, Some(-4)),
    ([-7, 0, 0], 3, -1, 43, 1, Some(4)),
    ([-7, 0, 0], 3, -1, 43, 2, Some(-4)),
    ([-7, 0, 0], 5, 2, 13, 0, Some(2)),
    ([-7, 0, 0], 5, 2, 13, 1, Some(2)),
    ([-7, 0, 0], 5, 2, 13, 2, Some(6)),
    ([-7, 0, 0], 5, 2, 29, 0, Some(-2)),
    ([-7, 0, 0], 5, 2, 29, 1, Some(6)),
    ([-7, 0, 0], 5, 2, 29, 2, Some(-6)),
    ([-7, 0, 0], 5, 2, 43, 0, Some(4)),
    ([-7, 0, 0], 5, 2, 43, 1, Some(0)),
    ([-7, 0, 0], 5, 2, 43, 2, Some(8)),
    ([0, 0, 1], 1, 1, 13, 0, Some(-6)),
    ([0, 0, 1], 1, 1, 13, 1, Some(2)),
    ([0, 0, 1], 1, 1, 13, 2, Some(2)),
    ([0, 0, 1], 1, 1, 29, 0, Some(-2)),
    ([0, 0, 1], 1, 1, 29, 1, Some(6)),
    ([0, 0, 1], 1, 1, 29, 2, Some(-2)),
    ([0, 0, 1], 1, 1, 43, 0, Some(4)),
    ([0, 0, 1], 1, 1, 43, 1, Some(4)),
    ([0, 0, 1], 1, 1, 43, 2, Some(-12)),
    ([0, 0, 1], 1, 0, 13, 0, Some(2)),
    ([0, 0, 1], 1, 0, 13, 1, Some(-6)),
    ([0, 0, 1], 1, 0, 13, 2, Some(2)),
    ([0, 0, 1], 1, 0, 29, 0, Some(-2)),
    ([0, 0, 1], 1, 0, 29, 1, Some(-2)),
    ([0, 0, 1], 1, 0, 29, 2, Some(6)),
    ([0, 0, 1], 1, 0, 43, 0, Some(12)),
    ([0, 0, 1], 1, 0, 43, 1, Some(-4)),
    ([0, 0, 1], 1, 0, 43, 2, Some(-4)),
    ([0, 0, 1], 2, 1, 13, 0, Some(-2)),
    ([0, 0, 1], 2, 1, 13, 1, Some(-2)),
    ([0, 0, 1], 2, 1, 13, 2, Some(2)),
    ([0, 0, 1], 2, 1, 29, 0, Some(-6)),
    ([0, 0, 1], 2, 1, 29, 1, Some(2)),
    ([0, 0, 1], 2, 1, 29, 2, Some(2)),
    ([0, 0, 1], 2, 1, 43, 0, None),
    ([0, 0, 1], 2, 1, 43, 1, Some(-4)),
    ([0, 0, 1], 2, 1, 43, 2, None),
    ([0, 0, 1], 3, -1, 13, 0, Some(-2)),
    ([0, 0, 1], 3, -1, 13, 1, Some(-2)),
    ([0, 0, 1], 3, -1, 13, 2, Some(-6)),
    ([0, 0, 1], 3, -1, 29, 0, Some(6)),
    ([0, 0, 1], 3, -1, 29, 1, Some(-6)),
    ([0, 0, 1], 3, -1, 29, 2, Some(2)),
    ([0, 0, 1], 3, -1, 43, 0, Some(-4)),
    ([0, 0, 1], 3, -1, 43, 1, Some(4)),
    ([0, 0, 1], 3, -1, 43, 2, Some(-4)),
    ([0, 0, 1], 5, 2, 13, 0, Some(-2)),
    ([0, 0, 1], 5, 2, 13, 1, Some(-2)),
    ([0, 0, 1], 5, 2, 13, 2, Some(-6)),
    ([0, 0, 1], 5, 2, 29, 0, Some(-2)),
    ([0, 0, 1], 5, 2, 29, 1, Some(6)),
    ([0, 0, 1], 5, 2, 29, 2, Some(-6)),
    ([0, 0, 1], 5, 2, 43, 0, Some(4)),
    ([0, 0, 1], 5, 2, 43, 1, Some(0)),
    ([0, 0, 1], 5, 2, 43, 2, Some(8)),
];

const F_INERT: [(i64, i64, u64, Option<i64>); 4] =
    [(1, 2, 5, Some(-18)), (1, 2, 11, Some(4)), (2, 3, 5, None), (2, 3, 11, Some(-20))];

/// (a, b, q, #C_7(a,b)(F_{q^k}) for k = 1, 2, 3).
const C7_COUNTS: [(i64, i64, u64, [u64; 3]); 7] = [
    (0, 1, 13, [14, 248, 2198]),
    (1, 1, 13, [18, 168, 2298]),
    (1, 2, 13, [18, 224, 2130]),
    (2, 3, 13, [8, 180, 2240]),
    (1, 1, 5, [6, 26, 66]),
    (1, 2, 11, [12, 122, 1464]),
    (3, 1, 11, [12, 122, 1248]),
];

const TRACE_SETS: [(i64, i64, u64, [[i64; 3]; 3]); 5] = [
    (1, 1, 13, [[-8, 0, 4], [0, 4, 0], [4, -4, -4]]),
    (1, 2, 13, [[-4, 2, 2], [-2, -2, 0], [2, 0, -2]]),
    (2, 3, 13, [[-4, 2, 4], [4, -4, -2], [6, 2, -2]]),
    (1, 2, 29, [[-10, 0, 4], [-2, 4, 0], [2, -4, -4]]),
    (1, 3, 29, [[-10, 0, 4], [-2, 4, 0], [2, -4, -4]]),
];

/// (defining polynomial, coordinates, norm), constant terms first.
const NF_NORMS: [(&[i64], &[i64], i64); 5] = [
    (&[-2, 0, 1], &[3, 5], -41),
    (&[-1, -1, 0, 1], &[2, -1, 4], 173),
    (&[-1, -2, 1, 1], &[7, -3, 2], 1051),
    (&[1, 0, 0, 0, 1], &[1, 2, 3, 4], 388),
    (&[5, -3, 0, 1, 0, 1], &[-2, 0, 1, 0, 6], 5577283),
];

#[test]
fn e_traces_match_enumeration() {
    for &(a, bb, q, want) in &E_TRACES {
        assert_eq!(count_points_e(&b(a), &b(bb), q).ok(), want, "E({}, {}) at {}", a, bb, q);
    }
}

#[test]
fn f_traces_at_split_primes_match_enumeration() {
    for &(d, a, bb, q, i, want) in &F_SPLIT {
        let delta = KElement::from_ints(d[0], d[1], d[2]);
        let pr = split_prime(q)[i];
        assert_eq!(
            count_points_f(&b(a), &b(bb), &delta, &pr).ok(),
            want,
            "F({}, {}) delta {:?} at {}#{}",
            a,
            bb,
            d,
            q,
            i
        );
    }
}

#[test]
fn f_traces_at_inert_primes_match_enumeration() {
    for &(a, bb, q, want) in &F_INERT {
        let pr = split_prime(q)[0];
        assert_eq!(count_points_f(&b(a), &b(bb), &KElement::one(), &pr).ok(), want, "F({}, {}) at {}", a, bb, q);
    }
}

#[test]
fn c7_counts_match_enumeration() {
    for &(a, bb, q, want) in &C7_COUNTS {
        for k in 1..=3u32 {
            let n = count_points_c7(&b(a), &b(bb), q, k).unwrap();
            assert_eq!(n, want[k as usize - 1], "C7({}, {}) over F_{}^{}", a, bb, q, k);
        }
    }
}

#[test]
fn split_trace_sets_match_weil_cubic_roots() {
    for &(a, bb, q, want) in &TRACE_SETS {
        let expected = TraceSet::new(q, want.iter().map(|u| KElement::from_ints(u[0], u[1], u[2])).collect());
        assert_eq!(trace_set(&b(a), &b(bb), q).unwrap(), expected, "T_{}({}, {})", q, a, bb);
    }
}

#[test]
fn norms_match_resultants() {
    for &(f, c, want) in &NF_NORMS {
        let field = NumberFieldSpec::from_i64(f).unwrap();
        let x = NFElement::from_ints(&field, c);
        assert_eq!(nf_norm(&x), BigRational::from_integer(b(want)), "N({:?}) in Q[x]/{:?}", c, f);
    }
}

#[test]
fn unit_gcd_primes_for_other_exponents() {
    assert_eq!(unit_gcd_primes(12).unwrap(), vec![13]);
    assert_eq!(unit_gcd_primes(42).unwrap(), vec![13, 29, 43, 127]);
    assert_eq!(unit_gcd_primes(84).unwrap(), vec![13, 29, 43, 127, 337, 757, 2017]);
}
