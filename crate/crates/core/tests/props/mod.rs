//! Property checks shared by the proptest suites and the acceptance battery.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use frey_core::eliminate::{
    bound_e, bound_f, bound_j, e_table, f_table, j_table, refined_eliminate, ETable, FTable, FormData, GaloisSubset,
    JTable, JVariant, LocalTable, Refined,
};
use frey_core::ffield::DEFAULT_CAP;
use frey_core::frey::{FreyE, FreyF};
use frey_core::heckedata::{contains_k, synthesize_from_e, synthesize_from_f, synthesize_from_j, NewformRecord};
use frey_core::numfield::{residue_degree, split_prime, EmbeddingSearch, Embeddings, KElement, NFElement};
use frey_core::traces::{chi7_sign, symmetry_sign, Counter, NoCache};
use frey_core::{BigInt, BigRational, Error};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const SMALL_PRIMES: [u64; 8] = [3, 5, 11, 13, 17, 19, 23, 29];
pub const SPLIT_PRIMES: [u64; 2] = [13, 29];
pub const TARGET_PRIMES: [u64; 6] = [5, 11, 13, 17, 19, 23];

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn kint(n: i64) -> KElement {
    KElement::from_ints(n, 0, 0)
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(fail(format!($($arg)*)));
        }
    };
}

/// Core errors become failures; bad reduction is reported as None.
fn good<T>(r: frey_core::Result<T>) -> Result<Option<T>, TestCaseError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BadReduction { .. }) => Ok(None),
        Err(e) => Err(fail(format!("{}", e))),
    }
}

fn ok<T>(r: frey_core::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(format!("{}", e)))
}

// ---------------------------------------------------------------------------
// Shared counters and tables

pub fn counter(q: u64) -> Arc<Counter> {
    static POOL: OnceLock<Mutex<BTreeMap<u64, Arc<Counter>>>> = OnceLock::new();
    let pool = POOL.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut pool = pool.lock().unwrap();
    pool.entry(q).or_insert_with(|| Arc::new(Counter::new(q, 3, DEFAULT_CAP).unwrap())).clone()
}

fn counters(q: u64) -> frey_core::Result<Arc<Counter>> {
    Ok(counter(q))
}

fn cached<K: Ord + Clone, V>(map: &Mutex<BTreeMap<K, Arc<V>>>, key: K, build: impl FnOnce() -> V) -> Arc<V> {
    if let Some(v) = map.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(build());
    map.lock().unwrap().entry(key).or_insert(v).clone()
}

fn etable(q: u64) -> Arc<ETable> {
    static T: OnceLock<Mutex<BTreeMap<u64, Arc<ETable>>>> = OnceLock::new();
    cached(T.get_or_init(Default::default), q, || e_table(&counter(q), &NoCache).unwrap())
}

fn ftable(q: u64, delta: &KElement) -> Arc<FTable> {
    static T: OnceLock<Mutex<BTreeMap<(u64, KElement), Arc<FTable>>>> = OnceLock::new();
    cached(T.get_or_init(Default::default), (q, delta.clone()), || f_table(&counter(q), delta, &NoCache).unwrap())
}

fn jtable(q: u64) -> Arc<JTable> {
    static T: OnceLock<Mutex<BTreeMap<u64, Arc<JTable>>>> = OnceLock::new();
    cached(T.get_or_init(Default::default), q, || j_table(&counter(q), &NoCache).unwrap())
}

// ---------------------------------------------------------------------------
// Strategies

pub fn pair(bound: i64) -> impl Strategy<Value = (i64, i64)> {
    (-bound..=bound, -bound..=bound).prop_filter("nonzero pair", |&(a, b)| (a, b) != (0, 0))
}

pub fn coprime_pair(bound: i64) -> impl Strategy<Value = (i64, i64)> {
    pair(bound).prop_filter("coprime pair", |&(a, b)| gcd(a, b) == 1)
}

pub fn delta() -> impl Strategy<Value = [i64; 3]> {
    prop::array::uniform3(-5i64..=5).prop_filter("nonzero twist", |d| d.iter().any(|&c| c != 0))
}

pub fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(SMALL_PRIMES.to_vec())
}

pub fn split_q() -> impl Strategy<Value = u64> {
    prop::sample::select(SPLIT_PRIMES.to_vec())
}

pub fn target_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(TARGET_PRIMES.to_vec())
}

// ---------------------------------------------------------------------------
// Checks

/// c4^3 - c6^2 = 1728 Delta for E_{a,b} and F^(delta)_{a,b}.
pub fn check_curve_invariants(a: i64, b: i64, d: [i64; 3]) -> Result<(), TestCaseError> {
    let e = FreyE::new(&big(a), &big(b));
    ensure!(e.c4.pow(3) - e.c6.pow(2) == &e.disc * 1728, "E({}, {})", a, b);
    let delta = KElement::from_ints(d[0], d[1], d[2]);
    let f = FreyF::new(&big(a), &big(b), &delta);
    let lhs = f.c4.pow(3).sub(&f.c6.square());
    ensure!(lhs == f.disc.scale(&BigRational::from_integer(big(1728))), "F({}, {}) delta {:?}", a, b, d);
    Ok(())
}

/// L-polynomial of C_7(x, y) at q: functional equation, Weil bound, agreement with
/// the counts, trace-set invariants and the split-sum or inert identity.
pub fn check_lpoly_and_trace_set(x: i64, y: i64, q: u64) -> Result<(), TestCaseError> {
    let c = counter(q);
    let (bx, by) = (big(x), big(y));
    let Some(l) = good(c.lpoly_c7(&bx, &by, &NoCache))? else { return Ok(()) };
    ensure!(l.satisfies_functional_equation(), "functional equation at {} for ({}, {})", q, x, y);
    ensure!(l.satisfies_weil(), "Weil bound at {} for ({}, {})", q, x, y);
    let counts: Vec<i128> = (1..=3).map(|k| c.points_c7(&bx, &by, k, &NoCache).unwrap() as i128).collect();
    ensure!(l.counts(3) == counts, "L-polynomial does not reproduce the counts at {}", q);
    let t = ok(c.trace_set(&bx, &by, &NoCache))?;
    ok(t.check_invariants())?;
    let qi = q as i128;
    if residue_degree(q) == 3 {
        ensure!(t.len() == 1, "inert trace set has {} elements", t.len());
        let a = t.elements[0].int_coords()[0].clone();
        ensure!(a * 3 == big((qi.pow(3) + 1 - counts[2]) as i64), "inert identity at {} for ({}, {})", q, x, y);
    } else {
        ensure!(t.len() == 1 || t.len() == 3, "split trace set has {} elements", t.len());
        let tr = t.elements[0].trace();
        ensure!(tr == BigRational::from_integer(big((qi + 1 - counts[0]) as i64)), "split-sum identity at {}", q);
    }
    Ok(())
}

/// T(b, a) = T(-a, -b) = sym T(a, b) and T(-7a, -7b) = chi_7 T(a, b), each side counted separately.
pub fn check_trace_set_signs(x: i64, y: i64, q: u64) -> Result<(), TestCaseError> {
    let c = counter(q);
    let ts = |u: i64, v: i64| good(c.trace_set(&big(u), &big(v), &NoCache));
    let Some(t) = ts(x, y)? else { return Ok(()) };
    let pr = split_prime(q)[0];
    let swapped = ts(y, x)?.ok_or_else(|| fail("swap changed reduction".into()))?;
    let negated = ts(-x, -y)?.ok_or_else(|| fail("negation changed reduction".into()))?;
    let scaled = ts(-7 * x, -7 * y)?.ok_or_else(|| fail("scaling changed reduction".into()))?;
    ensure!(swapped == t.signed(symmetry_sign(&pr)), "symmetry at {} for ({}, {})", q, x, y);
    ensure!(negated == swapped, "T(-x, -y) != T(y, x) at {}", q);
    ensure!(scaled == t.signed(chi7_sign(&pr)), "chi_7 relation at {} for ({}, {})", q, x, y);
    Ok(())
}

/// a_pr(F^(-7 delta)) = chi_7(pr) a_pr(F^(delta)) at every prime above q.
pub fn check_f_chi7_twist(a: i64, b: i64, d: [i64; 3], q: u64) -> Result<(), TestCaseError> {
    let c = counter(q);
    let delta = KElement::from_ints(d[0], d[1], d[2]);
    let twisted = delta.mul(&kint(-7));
    for pr in split_prime(q) {
        let Some(t) = good(c.trace_f(&big(a), &big(b), &delta, &pr, &NoCache))? else { continue };
        let Some(tt) = good(c.trace_f(&big(a), &big(b), &twisted, &pr, &NoCache))? else { continue };
        ensure!(tt == chi7_sign(&pr) as i64 * t, "F chi_7 twist at {}#{} for ({}, {})", q, pr.index, a, b);
    }
    Ok(())
}

fn require_survives(r: Refined, what: &str) -> Result<(), TestCaseError> {
    match r {
        Refined::Survives { .. } | Refined::IndexDivisor => Ok(()),
        Refined::Eliminated => Err(fail(format!("refined elimination lost the witness for {}", what))),
    }
}

/// A record built from E_{a,b} has a vanishing bound at q and refined elimination
/// finds a residue pair for every p.
pub fn check_self_survivor_e(a: i64, b: i64, q: u64, p: u64) -> Result<(), TestCaseError> {
    let Some(rec) = good(synthesize_from_e(&big(a), &big(b), &[q], &counters, &NoCache))? else { return Ok(()) };
    let table = etable(q);
    let bd = ok(bound_e(&FormData::new(&rec), &table))?;
    ensure!(bd.is_zero(), "bound of E({}, {}) at {} is nonzero", a, b, q);
    if p != q {
        require_survives(ok(refined_eliminate(&rec, p, LocalTable::E(&table)))?, &rec.label)?;
    }
    Ok(())
}

pub fn check_self_survivor_f(a: i64, b: i64, d: [i64; 3], q: u64, p: u64) -> Result<(), TestCaseError> {
    let delta = KElement::from_ints(d[0], d[1], d[2]);
    let Some(rec) = good(synthesize_from_f(&big(a), &big(b), &delta, &[q], &counters, &NoCache))? else {
        return Ok(());
    };
    let table = ftable(q, &delta);
    let bd = ok(bound_f(&FormData::new(&rec), &table))?;
    ensure!(bd.is_zero(), "bound of {} at {} is nonzero", rec.label, q);
    if p != q {
        require_survives(ok(refined_eliminate(&rec, p, LocalTable::F(&table)))?, &rec.label)?;
    }
    Ok(())
}

fn k_roots(rec: &NewformRecord) -> Result<[NFElement; 3], TestCaseError> {
    match contains_k(rec, EmbeddingSearch::default()) {
        Embeddings::Found(r) => Ok(r),
        other => Err(fail(format!("K not found in the Hecke field of {}: {:?}", rec.label, other))),
    }
}

pub fn check_self_survivor_j(x: i64, y: i64, q: u64, p: u64) -> Result<(), TestCaseError> {
    let Some(rec) = good(synthesize_from_j(&big(x), &big(y), &[q], &counters, &NoCache))? else { return Ok(()) };
    let roots = k_roots(&rec)?;
    let table = jtable(q);
    let data = FormData::new(&rec);
    for s in [GaloisSubset::Identity, GaloisSubset::Full] {
        let bd = ok(bound_j(&data, &table, s, JVariant::Plain, Some(&roots[0])))?;
        ensure!(bd.is_zero(), "bound of {} at {} ({:?}) is nonzero", rec.label, q, s);
    }
    if p != q {
        require_survives(ok(refined_eliminate(&rec, p, LocalTable::J(&table, Some(&roots))))?, &rec.label)?;
    }
    Ok(())
}

/// The S = {1} bound does not depend on which root of K's cubic is chosen.
pub fn check_embedding_independence(x: i64, y: i64, shift: i64, q: u64) -> Result<(), TestCaseError> {
    let Some(mut rec) = good(synthesize_from_j(&big(x), &big(y), &[q], &counters, &NoCache))? else {
        return Ok(());
    };
    for a in rec.eigenvalues.values_mut() {
        *a = a.add_rational(&BigRational::from_integer(big(shift)));
    }
    let roots = k_roots(&rec)?;
    let table = jtable(q);
    let data = FormData::new(&rec);
    let values: Vec<_> = roots
        .iter()
        .map(|th| {
            bound_j(&data, &table, GaloisSubset::Identity, JVariant::Plain, Some(th)).map(|b| (b.zero, b.value()))
        })
        .collect::<frey_core::Result<_>>()
        .map_err(|e| fail(format!("{}", e)))?;
    ensure!(values.iter().all(|v| *v == values[0]), "S = {{1}} bound of {} at {} depends on the root", rec.label, q);
    Ok(())
}
