//! Newform eigenvalue records over Q and over K, with the structural analyses used
//! before elimination: embeddings of K, Galois conjugates, chi_7 twist pairs, base change.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::frey::{self, Level};
use crate::numfield::{
    charpoly, find_k_embeddings, residue_degree, split_prime, EmbeddingSearch, Embeddings, KElement, NFElement,
    NumberFieldSpec, PrimeIdealK, PrimeKey,
};
use crate::qpoly;
use crate::traces::{chi7_sign, CountCache, Counter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseField {
    Q,
    K,
}

impl BaseField {
    pub fn label(&self) -> &'static str {
        match self {
            BaseField::Q => "Q",
            BaseField::K => "3.3.49.1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Lmfdb,
    Fixture,
    Synthetic,
}

/// A Hecke eigenform of parallel weight 2 given by its eigenvalue table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformRecord {
    pub label: String,
    pub base: BaseField,
    pub level: Level,
    pub hecke_field: Arc<NumberFieldSpec>,
    /// Keyed by prime; over Q the index is always 0.
    pub eigenvalues: BTreeMap<PrimeKey, NFElement>,
    pub complete_below_norm: u64,
    pub provenance: Provenance,
}

/// The prime of K above q with the given image of w (None for inert or ramified q).
pub fn prime_from_root(q: u64, root: Option<u64>) -> Result<PrimeIdealK> {
    let primes = split_prime(q);
    if primes.len() == 1 {
        return Ok(primes[0]);
    }
    let r = root.ok_or_else(|| Error::Invalid(format!("split prime {} needs a root", q)))?;
    primes
        .into_iter()
        .find(|p| p.root == Some(r % q))
        .ok_or_else(|| Error::Invalid(format!("{} is not a root of the cubic modulo {}", r, q)))
}

pub fn prime_of_key(key: &PrimeKey) -> PrimeIdealK {
    split_prime(key.q)[key.index as usize]
}

impl NewformRecord {
    pub fn degree(&self) -> usize {
        self.hecke_field.degree()
    }

    pub fn norm_of(&self, key: &PrimeKey) -> u64 {
        match self.base {
            BaseField::Q => key.q,
            BaseField::K => prime_of_key(key).norm(),
        }
    }

    pub fn eigenvalue(&self, key: &PrimeKey) -> Result<&NFElement> {
        self.eigenvalues.get(key).ok_or(Error::MissingEigenvalue { label: self.label.clone(), q: key.q })
    }

    pub fn eigenvalue_at(&self, pr: &PrimeIdealK) -> Result<&NFElement> {
        self.eigenvalue(&pr.key())
    }

    pub fn eigenvalue_q(&self, q: u64) -> Result<&NFElement> {
        self.eigenvalue(&PrimeKey { q, index: 0 })
    }

    /// Whether q (or the prime above it) divides the level.
    pub fn bad_at(&self, q: u64) -> bool {
        self.level.divisible_by(q)
    }

    /// Monic defining polynomial, a_q in the field and the Weil bound at every good prime.
    pub fn validate(&self) -> Result<()> {
        let poly = &self.hecke_field.poly;
        if !poly.last().map_or(false, |c| *c == BigInt::from(1)) {
            return Err(Error::NonMonic);
        }
        for (key, a) in &self.eigenvalues {
            if a.field != self.hecke_field {
                return Err(Error::Invalid(format!("{}: eigenvalue at {} in another field", self.label, key.q)));
            }
            if self.bad_at(key.q) {
                continue;
            }
            let n = self.norm_of(key);
            let cp = qpoly::from_rational(&charpoly(a));
            if !qpoly::roots_in_weil_interval(&cp, n) {
                return Err(Error::Invalid(format!("{}: a at {} violates the Weil bound", self.label, key.q)));
            }
        }
        Ok(())
    }

    /// Every prime of norm below `bound` has an eigenvalue.
    pub fn covers_norms_below(&self, bound: u64) -> Result<()> {
        for q in crate::arith::primes_up_to(bound) {
            let primes: Vec<PrimeKey> = match self.base {
                BaseField::Q => alloc::vec![PrimeKey { q, index: 0 }],
                BaseField::K => {
                    if residue_degree(q) == 3 && q.checked_pow(3).map_or(true, |n| n >= bound) {
                        continue;
                    }
                    split_prime(q).iter().map(|p| p.key()).collect()
                }
            };
            for key in primes {
                if self.norm_of(&key) < bound && !self.eigenvalues.contains_key(&key) {
                    return Err(Error::MissingEigenvalue { label: self.label.clone(), q });
                }
            }
        }
        Ok(())
    }

    /// Characteristic polynomial of the eigenvalue at the i-th prime of the table.
    fn charpoly_at(&self, key: &PrimeKey) -> Option<Vec<BigRational>> {
        self.eigenvalues.get(key).map(charpoly)
    }
}

// ---------------------------------------------------------------------------
// Synthetic records

fn rational_field_element(n: i64) -> NFElement {
    NFElement::from_int(&NumberFieldSpec::rationals(), n)
}

/// Record over Q with a_q(E_{a,b}) at the listed good primes.
pub fn synthesize_from_e(
    a: &BigInt,
    b: &BigInt,
    primes: &[u64],
    counters: &dyn Fn(u64) -> Result<Arc<Counter>>,
    cache: &dyn CountCache,
) -> Result<NewformRecord> {
    let mut eig = BTreeMap::new();
    for &q in primes {
        let c = counters(q)?;
        let t = c.trace_e(a, b, cache)?;
        eig.insert(PrimeKey { q, index: 0 }, rational_field_element(t));
    }
    Ok(NewformRecord {
        label: format!("E({},{})", a, b),
        base: BaseField::Q,
        level: frey::serre_level_e(a, b)?,
        hecke_field: NumberFieldSpec::rationals(),
        eigenvalues: eig,
        complete_below_norm: 0,
        provenance: Provenance::Synthetic,
    })
}

/// Record over K with a_pr(F^(delta)_{a,b}) at every prime above the listed q.
pub fn synthesize_from_f(
    a: &BigInt,
    b: &BigInt,
    delta: &KElement,
    primes: &[u64],
    counters: &dyn Fn(u64) -> Result<Arc<Counter>>,
    cache: &dyn CountCache,
) -> Result<NewformRecord> {
    let mut eig = BTreeMap::new();
    for &q in primes {
        let c = counters(q)?;
        for pr in split_prime(q) {
            let t = c.trace_f(a, b, delta, &pr, cache)?;
            eig.insert(pr.key(), rational_field_element(t));
        }
    }
    let (e2, e7) = frey::conductor_f_at_q2_q7(a, b, delta).unwrap_or((0, 0));
    let three = crate::numfield::reduce_k(&frey::f_bad_factor(a, b), &crate::numfield::prime_q3())?;
    let e3 = if three.iter().all(|&c| c == 0) { 1 } else { 0 };
    Ok(NewformRecord {
        label: format!("F({},{};{})", a, b, frey::delta_name(delta)),
        base: BaseField::K,
        level: Level::k(e2, e3, e7),
        hecke_field: NumberFieldSpec::rationals(),
        eigenvalues: eig,
        complete_below_norm: 0,
        provenance: Provenance::Synthetic,
    })
}

/// Record over K with Hecke field K whose eigenvalues are the traces of J(x, y).
///
/// At a split q the traces form a sigma_0-orbit {u, s(u), s^2(u)}; the record puts
/// a_{s^j q_0} = s^j(u) with u the least element, which is consistent with the Galois action.
pub fn synthesize_from_j(
    x: &BigInt,
    y: &BigInt,
    primes: &[u64],
    counters: &dyn Fn(u64) -> Result<Arc<Counter>>,
    cache: &dyn CountCache,
) -> Result<NewformRecord> {
    let field = NumberFieldSpec::k();
    let theta = NFElement::generator(&field);
    let mut eig = BTreeMap::new();
    for &q in primes {
        let c = counters(q)?;
        let t = c.trace_set(x, y, cache)?;
        let prs = split_prime(q);
        let u0 = t.elements[0].clone();
        for pr in prs {
            let u = u0.sigma(pr.index as usize);
            eig.insert(pr.key(), NFElement::embed_k(&theta, &u));
        }
    }
    Ok(NewformRecord {
        label: format!("J({},{})", x, y),
        base: BaseField::K,
        level: Level::k(2, 0, 2),
        hecke_field: field,
        eigenvalues: eig,
        complete_below_norm: 0,
        provenance: Provenance::Synthetic,
    })
}

/// The record with every eigenvalue multiplied by chi_7; the prime above 7 is dropped.
pub fn chi7_twist(rec: &NewformRecord, label: &str) -> NewformRecord {
    let mut out = rec.clone();
    out.label = label.to_string();
    out.eigenvalues = rec
        .eigenvalues
        .iter()
        .filter(|(k, _)| k.q != 7)
        .map(|(k, a)| {
            let s = match rec.base {
                BaseField::K => chi7_sign(&prime_of_key(k)),
                BaseField::Q => crate::arith::legendre(k.q as i64 % 7, 7) as i8,
            };
            (*k, if s < 0 { a.neg() } else { a.clone() })
        })
        .collect();
    out
}

// ---------------------------------------------------------------------------
// Structure

/// Roots of K's cubic in the Hecke field, found by exact verification.
pub fn contains_k(rec: &NewformRecord, opts: EmbeddingSearch) -> Embeddings {
    find_k_embeddings(&rec.hecke_field, opts)
}

/// f^sigma with a_pr(f^sigma) = a_{sigma pr}(f), sigma = sigma_0^k.
pub fn galois_conjugate_record(rec: &NewformRecord, k: usize) -> NewformRecord {
    let mut out = rec.clone();
    if rec.base == BaseField::Q || k % 3 == 0 {
        return out;
    }
    out.eigenvalues = rec
        .eigenvalues
        .keys()
        .filter_map(|key| {
            let pr = prime_of_key(key);
            let image = pr.sigma(k).key();
            rec.eigenvalues.get(&image).map(|a| (*key, a.clone()))
        })
        .collect();
    out
}

/// Split primes q for which the table has all three primes above q.
fn complete_split_primes(rec: &NewformRecord) -> Vec<u64> {
    let mut qs: Vec<u64> = rec.eigenvalues.keys().filter(|k| k.index == 2).map(|k| k.q).collect();
    qs.retain(|&q| (0..3).all(|i| rec.eigenvalues.contains_key(&PrimeKey { q, index: i })));
    qs
}

/// a_{sigma pr} = a_pr at every available split prime. A necessary criterion for base change,
/// bounded by the primes in the table; vacuously true without split primes.
pub fn is_base_change(rec: &NewformRecord) -> bool {
    complete_split_primes(rec).into_iter().all(|q| {
        let a0 = &rec.eigenvalues[&PrimeKey { q, index: 0 }];
        (1..3).all(|i| &rec.eigenvalues[&PrimeKey { q, index: i }] == a0)
    })
}

/// Size of the Gal(K/Q)-orbit of the constituent: 1 when f^sigma has the same
/// characteristic polynomials as f at every split prime, else 3.
pub fn galois_orbit_size(rec: &NewformRecord) -> u8 {
    if rec.base == BaseField::Q {
        return 1;
    }
    let conj = galois_conjugate_record(rec, 1);
    for q in complete_split_primes(rec) {
        for i in 0..3 {
            let key = PrimeKey { q, index: i };
            if rec.charpoly_at(&key) != conj.charpoly_at(&key) {
                return 3;
            }
        }
    }
    1
}

/// A Hecke constituent together with the structural data used by elimination.
#[derive(Debug, Clone)]
pub struct Constituent {
    pub record: Arc<NewformRecord>,
    pub degree: usize,
    pub galois_orbit_size: u8,
    pub embeddings: Embeddings,
}

impl Constituent {
    pub fn new(record: Arc<NewformRecord>, opts: EmbeddingSearch) -> Self {
        let embeddings = if record.base == BaseField::K {
            contains_k(&record, opts)
        } else {
            Embeddings::Absent(crate::numfield::AbsenceProof::Degree)
        };
        Constituent { degree: record.degree(), galois_orbit_size: galois_orbit_size(&record), embeddings, record }
    }

    pub fn k_roots(&self) -> Option<&[NFElement; 3]> {
        match &self.embeddings {
            Embeddings::Found(r) => Some(r),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Twist pairs

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistPair {
    pub first: String,
    pub second: String,
    /// The partner lives in the auxiliary family (a level of lower q7-exponent).
    pub cross_level: bool,
}

fn negate_poly(p: &[BigRational]) -> Vec<BigRational> {
    // charpoly of -x is (-1)^n chi(-X)
    let n = p.len() - 1;
    p.iter().enumerate().map(|(i, c)| if (n - i) % 2 == 1 { -c.clone() } else { c.clone() }).collect()
}

/// Whether a_pr(h2) and chi_7(pr) a_pr(h) are conjugate at every shared good prime;
/// returns None when no shared prime has a nonzero eigenvalue with chi_7 = -1.
fn twist_related(h: &NewformRecord, h2: &NewformRecord) -> Option<bool> {
    if h.degree() != h2.degree() || h.base != h2.base {
        return Some(false);
    }
    let mut separating = false;
    for (key, a) in &h.eigenvalues {
        if key.q == 7 || h.bad_at(key.q) || h2.bad_at(key.q) {
            continue;
        }
        let Some(b) = h2.eigenvalues.get(key) else { continue };
        let sign = match h.base {
            BaseField::K => chi7_sign(&prime_of_key(key)),
            BaseField::Q => crate::arith::legendre(key.q as i64 % 7, 7) as i8,
        };
        let pa = charpoly(a);
        let pb = charpoly(b);
        let target = if sign < 0 { negate_poly(&pa) } else { pa.clone() };
        if pb != target {
            return Some(false);
        }
        if sign < 0 && negate_poly(&pa) != pa {
            separating = true;
        }
    }
    if separating {
        Some(true)
    } else {
        None
    }
}

/// Pairs (h, h') in `family` with a_pr(h') = chi_7(pr) a_pr(h) up to conjugation, then partners
/// for the remaining records among `others`. Returns the pairs and the unmatched labels.
pub fn detect_twist_pairs(family: &[NewformRecord], others: &[NewformRecord]) -> Result<(Vec<TwistPair>, Vec<String>)> {
    let mut pairs = Vec::new();
    let mut matched = alloc::vec![false; family.len()];
    for i in 0..family.len() {
        let mut cands = Vec::new();
        for j in 0..family.len() {
            if i == j {
                continue;
            }
            match twist_related(&family[i], &family[j]) {
                Some(true) => cands.push(j),
                Some(false) => {}
                None => return Err(Error::Ambiguous { label: family[i].label.clone() }),
            }
        }
        if cands.len() > 1 {
            return Err(Error::Ambiguous { label: family[i].label.clone() });
        }
        if let Some(&j) = cands.first() {
            matched[i] = true;
            if i < j {
                pairs.push(TwistPair {
                    first: family[i].label.clone(),
                    second: family[j].label.clone(),
                    cross_level: false,
                });
            }
        }
    }
    let mut unmatched = Vec::new();
    for (i, h) in family.iter().enumerate() {
        if matched[i] {
            continue;
        }
        let cands: Vec<&NewformRecord> = others.iter().filter(|o| twist_related(h, o) == Some(true)).collect();
        match cands.len() {
            0 => unmatched.push(h.label.clone()),
            1 => pairs.push(TwistPair { first: h.label.clone(), second: cands[0].label.clone(), cross_level: true }),
            _ => return Err(Error::Ambiguous { label: h.label.clone() }),
        }
    }
    Ok((pairs, unmatched))
}

// ---------------------------------------------------------------------------
// Fingerprints

/// Degree and characteristic polynomials of the first three eigenvalues: an identifier that does
/// not depend on the ordering of forms inside a space.
pub fn fingerprint(rec: &NewformRecord) -> String {
    let mut s = String::new();
    let _ = write!(s, "d{}", rec.degree());
    for (key, a) in rec.eigenvalues.iter().take(3) {
        let _ = write!(s, "|{}.{}:", key.q, key.index);
        let cp = charpoly(a);
        for (i, c) in cp.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            if c.denom() == &BigInt::from(1) {
                let _ = write!(s, "{}", c.numer());
            } else {
                let _ = write!(s, "{}/{}", c.numer(), c.denom());
            }
        }
    }
    s
}

/// Zero test for eigenvalues.
pub fn is_zero_eigenvalue(a: &NFElement) -> bool {
    a.coords.iter().all(|c| c.is_zero())
}
