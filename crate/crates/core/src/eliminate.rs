//! Elimination: norm-gcd bounds for E, F and J, survivor bookkeeping, refined elimination
//! modulo a prime of the Hecke field, and the Eisenstein-congruence witness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, Sieve};
use crate::error::{Error, Result};
use crate::frey::Level;
use crate::heckedata::{BaseField, NewformRecord};
use crate::numfield::{
    charpoly, eval_rational, nf_norm, residue_maps_mod_p, split_prime, KElement, NFElement, PrimeIdealK, PrimeKey,
    ResidueMap,
};
use crate::poly::Zp;
use crate::traces::{CountCache, Counter, TraceSet};

// ---------------------------------------------------------------------------
// Residue pairs

/// Representatives of (F_q^2 - 0)/F_q^*: (0, 1) and (1, t).
pub fn classes(q: u64) -> Vec<(u64, u64)> {
    let mut out = vec![(0, 1)];
    out.extend((0..q).map(|t| (1, t)));
    out
}

/// (class index, lambda) with (x, y) = lambda * representative.
pub fn class_of(x: u64, y: u64, q: u64) -> Option<(usize, u64)> {
    let (x, y) = (x % q, y % q);
    if x == 0 {
        if y == 0 {
            return None;
        }
        return Some((0, y));
    }
    let t = arith::mul_mod(y, arith::inv_mod(x, q)?, q);
    Some((1 + t as usize, x))
}

/// a_q(E_{x,y}) per class; None where q | phi_7(x, y).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ETable {
    pub q: u64,
    pub traces: Vec<Option<i64>>,
}

/// a_pr(F^(delta)_{x,y}) per class and prime above q; None at multiplicative primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTable {
    pub q: u64,
    pub delta: KElement,
    pub primes: Vec<PrimeIdealK>,
    pub traces: Vec<Vec<Option<i64>>>,
}

/// T_q(x, y) per class; None where q | x^7 + y^7.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JTable {
    pub q: u64,
    pub sets: Vec<Option<TraceSet>>,
}

fn bad_is_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::BadReduction { kind: crate::error::BadKind::Multiplicative, .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn e_table(counter: &Counter, cache: &dyn CountCache) -> Result<ETable> {
    let q = counter.q;
    let traces = classes(q)
        .into_iter()
        .map(|(x, y)| bad_is_none(counter.trace_e(&BigInt::from(x), &BigInt::from(y), cache)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ETable { q, traces })
}

pub fn f_table(counter: &Counter, delta: &KElement, cache: &dyn CountCache) -> Result<FTable> {
    let q = counter.q;
    let primes = split_prime(q);
    let mut traces = Vec::new();
    for (x, y) in classes(q) {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        let row = primes
            .iter()
            .map(|pr| bad_is_none(counter.trace_f(&x, &y, delta, pr, cache)))
            .collect::<Result<Vec<_>>>()?;
        traces.push(row);
    }
    Ok(FTable { q, delta: delta.clone(), primes, traces })
}

pub fn j_table(counter: &Counter, cache: &dyn CountCache) -> Result<JTable> {
    let q = counter.q;
    let sets = classes(q)
        .into_iter()
        .map(|(x, y)| bad_is_none(counter.trace_set(&BigInt::from(x), &BigInt::from(y), cache)))
        .collect::<Result<Vec<_>>>()?;
    Ok(JTable { q, sets })
}

impl JTable {
    /// T_q(x, y) = (lambda | q) T_q(representative).
    pub fn at(&self, x: u64, y: u64) -> Option<TraceSet> {
        let (c, lambda) = class_of(x, y, self.q)?;
        let t = self.sets[c].as_ref()?;
        Some(t.signed(arith::legendre(lambda as i64, self.q) as i8))
    }
}

// ---------------------------------------------------------------------------
// Bounds

/// A bound B represented by its distinct factors |term| (1 omitted) and a zero flag.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bound {
    pub zero: bool,
    pub terms: BTreeSet<BigUint>,
}

impl Bound {
    pub fn push(&mut self, v: &BigInt) {
        if v.is_zero() {
            self.zero = true;
        } else {
            let a = v.magnitude().clone();
            if !a.is_one() {
                self.terms.insert(a);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// The product of the distinct terms (0 when a term vanishes).
    pub fn value(&self) -> BigUint {
        if self.zero {
            return BigUint::zero();
        }
        self.terms.iter().fold(BigUint::one(), |acc, t| acc * t)
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        self.zero || self.terms.iter().any(|t| (t % p).is_zero())
    }
}

fn to_int(r: BigRational) -> Result<BigInt> {
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::Invalid(format!("non-integral norm {}", r)))
    }
}

/// Per-form cache of characteristic polynomials of eigenvalues.
#[derive(Debug, Clone)]
pub struct FormData<'a> {
    pub record: &'a NewformRecord,
    charpolys: BTreeMap<PrimeKey, Vec<BigRational>>,
}

impl<'a> FormData<'a> {
    pub fn new(record: &'a NewformRecord) -> Self {
        let charpolys = record.eigenvalues.iter().map(|(k, a)| (*k, charpoly(a))).collect();
        FormData { record, charpolys }
    }

    fn cp(&self, key: &PrimeKey) -> Result<&Vec<BigRational>> {
        self.charpolys.get(key).ok_or(Error::MissingEigenvalue { label: self.record.label.clone(), q: key.q })
    }

    /// |N(a_key - b)| for rational integer b.
    pub fn norm_minus(&self, key: &PrimeKey, b: &BigInt) -> Result<BigInt> {
        let v = eval_rational(self.cp(key)?, &BigRational::from_integer(b.clone()));
        Ok(to_int(v)?.abs())
    }

    /// |N(a_key^2 - n^2)|.
    pub fn norm_mult(&self, key: &PrimeKey, n: u64) -> Result<BigInt> {
        let n = BigInt::from(n);
        Ok(self.norm_minus(key, &n)? * self.norm_minus(key, &-n)?)
    }

    /// |N(iota(u) - a_key)| with iota(w) = theta.
    pub fn norm_minus_k(&self, key: &PrimeKey, u: &KElement, theta: Option<&NFElement>) -> Result<BigInt> {
        if u.is_rational() {
            return self.norm_minus(key, &u.int_coords()[0]);
        }
        let theta = theta.ok_or(Error::EmbeddingUnavailable)?;
        let a = self.record.eigenvalue(key)?;
        let iu = NFElement::embed_k(theta, u);
        Ok(to_int(nf_norm(&iu.sub(a)))?.abs())
    }
}

/// B = prod over residue pairs of N(a_q(f) - a_q(E_{x,y})), or N(a_q(f)^2 - (q+1)^2) where q | phi_7.
pub fn bound_e(form: &FormData, table: &ETable) -> Result<Bound> {
    let q = table.q;
    let key = PrimeKey { q, index: 0 };
    let mut b = Bound::default();
    for t in &table.traces {
        match t {
            Some(t) => b.push(&form.norm_minus(&key, &BigInt::from(*t))?),
            None => b.push(&form.norm_mult(&key, q + 1)?),
        }
    }
    Ok(b)
}

/// B = prod over residue pairs of gcd over pr | q of N(a_pr(g) - b_pr(x, y)).
pub fn bound_f(form: &FormData, table: &FTable) -> Result<Bound> {
    let mut b = Bound::default();
    for row in &table.traces {
        let mut g = BigInt::zero();
        for (pr, t) in table.primes.iter().zip(row.iter()) {
            let key = pr.key();
            let v = match t {
                Some(t) => form.norm_minus(&key, &BigInt::from(*t))?,
                None => form.norm_mult(&key, pr.norm() + 1)?,
            };
            g = g.gcd(&v);
        }
        b.push(&g);
    }
    Ok(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GaloisSubset {
    /// S = {1}.
    Identity,
    /// S = Gal(K/Q).
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JVariant {
    /// All residue pairs.
    Plain,
    /// Pairs with x <= y; squared norms when the symmetry sign is -1.
    Symmetric,
    /// All residue pairs with N(u - a) N(u + a): covers a chi_7-twisted partner at once.
    Squared,
}

/// B_{q,S} for the Jacobian J with the embedding iota(w) = theta (needed unless q is inert).
pub fn bound_j(
    form: &FormData,
    table: &JTable,
    s: GaloisSubset,
    variant: JVariant,
    theta: Option<&NFElement>,
) -> Result<Bound> {
    let q = table.q;
    let primes = split_prime(q);
    let sigmas: Vec<usize> = if primes.len() == 1 || s == GaloisSubset::Identity { vec![0] } else { vec![0, 1, 2] };
    let q0 = primes[0];
    let sym = crate::traces::symmetry_sign(&q0);
    let squared = match variant {
        JVariant::Plain => false,
        JVariant::Squared => true,
        JVariant::Symmetric => sym < 0,
    };
    let mut b = Bound::default();
    // M = gcd over sigma of N(a_{sigma q}^2 - (Nq + 1)^2)
    let mut m = BigInt::zero();
    for &k in &sigmas {
        m = m.gcd(&form.norm_mult(&q0.sigma(k).key(), q0.norm() + 1)?);
    }
    b.push(&m);
    let mut seen: BTreeSet<Vec<KElement>> = BTreeSet::new();
    let term = |u: &KElement| -> Result<BigInt> {
        let mut g = BigInt::zero();
        for &k in &sigmas {
            let key = q0.sigma(k).key();
            let su = u.sigma(k);
            let mut v = form.norm_minus_k(&key, &su, theta)?;
            if squared {
                v *= form.norm_minus_k(&key, &su.neg(), theta)?;
            }
            g = g.gcd(&v);
        }
        Ok(g)
    };
    for x in 0..q {
        for y in 0..q {
            if (x, y) == (0, 0) || (variant == JVariant::Symmetric && x > y) {
                continue;
            }
            let Some(t) = table.at(x, y) else { continue };
            if !seen.insert(t.elements.clone()) {
                continue;
            }
            for u in &t.elements {
                b.push(&term(u)?);
            }
        }
    }
    Ok(b)
}

// ---------------------------------------------------------------------------
// Survivors

/// Candidate exponents p >= 5, p != 7 left by one or more bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Survivors {
    /// Every p survives (a vanishing bound).
    pub all: bool,
    pub primes: BTreeSet<u64>,
    /// Product of the parts of the bounds with no prime factor below the sieve bound (1 if none).
    pub cofactor: BigUint,
    /// Survivors kept only because they equal an auxiliary prime.
    pub equal_to_aux: BTreeSet<u64>,
}

impl Survivors {
    pub fn all() -> Self {
        Survivors { all: true, primes: BTreeSet::new(), cofactor: BigUint::one(), equal_to_aux: BTreeSet::new() }
    }

    pub fn none() -> Self {
        Survivors { all: false, primes: BTreeSet::new(), cofactor: BigUint::one(), equal_to_aux: BTreeSet::new() }
    }

    pub fn is_empty(&self) -> bool {
        !self.all && self.primes.is_empty() && self.cofactor.is_one()
    }

    fn admissible(p: u64) -> bool {
        p >= 5 && p != 7
    }

    /// Survivors of a single bound at the auxiliary prime q; q itself always survives.
    pub fn from_bound(bound: &Bound, q: u64, sieve: &Sieve) -> Self {
        if bound.zero {
            return Survivors::all();
        }
        let mut out = Survivors::none();
        for t in &bound.terms {
            let f = sieve.factor(t);
            for (p, _) in f.primes {
                if let Some(p) = p.to_u64() {
                    if Self::admissible(p) {
                        out.primes.insert(p);
                    }
                }
            }
            if !f.cofactor.is_one() {
                out.cofactor = out.cofactor.lcm(&f.cofactor);
            }
        }
        if Self::admissible(q) && !out.primes.contains(&q) {
            out.primes.insert(q);
            out.equal_to_aux.insert(q);
        }
        out
    }

    pub fn intersect(&self, other: &Survivors) -> Survivors {
        if self.all {
            return other.clone();
        }
        if other.all {
            return self.clone();
        }
        // A large prime may be explicit on one side and inside the other side's cofactor.
        let divides = |c: &BigUint, p: u64| !c.is_one() && (c % p).is_zero();
        let mut primes: BTreeSet<u64> = self.primes.intersection(&other.primes).copied().collect();
        primes.extend(self.primes.iter().copied().filter(|&p| divides(&other.cofactor, p)));
        primes.extend(other.primes.iter().copied().filter(|&p| divides(&self.cofactor, p)));
        let mut cofactor = self.cofactor.gcd(&other.cofactor);
        for &p in &primes {
            while divides(&cofactor, p) {
                cofactor /= p;
            }
        }
        let equal_to_aux =
            self.equal_to_aux.union(&other.equal_to_aux).copied().filter(|p| primes.contains(p)).collect();
        Survivors { all: false, primes, cofactor, equal_to_aux }
    }

    pub fn union(&self, other: &Survivors) -> Survivors {
        if self.all || other.all {
            return Survivors::all();
        }
        Survivors {
            all: false,
            primes: self.primes.union(&other.primes).copied().collect(),
            cofactor: self.cofactor.lcm(&other.cofactor),
            equal_to_aux: self.equal_to_aux.union(&other.equal_to_aux).copied().collect(),
        }
    }

    pub fn remove(&mut self, p: u64) {
        self.primes.remove(&p);
        self.equal_to_aux.remove(&p);
    }
}

// ---------------------------------------------------------------------------
// Refined elimination

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refined {
    Eliminated,
    /// A residue pair satisfying the congruences modulo some prime above p.
    Survives {
        x: u64,
        y: u64,
    },
    /// p divides the index of Z[theta]; no conclusion.
    IndexDivisor,
}

/// The Frey object and its local data at q.
#[derive(Debug, Clone, Copy)]
pub enum LocalTable<'a> {
    E(&'a ETable),
    F(&'a FTable),
    /// Trace sets and the three roots of K's cubic in the Hecke field.
    J(&'a JTable, Option<&'a [NFElement; 3]>),
}

fn congruent(map: &ResidueMap, a: &NFElement, b: &NFElement) -> Result<bool> {
    Ok(map.map(a)? == map.map(b)?)
}

fn map_int(map: &ResidueMap, n: i64) -> Zp {
    map.map_int(n)
}

fn mult_ok(map: &ResidueMap, a: &Zp, n: u64) -> bool {
    let plus = map_int(map, n as i64);
    let minus = map_int(map, -(n as i64));
    *a == plus || *a == minus
}

/// Searches residue pairs satisfying the congruences at all primes above q modulo each prime above p.
pub fn refined_eliminate(form: &NewformRecord, p: u64, local: LocalTable) -> Result<Refined> {
    let maps = match residue_maps_mod_p(&form.hecke_field, p) {
        Ok(m) => m,
        Err(Error::IndexDivisor { .. }) => return Ok(Refined::IndexDivisor),
        Err(e) => return Err(e),
    };
    for map in &maps {
        if let Some((x, y)) = refined_witness(form, map, local)? {
            return Ok(Refined::Survives { x, y });
        }
    }
    Ok(Refined::Eliminated)
}

fn refined_witness(form: &NewformRecord, map: &ResidueMap, local: LocalTable) -> Result<Option<(u64, u64)>> {
    match local {
        LocalTable::E(t) => {
            let q = t.q;
            let a = map.map(form.eigenvalue_q(q)?)?;
            for (c, tr) in t.traces.iter().enumerate() {
                let ok = match tr {
                    Some(tr) => a == map_int(map, *tr),
                    None => mult_ok(map, &a, q + 1),
                };
                if ok {
                    return Ok(Some(classes(q)[c]));
                }
            }
            Ok(None)
        }
        LocalTable::F(t) => {
            let a: Vec<Zp> = t.primes.iter().map(|pr| map.map(form.eigenvalue_at(pr)?)).collect::<Result<Vec<_>>>()?;
            for (c, row) in t.traces.iter().enumerate() {
                let ok = row.iter().zip(t.primes.iter()).zip(a.iter()).all(|((tr, pr), ai)| match tr {
                    Some(tr) => *ai == map_int(map, *tr),
                    None => mult_ok(map, ai, pr.norm() + 1),
                });
                if ok {
                    return Ok(Some(classes(t.q)[c]));
                }
            }
            Ok(None)
        }
        LocalTable::J(t, roots) => {
            let q = t.q;
            let primes = split_prime(q);
            let a: Vec<NFElement> = primes.iter().map(|pr| form.eigenvalue_at(pr).cloned()).collect::<Result<_>>()?;
            let am: Vec<Zp> = a.iter().map(|x| map.map(x)).collect::<Result<_>>()?;
            let n1 = primes[0].norm() + 1;
            let thetas: Vec<NFElement> = match roots {
                Some(r) => r.to_vec(),
                None => vec![],
            };
            for x in 0..q {
                for y in 0..q {
                    if (x, y) == (0, 0) {
                        continue;
                    }
                    let ok = match t.at(x, y) {
                        None => am.iter().all(|ai| mult_ok(map, ai, n1)),
                        Some(ts) => {
                            let mut any = false;
                            for u0 in &ts.elements {
                                if u0.is_rational() {
                                    let v = map_int(map, u0.int_coords()[0].to_i64().unwrap_or(i64::MAX));
                                    if am.iter().all(|ai| *ai == v) {
                                        any = true;
                                    }
                                } else {
                                    if thetas.is_empty() {
                                        return Err(Error::EmbeddingUnavailable);
                                    }
                                    for th in &thetas {
                                        let all = primes.iter().enumerate().try_fold(true, |acc, (j, pr)| {
                                            let u = u0.sigma(pr.index as usize);
                                            let iu = NFElement::embed_k(th, &u);
                                            Ok::<bool, Error>(acc && congruent(map, &iu, &a[j])?)
                                        })?;
                                        if all {
                                            any = true;
                                            break;
                                        }
                                    }
                                }
                                if any {
                                    break;
                                }
                            }
                            any
                        }
                    };
                    if ok {
                        return Ok(Some((x, y)));
                    }
                }
            }
            Ok(None)
        }
    }
}

// ---------------------------------------------------------------------------
// Reducibility witness

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// a_pr = N(pr) + 1 modulo some prime above p at every good prime checked.
    Witnessed {
        primes_checked: usize,
    },
    /// Every prime above p fails; the largest first-failure prime is reported.
    Refuted(u64),
    Inconclusive,
}

/// Eisenstein congruence a_pr(f) = N(pr) + 1 (mod P) for good pr of norm <= bound.
pub fn reducibility_witness(form: &NewformRecord, p: u64, bound: u64) -> Result<Witness> {
    let maps = match residue_maps_mod_p(&form.hecke_field, p) {
        Ok(m) => m,
        Err(Error::IndexDivisor { .. }) => return Ok(Witness::Inconclusive),
        Err(e) => return Err(e),
    };
    let keys: Vec<PrimeKey> = form
        .eigenvalues
        .keys()
        .copied()
        .filter(|k| k.q != p && !form.bad_at(k.q) && form.norm_of(k) <= bound)
        .collect();
    if keys.is_empty() {
        return Ok(Witness::Inconclusive);
    }
    let mut worst = 0u64;
    for map in &maps {
        let mut failed = None;
        for k in &keys {
            let a = map.map(&form.eigenvalues[k])?;
            if a != map_int(map, (form.norm_of(k) + 1) as i64) {
                failed = Some(k.q);
                break;
            }
        }
        match failed {
            None => return Ok(Witness::Witnessed { primes_checked: keys.len() }),
            Some(q) => worst = worst.max(q),
        }
    }
    Ok(Witness::Refuted(worst))
}

// ---------------------------------------------------------------------------
// Sweeps

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanMode {
    Standard,
    Symmetric,
    TwistPair,
    Refined,
}

/// One auxiliary prime with its Galois subset and mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuxiliaryPrimePlan {
    pub q: u64,
    pub s: GaloisSubset,
    pub mode: PlanMode,
}

impl AuxiliaryPrimePlan {
    pub fn standard(q: u64) -> Self {
        AuxiliaryPrimePlan { q, s: GaloisSubset::Identity, mode: PlanMode::Standard }
    }

    pub fn refined(q: u64) -> Self {
        AuxiliaryPrimePlan { q, s: GaloisSubset::Identity, mode: PlanMode::Refined }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeStatus {
    EliminatedBy { q: u64, refined: bool },
    Survives,
    SelfSurvivor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorReport {
    pub label: String,
    pub fingerprint: String,
    pub survivors: Survivors,
    /// Every standard bound vanished identically.
    pub self_survivor: bool,
    /// Status of every candidate p that appeared in some bound.
    pub status: BTreeMap<u64, PrimeStatus>,
    /// Steps taken, as (q, mode, survivors after the step).
    pub trail: Vec<(u64, PlanMode, Vec<u64>)>,
    /// Primes p for which refined elimination hit an index divisor.
    pub caveats: Vec<u64>,
}

impl SurvivorReport {
    pub fn eliminated(&self) -> bool {
        !self.self_survivor && self.survivors.is_empty()
    }
}

/// Which Frey object a sweep compares against.
#[derive(Debug, Clone, Copy)]
pub enum Family<'a> {
    E(&'a BTreeMap<u64, ETable>),
    F(&'a BTreeMap<u64, FTable>),
    J(&'a BTreeMap<u64, JTable>),
}

/// Runs the plans in order: standard steps intersect survivor sets, refined steps
/// remove individual p.
pub fn survivor_sweep(
    form: &NewformRecord,
    roots: Option<&[NFElement; 3]>,
    family: Family,
    plans: &[AuxiliaryPrimePlan],
    sieve: &Sieve,
) -> Result<SurvivorReport> {
    let data = FormData::new(form);
    let mut current = Survivors::all();
    let mut status: BTreeMap<u64, PrimeStatus> = BTreeMap::new();
    let mut trail = Vec::new();
    let mut caveats = Vec::new();
    for plan in plans {
        let q = plan.q;
        let missing = || Error::Invalid(format!("no local table at {}", q));
        if plan.mode == PlanMode::Refined {
            let candidates: Vec<u64> = current.primes.iter().copied().collect();
            for p in candidates {
                if p == q {
                    continue;
                }
                let local = match family {
                    Family::E(t) => LocalTable::E(t.get(&q).ok_or_else(missing)?),
                    Family::F(t) => LocalTable::F(t.get(&q).ok_or_else(missing)?),
                    Family::J(t) => LocalTable::J(t.get(&q).ok_or_else(missing)?, roots),
                };
                match refined_eliminate(form, p, local)? {
                    Refined::Eliminated => {
                        current.remove(p);
                        status.insert(p, PrimeStatus::EliminatedBy { q, refined: true });
                    }
                    Refined::IndexDivisor => caveats.push(p),
                    Refined::Survives { .. } => {}
                }
            }
            trail.push((q, plan.mode, current.primes.iter().copied().collect()));
            continue;
        }
        let bounds: Vec<Bound> = match family {
            Family::E(t) => vec![bound_e(&data, t.get(&q).ok_or_else(missing)?)?],
            Family::F(t) => vec![bound_f(&data, t.get(&q).ok_or_else(missing)?)?],
            Family::J(t) => {
                let table = t.get(&q).ok_or_else(missing)?;
                let variant = match plan.mode {
                    PlanMode::Symmetric => JVariant::Symmetric,
                    PlanMode::TwistPair => JVariant::Squared,
                    _ => JVariant::Plain,
                };
                let inert = split_prime(q).len() == 1;
                match (roots, inert, plan.s) {
                    (_, true, _) => vec![bound_j(&data, table, plan.s, variant, None)?],
                    (Some(r), false, GaloisSubset::Identity) => {
                        vec![bound_j(&data, table, plan.s, variant, Some(&r[0]))?]
                    }
                    // The pairing of sigma(u) with a_{sigma q} depends on the embedding; keep every labeling.
                    (Some(r), false, GaloisSubset::Full) => r
                        .iter()
                        .map(|th| bound_j(&data, table, plan.s, variant, Some(th)))
                        .collect::<Result<Vec<_>>>()?,
                    (None, false, _) => return Err(Error::EmbeddingUnavailable),
                }
            }
        };
        let mut step = Survivors::none();
        for b in &bounds {
            step = step.union(&Survivors::from_bound(b, q, sieve));
        }
        for p in current.primes.iter() {
            if !step.all && !step.primes.contains(p) {
                status.entry(*p).or_insert(PrimeStatus::EliminatedBy { q, refined: false });
            }
        }
        current = current.intersect(&step);
        trail.push((q, plan.mode, current.primes.iter().copied().collect()));
    }
    // Every bound vanished: the form matches a Frey object at all auxiliary primes.
    let self_survivor = current.all;
    for p in &current.primes {
        status.insert(*p, if self_survivor { PrimeStatus::SelfSurvivor } else { PrimeStatus::Survives });
    }
    Ok(SurvivorReport {
        label: form.label.clone(),
        fingerprint: crate::heckedata::fingerprint(form),
        survivors: current,
        self_survivor,
        status,
        trail,
        caveats,
    })
}

/// A form whose chi_7-twist partner has level prime to q7 is eliminated by the ramification
/// of the mod-p representation of J at q7 (an imported fact, not recomputed).
pub fn twist_partner_rule(partner_level: &Level) -> bool {
    matches!(partner_level, Level::K { q7: 0, .. })
}

/// Records at a level for the F route must match the predicted Serre level.
pub fn check_level(form: &NewformRecord, expected: &Level) -> Result<()> {
    if form.base == BaseField::K && &form.level != expected {
        return Err(Error::InvalidCase(format!("{} has level {} not {}", form.label, form.level, expected)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_CAP;
    use crate::heckedata::{synthesize_from_e, synthesize_from_f, synthesize_from_j, Provenance};
    use crate::numfield::{find_k_embeddings, EmbeddingSearch, Embeddings, NumberFieldSpec};
    use crate::traces::NoCache;
    use alloc::sync::Arc;

    fn counters(q: u64) -> Result<Arc<Counter>> {
        Ok(Arc::new(Counter::new(q, 3, DEFAULT_CAP)?))
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rational_form(label: &str, level: Level, aps: &[(u64, i64)]) -> NewformRecord {
        let f = NumberFieldSpec::rationals();
        NewformRecord {
            label: label.into(),
            base: BaseField::Q,
            level,
            hecke_field: f.clone(),
            eigenvalues: aps.iter().map(|&(q, a)| (PrimeKey { q, index: 0 }, NFElement::from_int(&f, a))).collect(),
            complete_below_norm: 0,
            provenance: Provenance::Synthetic,
        }
    }

    #[test]
    fn classes_cover_pairs() {
        let q = 11;
        assert_eq!(classes(q).len(), 12);
        for x in 0..q {
            for y in 0..q {
                match class_of(x, y, q) {
                    None => assert_eq!((x, y), (0, 0)),
                    Some((c, l)) => {
                        let (rx, ry) = classes(q)[c];
                        assert_eq!(((rx * l) % q, (ry * l) % q), (x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn e_self_survivor_and_mult_factor() {
        let f = synthesize_from_e(&b(1), &b(0), &[3, 5, 11], &counters, &NoCache).unwrap();
        let c = counters(11).unwrap();
        let t = e_table(&c, &NoCache).unwrap();
        assert!(bound_e(&FormData::new(&f), &t).unwrap().zero);
        let g = rational_form("g", Level::Rational(196), &[(11, 4)]);
        assert_eq!(FormData::new(&g).norm_mult(&PrimeKey { q: 11, index: 0 }, 12).unwrap(), b(128));
    }

    #[test]
    fn f_self_survivor_and_refined_witness() {
        let delta = KElement::omega_i(2);
        let f = synthesize_from_f(&b(2), &b(1), &delta, &[5, 13], &counters, &NoCache).unwrap();
        let c = counters(13).unwrap();
        let t = f_table(&c, &delta, &NoCache).unwrap();
        assert!(bound_f(&FormData::new(&f), &t).unwrap().zero);
        for p in [5u64, 11, 17] {
            assert!(matches!(refined_eliminate(&f, p, LocalTable::F(&t)).unwrap(), Refined::Survives { .. }));
        }
    }

    #[test]
    fn j_bounds() {
        let j = synthesize_from_j(&b(0), &b(1), &[5, 13], &counters, &NoCache).unwrap();
        let Embeddings::Found(roots) = find_k_embeddings(&j.hecke_field, EmbeddingSearch::default()) else {
            panic!("K contains K")
        };
        let data = FormData::new(&j);
        for q in [5u64, 13] {
            let t = j_table(&counters(q).unwrap(), &NoCache).unwrap();
            for th in roots.iter() {
                let bd = bound_j(&data, &t, GaloisSubset::Identity, JVariant::Plain, Some(th)).unwrap();
                assert!(bd.zero);
            }
            assert!(matches!(
                refined_eliminate(&j, 11, LocalTable::J(&t, Some(&roots))).unwrap(),
                Refined::Survives { .. }
            ));
        }
        // Inert q = 11, a = 4: M = (4 - 1332)(4 + 1332) = -2^7 83 167.
        let g = NewformRecord {
            level: Level::k(2, 0, 2),
            base: BaseField::K,
            ..rational_form("g", Level::Rational(1), &[(11, 4)])
        };
        let m = FormData::new(&g).norm_mult(&PrimeKey { q: 11, index: 0 }, 1332).unwrap();
        assert_eq!(m, b(2).pow(7) * b(83) * b(167));
    }

    #[test]
    fn embedding_independence() {
        let j = synthesize_from_j(&b(1), &b(2), &[13], &counters, &NoCache).unwrap();
        let other = synthesize_from_j(&b(1), &b(3), &[13], &counters, &NoCache).unwrap();
        let Embeddings::Found(roots) = find_k_embeddings(&other.hecke_field, EmbeddingSearch::default()) else {
            panic!()
        };
        let t = j_table(&counters(13).unwrap(), &NoCache).unwrap();
        let data = FormData::new(&other);
        let vals: Vec<BigUint> = roots
            .iter()
            .map(|th| bound_j(&data, &t, GaloisSubset::Identity, JVariant::Plain, Some(th)).unwrap().value())
            .collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[1], vals[2]);
        let _ = j;
    }

    #[test]
    fn survivor_algebra() {
        let sieve = Sieve::new(1000);
        let mut bd = Bound::default();
        bd.push(&b(2 * 3 * 5 * 43));
        bd.push(&(b(1_000_003) * b(1_000_033)));
        let s = Survivors::from_bound(&bd, 13, &sieve);
        assert_eq!(s.primes.iter().copied().collect::<Vec<_>>(), vec![5, 13, 43]);
        assert_eq!(s.equal_to_aux.iter().copied().collect::<Vec<_>>(), vec![13]);
        assert!(!s.cofactor.is_one());
        let mut bd2 = Bound::default();
        bd2.push(&b(43 * 1_000_003));
        let s2 = Survivors::from_bound(&bd2, 29, &sieve);
        let both = s.intersect(&s2);
        assert_eq!(both.primes.iter().copied().collect::<Vec<_>>(), vec![43, 1_000_003]);
        assert!(both.cofactor.is_one());
        let mut zero = Bound::default();
        zero.push(&b(0));
        assert!(Survivors::from_bound(&zero, 5, &sieve).all);
        assert_eq!(Survivors::all().intersect(&s2), s2);
    }
}
