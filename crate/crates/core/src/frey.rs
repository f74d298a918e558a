//! The Frey objects E_{a,b}/Q, F_{a,b}^(delta)/K and C_7(a,b)/Q, their invariants,
//! reduction types, Serre levels and case routing.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{BadKind, Error, Result};
use crate::numfield::{q, reduce_k, KElement, PrimeIdealK};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// phi_7(a, b) = (a^7 + b^7)/(a + b).
pub fn phi7(a: &BigInt, b: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..7u32 {
        let term = a.pow(6 - i) * b.pow(i);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn bdiv(d: i64, n: &BigInt) -> bool {
    (n % big(d)).is_zero()
}

fn check_coprime(a: &BigInt, b: &BigInt) -> Result<()> {
    if a.gcd(b).is_one() {
        Ok(())
    } else {
        Err(Error::InvalidCase(format!("({}, {}) is not a coprime pair", a, b)))
    }
}

// ---------------------------------------------------------------------------
// E

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyE {
    pub a: BigInt,
    pub b: BigInt,
    pub a2: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl FreyE {
    /// The model is defined for any pair; coprimality is only needed by the conductor formulas.
    pub fn new(a: &BigInt, b: &BigInt) -> Self {
        let (a, b) = (a.clone(), b.clone());
        let p =
            |c: [i64; 7]| -> BigInt { (0..7u32).map(|i| big(c[i as usize]) * a.pow(6 - i) * b.pow(i)).sum::<BigInt>() };
        let a2 = -(&a - &b).pow(2);
        let a4 = big(-2) * a.pow(4) + a.pow(3) * &b - big(5) * a.pow(2) * b.pow(2) + &a * b.pow(3) - big(2) * b.pow(4);
        let a6 = p([1, -6, 8, -13, 8, -6, 1]);
        let b2 = &a2 * big(4);
        let b4 = &a4 * big(2);
        let b6 = &a6 * big(4);
        let b8 = &a2 * &a6 * big(4) - a4.pow(2);
        let c4 = b2.pow(2) - &b4 * big(24);
        let c6 = -b2.pow(3) + &b2 * &b4 * big(36) - &b6 * big(216);
        let disc = -b2.pow(2) * &b8 - b4.pow(3) * big(8) - b6.pow(2) * big(27) + &b2 * &b4 * &b6 * big(9);
        FreyE { a, b, a2, a4, a6, c4, c6, disc }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FreyE::new(&big(a), &big(b))
    }

    /// Coefficients (a2, a4, a6) reduced modulo q.
    pub fn coeffs_mod(&self, q: u64) -> [u64; 3] {
        [arith::reduce_big(&self.a2, q), arith::reduce_big(&self.a4, q), arith::reduce_big(&self.a6, q)]
    }
}

/// Conductor exponent of E_{a,b} at 2; 0 counts as divisible by everything.
pub fn conductor_exponent_e_at_2(a: &BigInt, b: &BigInt) -> Result<u32> {
    check_coprime(a, b)?;
    let ab = a * b;
    let s = a + b;
    if bdiv(4, &ab) {
        Ok(2)
    } else if bdiv(2, &ab) || bdiv(4, &s) {
        Ok(3)
    } else {
        Ok(4)
    }
}

/// Semistability defects (e_2, e_7) of E_{a,b}.
pub fn semistability_defects_e(a: &BigInt, b: &BigInt) -> Result<(u32, u32)> {
    check_coprime(a, b)?;
    let e2 = if (a * b).is_even() { 6 } else { 24 };
    let e7 = if bdiv(7, &(a + b)) { 3 } else { 6 };
    Ok((e2, e7))
}

// ---------------------------------------------------------------------------
// F

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyF {
    pub a: BigInt,
    pub b: BigInt,
    pub delta: KElement,
    pub big_a: KElement,
    pub big_b: KElement,
    pub big_c: KElement,
    pub c4: KElement,
    pub c6: KElement,
    pub disc: KElement,
}

impl FreyF {
    /// y^2 = x(x - delta A)(x + delta B).
    pub fn new(a: &BigInt, b: &BigInt, delta: &KElement) -> Self {
        let (w1, w2) = (KElement::omega_i(1), KElement::omega_i(2));
        let ra = crate::numfield::KElement::rational(num_rational::BigRational::from_integer(a.clone()));
        let rb = crate::numfield::KElement::rational(num_rational::BigRational::from_integer(b.clone()));
        let s = ra.add(&rb);
        let ab = ra.mul(&rb);
        let a2b2 = ra.square().add(&rb.square());
        let big_a = w2.sub(&w1).mul(&s.square());
        let big_b = KElement::from_ints(2, 0, 0).sub(&w2).mul(&a2b2.add(&w1.mul(&ab)));
        let big_c = big_a.add(&big_b).neg();
        let (da, db) = (delta.mul(&big_a), delta.mul(&big_b));
        let sq = da.square().add(&da.mul(&db)).add(&db.square());
        // a2 = delta(B - A), a4 = -delta^2 A B: c4 = 16(a2^2 - 3a4) with twisted A, B.
        let c4 = sq.scale(&q(16));
        let c6 = da
            .pow(3)
            .scale(&q(2))
            .add(&da.square().mul(&db).scale(&q(3)))
            .sub(&da.mul(&db.square()).scale(&q(3)))
            .sub(&db.pow(3).scale(&q(2)))
            .scale(&q(32));
        let dc = delta.mul(&big_c);
        let disc = da.mul(&db).mul(&dc).square().scale(&q(16));
        FreyF { a: a.clone(), b: b.clone(), delta: delta.clone(), big_a, big_b, big_c, c4, c6, disc }
    }

    pub fn from_ints(a: i64, b: i64, delta: &KElement) -> Self {
        FreyF::new(&big(a), &big(b), delta)
    }

    /// (delta A, delta B): the model is y^2 = x(x - dA)(x + dB).
    pub fn roots(&self) -> (KElement, KElement) {
        (self.delta.mul(&self.big_a), self.delta.mul(&self.big_b))
    }

    /// (a + b)(a^2 + w1 ab + b^2)(a^2 + w2 ab + b^2), whose prime divisors away from 2, 7
    /// are the multiplicative primes.
    pub fn bad_factor(&self) -> KElement {
        f_bad_factor(&self.a, &self.b)
    }
}

pub fn f_bad_factor(a: &BigInt, b: &BigInt) -> KElement {
    let ra = KElement::rational(num_rational::BigRational::from_integer(a.clone()));
    let rb = KElement::rational(num_rational::BigRational::from_integer(b.clone()));
    let ab = ra.mul(&rb);
    let sq = ra.square().add(&rb.square());
    let f1 = sq.add(&KElement::omega_i(1).mul(&ab));
    let f2 = sq.add(&KElement::omega_i(2).mul(&ab));
    ra.add(&rb).mul(&f1).mul(&f2)
}

/// v at the inert prime 2 of an integral element: the 2-adic valuation of its content.
pub fn v_q2(x: &KElement) -> Option<u32> {
    let c = x.int_coords();
    c.iter().filter_map(|ci| arith::valuation(ci, 2)).min()
}

// ---------------------------------------------------------------------------
// C_7

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyC7 {
    pub a: BigInt,
    pub b: BigInt,
    /// Coefficients of the septic, constant term first.
    pub coeffs: [BigInt; 8],
    pub disc: BigInt,
}

impl FreyC7 {
    /// y^2 = x^7 + 7ab x^5 + 14a^2b^2 x^3 + 7a^3b^3 x + b^7 - a^7.
    pub fn new(a: &BigInt, b: &BigInt) -> Self {
        let ab = a * b;
        let coeffs = [
            b.pow(7) - a.pow(7),
            &ab.pow(3) * 7,
            BigInt::zero(),
            &ab.pow(2) * 14,
            BigInt::zero(),
            &ab * 7,
            BigInt::zero(),
            BigInt::one(),
        ];
        let s = a.pow(7) + b.pow(7);
        let disc = -(big(2).pow(12) * big(7).pow(7) * s.pow(6));
        FreyC7 { a: a.clone(), b: b.clone(), coeffs, disc }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FreyC7::new(&big(a), &big(b))
    }

    pub fn has_cm(&self) -> bool {
        (&self.a * &self.b).is_zero()
    }

    pub fn coeffs_mod(&self, q: u64) -> [u64; 8] {
        let mut out = [0u64; 8];
        for (o, c) in out.iter_mut().zip(self.coeffs.iter()) {
            *o = arith::reduce_big(c, q);
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Cases, twists and levels

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoCase {
    OddAb,
    TwoExact,
    FourDivides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SevenCase {
    NotDividing,
    Dividing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    EllipticOnly,
    JMax,
    Fastest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseDescriptor {
    pub d: u8,
    pub two: TwoCase,
    pub seven: SevenCase,
}

impl fmt::Display for CaseDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let two = match self.two {
            TwoCase::OddAb => "ab odd",
            TwoCase::TwoExact => "2||ab",
            TwoCase::FourDivides => "4|ab",
        };
        let seven = match self.seven {
            SevenCase::NotDividing => "7∤a+b",
            SevenCase::Dividing => "7|a+b",
        };
        write!(f, "d={}, {}, {}", self.d, two, seven)
    }
}

impl CaseDescriptor {
    pub fn new(d: u8, two: TwoCase, seven: SevenCase) -> Result<Self> {
        if d != 1 && d != 3 {
            return Err(Error::InvalidCase(format!("d = {} is not 1 or 3", d)));
        }
        Ok(CaseDescriptor { d, two, seven })
    }

    /// Case of a coprime pair; for d = 3 requires 3 | a+b and (2 | a+b implies 8 | a+b).
    pub fn from_pair(a: &BigInt, b: &BigInt, d: u8) -> Result<Self> {
        check_coprime(a, b)?;
        let s = a + b;
        if d == 3 {
            if !bdiv(3, &s) {
                return Err(Error::InvalidCase("d = 3 forces 3 | a+b".into()));
            }
            if s.is_even() && !bdiv(8, &s) {
                return Err(Error::InvalidCase("d = 3 forces 8 | a+b when a+b is even".into()));
            }
        }
        let ab = a * b;
        let two = if ab.is_odd() {
            TwoCase::OddAb
        } else if bdiv(4, &ab) {
            TwoCase::FourDivides
        } else {
            TwoCase::TwoExact
        };
        let seven = if bdiv(7, &s) { SevenCase::Dividing } else { SevenCase::NotDividing };
        CaseDescriptor::new(d, two, seven)
    }

    pub fn all(d: u8) -> Vec<CaseDescriptor> {
        let mut out = Vec::new();
        for two in [TwoCase::OddAb, TwoCase::TwoExact, TwoCase::FourDivides] {
            for seven in [SevenCase::NotDividing, SevenCase::Dividing] {
                out.push(CaseDescriptor { d, two, seven });
            }
        }
        out
    }
}

/// The twist delta of the table of values of delta.
pub fn delta_for_case(case: &CaseDescriptor) -> KElement {
    let w2 = KElement::omega_i(2);
    match (case.two, case.seven) {
        (TwoCase::TwoExact, SevenCase::NotDividing) => w2.scale(&q(-7)),
        (TwoCase::TwoExact, SevenCase::Dividing) => w2,
        (_, SevenCase::NotDividing) => KElement::from_ints(-7, 0, 0),
        (_, SevenCase::Dividing) => KElement::one(),
    }
}

/// A level: an integer over Q, or exponents at q2, q3, q7 over K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Rational(u64),
    K { q2: u8, q3: u8, q7: u8 },
}

impl Level {
    pub fn k(q2: u8, q3: u8, q7: u8) -> Self {
        Level::K { q2, q3, q7 }
    }

    /// Whether the prime above q (or q itself over Q) divides the level.
    pub fn divisible_by(&self, q: u64) -> bool {
        match *self {
            Level::Rational(n) => n % q == 0,
            Level::K { q2, q3, q7 } => (q == 2 && q2 > 0) || (q == 3 && q3 > 0) || (q == 7 && q7 > 0),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Level::Rational(n) => write!(f, "{}", n),
            Level::K { q2, q3, q7 } => {
                let mut parts = Vec::new();
                for (name, e) in [("q2", q2), ("q3", q3), ("q7", q7)] {
                    match e {
                        0 => {}
                        1 => parts.push(alloc::string::String::from(name)),
                        _ => parts.push(format!("{}^{}", name, e)),
                    }
                }
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join("*"))
                }
            }
        }
    }
}

/// Serre level of F^(delta) with delta from the table.
pub fn serre_level_f(case: &CaseDescriptor) -> Level {
    let s = if case.two == TwoCase::OddAb { 1 } else { 3 };
    let t = if case.seven == SevenCase::Dividing { 1 } else { 0 };
    let e3 = if case.d == 3 { 1 } else { 0 };
    Level::k(s, e3, t)
}

/// Serre level of J and whether the form is compared after twisting by chi_7.
pub fn serre_level_j(case: &CaseDescriptor) -> Result<(Level, bool)> {
    if case.two == TwoCase::OddAb {
        return Err(Error::Normalization);
    }
    if case.d == 1 {
        return Ok((Level::k(2, 0, 2), false));
    }
    match case.seven {
        SevenCase::NotDividing => Ok((Level::k(2, 1, 2), false)),
        SevenCase::Dividing => Ok((Level::k(2, 1, 1), true)),
    }
}

/// Serre level 2^alpha 7^2 of E.
pub fn serre_level_e(a: &BigInt, b: &BigInt) -> Result<Level> {
    let alpha = conductor_exponent_e_at_2(a, b)?;
    Ok(Level::Rational(2u64.pow(alpha) * 49))
}

/// delta reduced modulo q2^2 = 4 O_K: 1 or w2, or unsupported.
fn delta_class_mod_4(delta: &KElement) -> Option<u8> {
    if !delta.is_integral() {
        return None;
    }
    let c = delta.int_coords();
    let m: Vec<i64> = c.iter().map(|x| (x.mod_floor(&big(4))).try_into().unwrap()).collect();
    match m.as_slice() {
        [1, 0, 0] => Some(1),
        [2, 0, 1] => Some(2),
        _ => None,
    }
}

/// (v_q2, v_q7) of the conductor of F^(delta).
pub fn conductor_f_at_q2_q7(a: &BigInt, b: &BigInt, delta: &KElement) -> Result<(u8, u8)> {
    check_coprime(a, b)?;
    let s = a + b;
    let ab = a * b;
    let unsupported = || Error::UnsupportedDelta(format!("{:?}", delta));
    let v7 = crate::numfield::v_q7(delta).ok_or_else(unsupported)?;
    let e7 = if v7 == 0 {
        if bdiv(7, &s) {
            1
        } else {
            2
        }
    } else if v7 % 2 == 1 && !bdiv(7, &s) {
        0
    } else {
        return Err(unsupported());
    };
    let class = delta_class_mod_4(delta).ok_or_else(unsupported)?;
    let e2 = match class {
        1 => {
            if ab.is_odd() {
                let v = arith::valuation(&s, 2).unwrap_or(u32::MAX);
                match v {
                    1 => 4,
                    2 => 0,
                    _ => 1,
                }
            } else if bdiv(4, &ab) {
                3
            } else {
                4
            }
        }
        _ => {
            if ab.is_even() && !bdiv(4, &ab) {
                3
            } else {
                return Err(unsupported());
            }
        }
    };
    if ab.is_even() && cfg!(debug_assertions) {
        let f = FreyF::new(a, b, delta);
        debug_assert_eq!((v_q2(&f.c4), v_q2(&f.c6), v_q2(&f.disc)), (Some(4), Some(5), Some(4)));
    }
    Ok((e2, e7))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Good,
    Multiplicative,
}

/// Reduction type of E_{a,b} at a prime q outside {2, 7}.
pub fn classify_reduction_e(a: &BigInt, b: &BigInt, q: u64) -> Result<Reduction> {
    if q == 2 || q == 7 {
        return Err(Error::BadReduction { q, kind: BadKind::Excluded });
    }
    if arith::reduce_big(&phi7(a, b), q) == 0 {
        Ok(Reduction::Multiplicative)
    } else {
        Ok(Reduction::Good)
    }
}

/// Reduction type of F^(delta)_{a,b} at a prime of K of residue characteristic outside {2, 7}.
pub fn classify_reduction_f(a: &BigInt, b: &BigInt, pr: &PrimeIdealK) -> Result<Reduction> {
    if pr.q == 2 || pr.q == 7 {
        return Err(Error::BadReduction { q: pr.q, kind: BadKind::Excluded });
    }
    let r = reduce_k(&f_bad_factor(a, b), pr)?;
    if r.iter().all(|&c| c == 0) {
        Ok(Reduction::Multiplicative)
    } else {
        Ok(Reduction::Good)
    }
}

// ---------------------------------------------------------------------------
// Routing

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreyKind {
    E,
    F { delta: KElement },
    J,
}

impl fmt::Display for FreyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreyKind::E => write!(f, "E"),
            FreyKind::F { delta } if *delta == KElement::one() => write!(f, "F"),
            FreyKind::F { delta } => write!(f, "F^({})", delta_name(delta)),
            FreyKind::J => write!(f, "J"),
        }
    }
}

pub fn delta_name(delta: &KElement) -> &'static str {
    let w2 = KElement::omega_i(2);
    if *delta == KElement::one() {
        "1"
    } else if *delta == KElement::from_ints(-7, 0, 0) {
        "-7"
    } else if *delta == w2 {
        "w2"
    } else if *delta == w2.scale(&q(-7)) {
        "-7w2"
    } else {
        "?"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Technique {
    /// Norm-gcd elimination over Q with the curve E.
    ClassicalE,
    /// Norm-gcd elimination over K with F^(delta), refined elimination for stragglers.
    StandardF,
    /// Elimination with the trace sets of J.
    TraceSetJ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub case: CaseDescriptor,
    pub frey: FreyKind,
    pub level: Level,
    /// Compare against chi_7-twisted eigenvalues.
    pub chi7_twist: bool,
    pub technique: Technique,
}

/// Plan for a case given by residues of (a, b) modulo 168 = 8 * 3 * 7.
pub fn route_case(a: i64, b: i64, d: u8, route: Route) -> Result<Vec<PlanStep>> {
    let (a, b) = (a.rem_euclid(168), b.rem_euclid(168));
    for p in [2, 3, 7] {
        if a % p == 0 && b % p == 0 {
            return Err(Error::InvalidCase(format!("residues share the factor {}", p)));
        }
    }
    let case = CaseDescriptor::from_pair(&big(a), &big(b), d).or_else(|e| match e {
        // residues need not be coprime as integers, only modulo 2, 3, 7
        Error::InvalidCase(msg) if msg.contains("coprime") => {
            let (a1, b1) = (big(a), big(b) + big(168) * big(5));
            CaseDescriptor::from_pair(&a1, &b1, d)
        }
        other => Err(other),
    })?;
    route_descriptor(&case, route)
}

/// The Frey object chosen for a case in each proof route.
pub fn route_descriptor(case: &CaseDescriptor, route: Route) -> Result<Vec<PlanStep>> {
    use SevenCase::*;
    use TwoCase::*;
    let f_step = |case: &CaseDescriptor| PlanStep {
        case: *case,
        frey: FreyKind::F { delta: delta_for_case(case) },
        level: serre_level_f(case),
        chi7_twist: false,
        technique: Technique::StandardF,
    };
    let j_step = |case: &CaseDescriptor, general: bool| -> Result<PlanStep> {
        let (level, twist) = if general {
            (if case.d == 3 { Level::k(2, 1, 2) } else { Level::k(2, 0, 2) }, false)
        } else {
            serre_level_j(case)?
        };
        Ok(PlanStep { case: *case, frey: FreyKind::J, level, chi7_twist: twist, technique: Technique::TraceSetJ })
    };
    let e_step = |case: &CaseDescriptor| PlanStep {
        case: *case,
        frey: FreyKind::E,
        level: Level::Rational(if case.two == FourDivides { 196 } else { 392 }),
        chi7_twist: false,
        technique: Technique::ClassicalE,
    };
    let step = match (route, case.two, case.seven) {
        (Route::EllipticOnly, _, _) => f_step(case),
        (Route::JMax, OddAb, _) => f_step(case),
        (Route::JMax, _, _) => j_step(case, true)?,
        (Route::Fastest, OddAb, NotDividing) | (Route::Fastest, TwoExact, NotDividing) => e_step(case),
        (Route::Fastest, FourDivides, NotDividing) | (Route::Fastest, OddAb, Dividing) => f_step(case),
        (Route::Fastest, _, Dividing) => j_step(case, false)?,
    };
    Ok(vec![step])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_invariants() {
        let e = FreyE::from_ints(1, 0);
        assert_eq!((e.a2.clone(), e.a4.clone(), e.a6.clone()), (big(-1), big(-2), big(1)));
        assert_eq!(e.disc, big(784));
        assert_eq!(e.c4.pow(3) - e.c6.pow(2), &e.disc * 1728);
        let e = FreyE::from_ints(1, -1);
        assert_eq!((e.a2.clone(), e.a4.clone(), e.a6.clone()), (big(-4), big(-11), big(43)));
    }

    #[test]
    fn conductor_at_2() {
        assert_eq!(conductor_exponent_e_at_2(&big(1), &big(0)).unwrap(), 2);
        assert_eq!(conductor_exponent_e_at_2(&big(1), &big(-1)).unwrap(), 3);
        assert_eq!(conductor_exponent_e_at_2(&big(1), &big(2)).unwrap(), 3);
        assert_eq!(conductor_exponent_e_at_2(&big(1), &big(1)).unwrap(), 4);
        assert_eq!(semistability_defects_e(&big(1), &big(-1)).unwrap(), (24, 3));
        assert_eq!(semistability_defects_e(&big(1), &big(0)).unwrap(), (6, 6));
        assert_eq!(semistability_defects_e(&big(2), &big(1)).unwrap(), (6, 6));
    }

    #[test]
    fn f_invariants() {
        for (a, b) in [(1, 0), (1, 1), (2, 1), (3, -5)] {
            let f = FreyF::from_ints(a, b, &KElement::one());
            let (w1, w2) = (KElement::omega_i(1), KElement::omega_i(2));
            let ra = KElement::from_ints(a, 0, 0);
            let rb = KElement::from_ints(b, 0, 0);
            let expect_c =
                w1.sub(&KElement::from_ints(2, 0, 0)).mul(&ra.square().add(&w2.mul(&ra.mul(&rb))).add(&rb.square()));
            assert_eq!(f.big_c, expect_c);
            assert_eq!(f.c4.pow(3).sub(&f.c6.square()), f.disc.scale(&q(1728)));
        }
    }

    #[test]
    fn deltas_and_levels() {
        let c = CaseDescriptor::new(3, TwoCase::TwoExact, SevenCase::NotDividing).unwrap();
        assert_eq!(delta_for_case(&c), KElement::from_ints(14, 0, -7));
        let c = CaseDescriptor::new(3, TwoCase::OddAb, SevenCase::Dividing).unwrap();
        assert_eq!(delta_for_case(&c), KElement::one());
        assert_eq!(serre_level_f(&c), Level::k(1, 1, 1));
        let c = CaseDescriptor::new(3, TwoCase::FourDivides, SevenCase::NotDividing).unwrap();
        assert_eq!(delta_for_case(&c), KElement::from_ints(-7, 0, 0));
        assert_eq!(serre_level_f(&c), Level::k(3, 1, 0));
        let c = CaseDescriptor::new(1, TwoCase::OddAb, SevenCase::NotDividing).unwrap();
        assert_eq!(serre_level_f(&c), Level::k(1, 0, 0));
    }

    #[test]
    fn j_levels() {
        let c = CaseDescriptor::new(3, TwoCase::FourDivides, SevenCase::NotDividing).unwrap();
        assert_eq!(serre_level_j(&c).unwrap(), (Level::k(2, 1, 2), false));
        let c = CaseDescriptor::new(3, TwoCase::TwoExact, SevenCase::Dividing).unwrap();
        assert_eq!(serre_level_j(&c).unwrap(), (Level::k(2, 1, 1), true));
        let c = CaseDescriptor::new(1, TwoCase::TwoExact, SevenCase::NotDividing).unwrap();
        assert_eq!(serre_level_j(&c).unwrap(), (Level::k(2, 0, 2), false));
        let c = CaseDescriptor::new(3, TwoCase::OddAb, SevenCase::Dividing).unwrap();
        assert_eq!(serre_level_j(&c), Err(Error::Normalization));
    }

    #[test]
    fn conductor_of_f() {
        let one = KElement::one();
        // 8 | a+b
        assert_eq!(conductor_f_at_q2_q7(&big(3), &big(5), &one).unwrap().0, 1);
        let w2 = KElement::omega_i(2);
        assert_eq!(conductor_f_at_q2_q7(&big(2), &big(1), &w2).unwrap().0, 3);
        let m7 = KElement::from_ints(-7, 0, 0);
        assert_eq!(conductor_f_at_q2_q7(&big(2), &big(1), &m7).unwrap().1, 0);
        assert_eq!(conductor_f_at_q2_q7(&big(4), &big(1), &m7).unwrap(), (3, 0));
        assert!(conductor_f_at_q2_q7(&big(3), &big(5), &w2).is_err());
    }

    #[test]
    fn reduction_types() {
        assert_eq!(classify_reduction_e(&big(1), &big(0), 3).unwrap(), Reduction::Good);
        // phi_7(2, 1) = 43
        assert_eq!(classify_reduction_e(&big(2), &big(1), 43).unwrap(), Reduction::Multiplicative);
        for pr in crate::numfield::split_prime(13) {
            assert_eq!(classify_reduction_f(&big(1), &big(1), &pr).unwrap(), Reduction::Good);
        }
    }

    #[test]
    fn routes() {
        let c = |two, seven| CaseDescriptor::new(3, two, seven).unwrap();
        let r = route_descriptor(&c(TwoCase::TwoExact, SevenCase::NotDividing), Route::EllipticOnly).unwrap();
        assert_eq!(r[0].frey, FreyKind::F { delta: KElement::from_ints(14, 0, -7) });
        let r = route_descriptor(&c(TwoCase::FourDivides, SevenCase::Dividing), Route::JMax).unwrap();
        assert_eq!(r[0].frey, FreyKind::J);
        let r = route_descriptor(&c(TwoCase::TwoExact, SevenCase::Dividing), Route::Fastest).unwrap();
        assert_eq!((r[0].frey.clone(), r[0].level, r[0].chi7_twist), (FreyKind::J, Level::k(2, 1, 1), true));
        let r = route_case(1, 1, 3, Route::EllipticOnly);
        assert!(r.is_err());
        let r = route_case(2, 1, 3, Route::Fastest).unwrap();
        assert_eq!(r[0].frey, FreyKind::E);
    }
}
