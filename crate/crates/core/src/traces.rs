//! Frobenius traces by point counting: E over F_q, F^(delta) over residue fields of K,
//! C_7 over F_{q^k}; L-polynomials and the trace sets of the Jacobian of C_7.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::{self, reduce_big};
use crate::error::{BadKind, Error, Result};
use crate::ffield::{Fq, FqTower, DEFAULT_CAP};
use crate::frey::{FreyC7, FreyE, FreyF};
use crate::numfield::{real_omega, residue_degree, KElement, PrimeIdealK, K_POLY};

// ---------------------------------------------------------------------------
// Cache

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveShape {
    /// y^2 = x^3 + a2 x^2 + a4 x + a6.
    Cubic,
    /// y^2 = septic.
    Septic,
}

/// Identifies a point count: the reduced coefficients in the fixed model of F_{q^k}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountKey {
    pub shape: CurveShape,
    pub q: u64,
    pub k: u32,
    pub coeffs: Vec<u64>,
}

/// Memoization of point counts. Implementations must tolerate concurrent readers.
pub trait CountCache {
    fn get(&self, key: &CountKey) -> Option<u64>;
    fn put(&self, key: CountKey, count: u64);
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoCache;

impl CountCache for NoCache {
    fn get(&self, _: &CountKey) -> Option<u64> {
        None
    }
    fn put(&self, _: CountKey, _: u64) {}
}

// ---------------------------------------------------------------------------
// Counting

struct Level {
    tower: FqTower,
    chi: Vec<i8>,
}

/// Fields F_q, F_{q^2}, F_{q^3} with their quadratic character tables.
///
/// For q inert in K the cubic extension uses the minimal polynomial of w as modulus,
/// so residues of K at q embed coordinatewise.
pub struct Counter {
    pub q: u64,
    levels: Vec<Level>,
}

impl core::fmt::Debug for Counter {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Counter(q={}, kmax={})", self.q, self.levels.len())
    }
}

impl Counter {
    pub fn new(q: u64, kmax: u32, cap: u64) -> Result<Self> {
        if q == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !arith::is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let mut levels = Vec::new();
        for k in 1..=kmax.min(3) {
            let tower = if k == 3 && q != 7 && residue_degree(q) == 3 {
                let m: Vec<u64> = K_POLY.iter().map(|&c| arith::reduce_i64(c, q)).collect();
                FqTower::with_modulus(q, &m, cap)?
            } else {
                FqTower::build(q, k, cap)?
            };
            let chi = tower.character_table()?;
            levels.push(Level { tower, chi });
        }
        Ok(Counter { q, levels })
    }

    pub fn kmax(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn tower(&self, k: u32) -> Result<&FqTower> {
        self.levels.get(k as usize - 1).map(|l| &l.tower).ok_or(Error::CapExceeded { q: self.q, k, cap: 0 })
    }

    fn level(&self, k: u32) -> Result<&Level> {
        self.levels.get(k as usize - 1).ok_or(Error::CapExceeded { q: self.q, k, cap: 0 })
    }

    /// Projective points of y^2 = x^3 + a2 x^2 + a4 x + a6 over F_{q^k}.
    pub fn count_cubic(&self, k: u32, a: [Fq; 3], cache: &dyn CountCache) -> Result<u64> {
        let lv = self.level(k)?;
        let key = CountKey {
            shape: CurveShape::Cubic,
            q: self.q,
            k,
            coeffs: a.iter().flat_map(|c| c[..k as usize].iter().copied()).collect(),
        };
        if let Some(n) = cache.get(&key) {
            return Ok(n);
        }
        let t = &lv.tower;
        let mut total: i64 = t.size as i64 + 1;
        for x in t.elements() {
            // ((x + a2) x + a4) x + a6
            let mut v = t.add(&x, &a[0]);
            v = t.add(&t.mul(&v, &x), &a[1]);
            v = t.add(&t.mul(&v, &x), &a[2]);
            total += lv.chi[t.index(&v) as usize] as i64;
        }
        let n = total as u64;
        cache.put(key, n);
        Ok(n)
    }

    /// Projective points of y^2 = f(x), f the odd monic septic of C_7 (one point at infinity).
    pub fn count_c7(&self, k: u32, coeffs: &[u64; 8], cache: &dyn CountCache) -> Result<u64> {
        let lv = self.level(k)?;
        let key = CountKey { shape: CurveShape::Septic, q: self.q, k, coeffs: coeffs.to_vec() };
        if let Some(n) = cache.get(&key) {
            return Ok(n);
        }
        let t = &lv.tower;
        let c = |i: usize| t.from_int(coeffs[i] as i64);
        let (c0, c1, c3, c5) = (c(0), c(1), c(3), c(5));
        let mut total: i64 = t.size as i64 + 1;
        for x in t.elements() {
            // x ((((x^2 + c5) x^2 + c3) x^2 + c1) + c0
            let s = t.square(&x);
            let mut v = t.add(&s, &c5);
            v = t.add(&t.mul(&v, &s), &c3);
            v = t.add(&t.mul(&v, &s), &c1);
            v = t.add(&t.mul(&v, &x), &c0);
            total += lv.chi[t.index(&v) as usize] as i64;
        }
        let n = total as u64;
        cache.put(key, n);
        Ok(n)
    }

    /// a_q(E_{a,b}).
    pub fn trace_e(&self, a: &BigInt, b: &BigInt, cache: &dyn CountCache) -> Result<i64> {
        let q = self.q;
        if q == 7 {
            return Err(Error::BadReduction { q, kind: BadKind::Excluded });
        }
        let e = FreyE::new(a, b);
        if reduce_big(&e.disc, q) == 0 {
            return Err(Error::BadReduction { q, kind: BadKind::Multiplicative });
        }
        let [a2, a4, a6] = e.coeffs_mod(q);
        let n = self.count_cubic(1, [[a2, 0, 0], [a4, 0, 0], [a6, 0, 0]], cache)?;
        Ok(q as i64 + 1 - n as i64)
    }

    /// a_pr(F^(delta)_{a,b}) for a prime pr of K above q.
    pub fn trace_f(
        &self,
        a: &BigInt,
        b: &BigInt,
        delta: &KElement,
        pr: &PrimeIdealK,
        cache: &dyn CountCache,
    ) -> Result<i64> {
        let q = self.q;
        if pr.q != q {
            return Err(Error::Invalid(format!("prime above {} given to a counter for {}", pr.q, q)));
        }
        if q == 7 || pr.ramified {
            return Err(Error::BadReduction { q, kind: BadKind::Excluded });
        }
        let f = FreyF::new(a, b, delta);
        let (da, db) = f.roots();
        let a2 = db.sub(&da);
        let a4 = da.mul(&db).neg();
        let red = |x: &KElement| -> Result<Fq> {
            match pr.root {
                Some(r) if pr.f == 1 => Ok([x.reduce_mod(r, q)?, 0, 0]),
                _ => Ok(x.coords_mod(q)?),
            }
        };
        if red(&f.disc)? == [0, 0, 0] {
            return Err(Error::BadReduction { q, kind: BadKind::Multiplicative });
        }
        let k = pr.f as u32;
        let n = self.count_cubic(k, [red(&a2)?, red(&a4)?, [0, 0, 0]], cache)?;
        Ok(pr.norm() as i64 + 1 - n as i64)
    }

    fn check_c7(&self, x: &BigInt, y: &BigInt) -> Result<FreyC7> {
        let q = self.q;
        if q == 7 {
            return Err(Error::BadReduction { q, kind: BadKind::Excluded });
        }
        let s = x.pow(7) + y.pow(7);
        if reduce_big(&s, q) == 0 {
            return Err(Error::BadReduction { q, kind: BadKind::Multiplicative });
        }
        Ok(FreyC7::new(x, y))
    }

    /// #C_7(x,y)(F_{q^k}).
    pub fn points_c7(&self, x: &BigInt, y: &BigInt, k: u32, cache: &dyn CountCache) -> Result<u64> {
        let c = self.check_c7(x, y)?;
        self.count_c7(k, &c.coeffs_mod(self.q), cache)
    }

    /// L-polynomial of the Jacobian of C_7(x,y) over F_q.
    pub fn lpoly_c7(&self, x: &BigInt, y: &BigInt, cache: &dyn CountCache) -> Result<LPoly> {
        let c = self.check_c7(x, y)?;
        let coeffs = c.coeffs_mod(self.q);
        let mut n = [0u64; 3];
        for k in 1..=3 {
            n[k as usize - 1] = self.count_c7(k, &coeffs, cache)?;
        }
        lpoly_from_counts(n, self.q)
    }

    /// The trace set T_q(x, y).
    pub fn trace_set(&self, x: &BigInt, y: &BigInt, cache: &dyn CountCache) -> Result<TraceSet> {
        let q = self.q;
        let l = self.lpoly_c7(x, y, cache)?;
        if residue_degree(q) == 3 {
            let a = inert_trace(&l)?;
            Ok(TraceSet { q, elements: vec![KElement::from_ints(a as i64, 0, 0)] })
        } else {
            let h = l.weil_cubic();
            let elements = cubic_roots_in_k(&h).ok_or(Error::NotGl2Compatible { q })?;
            Ok(TraceSet { q, elements })
        }
    }
}

/// a_q(E_{a,b}) with a throwaway counter.
pub fn count_points_e(a: &BigInt, b: &BigInt, q: u64) -> Result<i64> {
    if q == 2 || q == 7 {
        return Err(Error::BadReduction { q, kind: BadKind::Excluded });
    }
    Counter::new(q, 1, DEFAULT_CAP)?.trace_e(a, b, &NoCache)
}

/// a_pr(F^(delta)_{a,b}) with a throwaway counter.
pub fn count_points_f(a: &BigInt, b: &BigInt, delta: &KElement, pr: &PrimeIdealK) -> Result<i64> {
    if pr.q == 2 || pr.q == 7 {
        return Err(Error::BadReduction { q: pr.q, kind: BadKind::Excluded });
    }
    Counter::new(pr.q, pr.f as u32, DEFAULT_CAP)?.trace_f(a, b, delta, pr, &NoCache)
}

/// #C_7(a,b)(F_{q^k}) with a throwaway counter.
pub fn count_points_c7(a: &BigInt, b: &BigInt, q: u64, k: u32) -> Result<u64> {
    if q == 2 || q == 7 {
        return Err(Error::BadReduction { q, kind: BadKind::Excluded });
    }
    Counter::new(q, k, DEFAULT_CAP)?.points_c7(a, b, k, &NoCache)
}

/// T_q(x, y) with a throwaway counter.
pub fn trace_set(x: &BigInt, y: &BigInt, q: u64) -> Result<TraceSet> {
    if q == 2 || q == 7 {
        return Err(Error::BadReduction { q, kind: BadKind::Excluded });
    }
    Counter::new(q, 3, DEFAULT_CAP)?.trace_set(x, y, &NoCache)
}

// ---------------------------------------------------------------------------
// L-polynomials

/// L(T) = 1 + c1 T + ... + c6 T^6 of a genus 3 curve over F_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LPoly {
    pub q: u64,
    pub coeffs: [i128; 7],
}

/// Reconstructs L(T) from #C(F_{q^i}), i = 1, 2, 3.
pub fn lpoly_from_counts(counts: [u64; 3], q: u64) -> Result<LPoly> {
    let qi = q as i128;
    let s: Vec<i128> = (1..=3u32).map(|i| qi.pow(i) + 1 - counts[i as usize - 1] as i128).collect();
    let e1 = s[0];
    let t2 = e1 * s[0] - s[1];
    let inconsistent = Error::LPolyInconsistent { q };
    if t2 % 2 != 0 {
        return Err(inconsistent);
    }
    let e2 = t2 / 2;
    let t3 = e2 * s[0] - e1 * s[1] + s[2];
    if t3 % 3 != 0 {
        return Err(inconsistent);
    }
    let e3 = t3 / 3;
    let (c1, c2, c3) = (-e1, e2, -e3);
    let l = LPoly { q, coeffs: [1, c1, c2, c3, qi * c2, qi * qi * c1, qi.pow(3)] };
    if !l.satisfies_weil() {
        return Err(inconsistent);
    }
    Ok(l)
}

impl LPoly {
    /// prod (1 - a_i T + q T^2).
    pub fn from_traces(q: u64, a: [i128; 3]) -> LPoly {
        let qi = q as i128;
        let mut p = vec![1i128];
        for ai in a {
            let f = [1, -ai, qi];
            let mut out = vec![0i128; p.len() + 2];
            for (i, pi) in p.iter().enumerate() {
                for (j, fj) in f.iter().enumerate() {
                    out[i + j] += pi * fj;
                }
            }
            p = out;
        }
        let mut coeffs = [0i128; 7];
        coeffs.copy_from_slice(&p);
        LPoly { q, coeffs }
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let q = self.q as i128;
        (0..3).all(|i| self.coeffs[6 - i] == q.pow(3 - i as u32) * self.coeffs[i])
    }

    /// h(X) = X^3 - E1 X^2 + E2 X - E3 whose roots are the a_i with L = prod (1 - a_i T + q T^2);
    /// returned as [p0, p1, p2] for X^3 + p2 X^2 + p1 X + p0.
    pub fn weil_cubic(&self) -> [i128; 3] {
        let q = self.q as i128;
        let [_, c1, c2, c3, ..] = self.coeffs;
        let e1 = -c1;
        let e2 = c2 - 3 * q;
        let e3 = -c3 - 2 * q * e1;
        [-e3, e2, -e1]
    }

    /// Exact check that every inverse root has absolute value sqrt(q).
    pub fn satisfies_weil(&self) -> bool {
        self.satisfies_functional_equation() && real_roots_in_weil_interval(&self.weil_cubic(), self.q)
    }

    /// Power sums p_m = sum alpha_i^m over the six inverse roots, m = 1..=n.
    pub fn power_sums(&self, n: usize) -> Vec<i128> {
        // e_k = (-1)^k c_k
        let e: Vec<i128> = (0..7).map(|k| if k % 2 == 0 { self.coeffs[k] } else { -self.coeffs[k] }).collect();
        let mut p = vec![0i128; n + 1];
        for m in 1..=n {
            let mut acc = 0i128;
            for i in 1..m.min(7) {
                let term = e[i] * p[m - i];
                acc += if i % 2 == 1 { term } else { -term };
            }
            if m <= 6 {
                let term = m as i128 * e[m];
                acc += if m % 2 == 1 { term } else { -term };
            }
            p[m] = acc;
        }
        p.remove(0);
        p
    }

    /// #C(F_{q^m}) for m = 1..=n.
    pub fn counts(&self, n: usize) -> Vec<i128> {
        let q = self.q as i128;
        self.power_sums(n).iter().enumerate().map(|(i, s)| q.pow(i as u32 + 1) + 1 - s).collect()
    }
}

/// a with L over F_{q^3} equal to (1 - a T + q^3 T^2)^3, for q inert in K.
///
/// Uses the first two power sums of the base change, so both N_3 and (N_1, N_2) are involved.
pub fn inert_trace(l: &LPoly) -> Result<i128> {
    let q = l.q;
    let p = l.power_sums(6);
    let (s3, s6) = (p[2], p[5]);
    if s3 % 3 != 0 {
        return Err(Error::Integrality { q });
    }
    let a = s3 / 3;
    let q3 = (q as i128).pow(3);
    if s6 != 3 * (a * a - 2 * q3) {
        return Err(Error::LPolyInconsistent { q });
    }
    Ok(a)
}

/// Sign of u + v sqrt(q).
fn sign_surd(u: i128, v: i128, q: i128) -> i8 {
    let su = u.signum() as i8;
    let sv = v.signum() as i8;
    if su == sv || sv == 0 {
        return su;
    }
    if su == 0 {
        return sv;
    }
    let lhs = u * u;
    let rhs = v * v * q;
    if lhs == rhs {
        0
    } else if lhs > rhs {
        su
    } else {
        sv
    }
}

fn cubic_disc(h: &[i128; 3]) -> i128 {
    let [d, c, b] = *h;
    18 * b * c * d - 4 * b.pow(3) * d + b * b * c * c - 4 * c.pow(3) - 27 * d * d
}

/// Whether X^3 + p2 X^2 + p1 X + p0 has all roots real and in [-2 sqrt q, 2 sqrt q].
pub fn real_roots_in_weil_interval(h: &[i128; 3], q: u64) -> bool {
    if cubic_disc(h) < 0 {
        return false;
    }
    let q = q as i128;
    // h(B + t) with B = 2 sqrt q has nonnegative coefficients iff every root is <= B;
    // -h(-B - t) likewise for roots >= -B.
    let ok = |p0: i128, p1: i128, p2: i128| {
        sign_surd(p2, 6, q) >= 0
            && sign_surd(12 * q + p1, 4 * p2, q) >= 0
            && sign_surd(4 * q * p2 + p0, 8 * q + 2 * p1, q) >= 0
    };
    ok(h[0], h[1], h[2]) && ok(-h[0], h[1], -h[2])
}

fn eval_cubic(h: &[i128; 3], u: &KElement) -> KElement {
    let c = |n: i128| KElement::rational(BigRational::from_integer(BigInt::from(n)));
    u.pow(3).add(&c(h[2]).mul(&u.square())).add(&c(h[1]).mul(u)).add(&c(h[0]))
}

/// Roots of a monic integer cubic with three real roots, as a sigma_0-orbit in O_K.
///
/// Returns a single integer when the cubic is a cube, and None when the roots are not in K.
pub fn cubic_roots_in_k(h: &[i128; 3]) -> Option<Vec<KElement>> {
    let disc = cubic_disc(h);
    if disc < 0 {
        return None;
    }
    if disc == 0 {
        // Conjugates of an irrational element of K are distinct, so only a triple root can occur.
        let p2 = h[2];
        if p2 % 3 != 0 {
            return None;
        }
        let r = -p2 / 3;
        if h[1] == 3 * r * r && h[0] == -r.pow(3) {
            return Some(vec![KElement::from_ints(r as i64, 0, 0)]);
        }
        return None;
    }
    let roots = real_roots_f64(h);
    let w: Vec<f64> = (1..=3).map(real_omega).collect();
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in PERMS {
        let rhs = [roots[perm[0]], roots[perm[1]], roots[perm[2]]];
        let c = solve_vandermonde(&w, &rhs);
        if c.iter().any(|x| !x.is_finite() || libm::fabs(*x) > 1e15) {
            continue;
        }
        let u = KElement::from_ints(libm::round(c[0]) as i64, libm::round(c[1]) as i64, libm::round(c[2]) as i64);
        if u.is_rational() {
            continue;
        }
        if eval_cubic(h, &u).is_zero() {
            let mut set = vec![u.clone(), u.sigma(1), u.sigma(2)];
            set.sort();
            return Some(set);
        }
    }
    None
}

/// The three real roots of a cubic with positive discriminant.
fn real_roots_f64(h: &[i128; 3]) -> [f64; 3] {
    let (p0, p1, p2) = (h[0] as f64, h[1] as f64, h[2] as f64);
    let shift = p2 / 3.0;
    let p = p1 - p2 * p2 / 3.0;
    let r = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    let m = 2.0 * libm::sqrt(-p / 3.0);
    // t = m cos(theta) turns t^3 + p t + r into (m^3/4) cos(3 theta) = -r.
    let c3 = if m == 0.0 { 0.0 } else { (-4.0 * r / (m * m * m)).clamp(-1.0, 1.0) };
    let theta = libm::acos(c3) / 3.0;
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut x = m * libm::cos(theta - 2.0 * core::f64::consts::PI * k as f64 / 3.0) - shift;
        for _ in 0..4 {
            let f = ((x + p2) * x + p1) * x + p0;
            let df = (3.0 * x + 2.0 * p2) * x + p1;
            if df == 0.0 {
                break;
            }
            x -= f / df;
        }
        *o = x;
    }
    out
}

/// Solves c0 + c1 w_j + c2 w_j^2 = r_j.
fn solve_vandermonde(w: &[f64], r: &[f64; 3]) -> [f64; 3] {
    let (a, b, c) = (w[0], w[1], w[2]);
    // Lagrange interpolation of the quadratic through (w_j, r_j).
    let mut coeffs = [0.0f64; 3];
    for (j, (&wj, &rj)) in [a, b, c].iter().zip(r.iter()).enumerate() {
        let others: Vec<f64> = [a, b, c].iter().enumerate().filter(|(i, _)| *i != j).map(|(_, &x)| x).collect();
        let den = (wj - others[0]) * (wj - others[1]);
        let s = rj / den;
        coeffs[0] += s * others[0] * others[1];
        coeffs[1] -= s * (others[0] + others[1]);
        coeffs[2] += s;
    }
    coeffs
}

// ---------------------------------------------------------------------------
// Trace sets and signs

/// The set of a_pr(J) for pr above q: one integer (inert) or a sigma_0-orbit of three.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceSet {
    pub q: u64,
    /// Sorted.
    pub elements: Vec<KElement>,
}

impl TraceSet {
    pub fn new(q: u64, mut elements: Vec<KElement>) -> Self {
        elements.sort();
        elements.dedup();
        TraceSet { q, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, u: &KElement) -> bool {
        self.elements.binary_search(u).is_ok()
    }

    /// Elementwise multiplication by +-1.
    pub fn signed(&self, sign: i8) -> TraceSet {
        if sign >= 0 {
            return self.clone();
        }
        TraceSet::new(self.q, self.elements.iter().map(|u| u.neg()).collect())
    }

    /// Cardinality 1 or 3, sigma_0-stability, integrality and the Weil bound.
    pub fn check_invariants(&self) -> Result<()> {
        let q = self.q;
        let bad = |what: &str| Err(Error::Invalid(format!("trace set at {}: {}", q, what)));
        if !self.elements.iter().all(|u| u.is_integral()) {
            return bad("non-integral element");
        }
        match self.elements.len() {
            1 => {
                let u = &self.elements[0];
                if !u.is_rational() {
                    return bad("single element not rational");
                }
                let a = u.int_coords()[0].clone();
                let nq = if residue_degree(q) == 3 { (q as i128).pow(3) } else { q as i128 };
                let a = a.to_i128().ok_or(Error::Integrality { q })?;
                if a * a > 4 * nq {
                    return bad("Weil bound");
                }
            }
            3 => {
                let u = &self.elements[0];
                for k in 1..3 {
                    if !self.contains(&u.sigma(k)) {
                        return bad("not sigma_0-stable");
                    }
                }
                let e1 = u.trace();
                let e2 = u.mul(&u.sigma(1)).trace();
                let e3 = u.norm();
                let to = |r: BigRational| r.to_integer().to_i128().ok_or(Error::Integrality { q });
                let h = [-to(e3)?, to(e2)?, -to(e1)?];
                if !real_roots_in_weil_interval(&h, q) {
                    return bad("Weil bound");
                }
            }
            _ => return bad("cardinality"),
        }
        Ok(())
    }
}

/// +1 if q^f = 1 mod 7, -1 if q^f = -1 mod 7.
pub fn chi7_sign(pr: &PrimeIdealK) -> i8 {
    debug_assert!(pr.q != 7);
    let r = arith::pow_mod(pr.q % 7, pr.f as u64, 7);
    if r == 1 {
        1
    } else {
        -1
    }
}

/// (-1 | q)^f: relates a_pr(J(a,b)) = sign * a_pr(J(b,a)).
pub fn symmetry_sign(pr: &PrimeIdealK) -> i8 {
    if arith::pow_mod(pr.q % 4, pr.f as u64, 4) == 1 {
        1
    } else {
        -1
    }
}

/// Scalar sign relating T_q(lambda x, lambda y) to T_q(x, y): the Legendre symbol (lambda | q).
pub fn scaling_sign(lambda: &BigInt, q: u64) -> i8 {
    let l = reduce_big(lambda, q);
    if l == 0 {
        return 0;
    }
    arith::legendre(l as i64, q) as i8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn e_counts() {
        assert_eq!(count_points_e(&b(1), &b(0), 3).unwrap(), -1);
        assert_eq!(count_points_e(&b(1), &b(-1), 3).unwrap(), -1);
        let a = count_points_e(&b(1), &b(0), 29).unwrap();
        assert!(a * a <= 4 * 29);
        assert!(matches!(count_points_e(&b(1), &b(0), 7), Err(Error::BadReduction { .. })));
        // phi_7(2, 1) = 43
        assert!(matches!(
            count_points_e(&b(2), &b(1), 43),
            Err(Error::BadReduction { kind: BadKind::Multiplicative, .. })
        ));
    }

    #[test]
    fn c7_cm_example() {
        let c = Counter::new(13, 3, DEFAULT_CAP).unwrap();
        let n: Vec<u64> = (1..=3).map(|k| c.points_c7(&b(0), &b(1), k, &NoCache).unwrap()).collect();
        assert_eq!(n, vec![14, 248, 2198]);
        let l = lpoly_from_counts([14, 248, 2198], 13).unwrap();
        assert_eq!(l, LPoly::from_traces(13, [0, 0, 0]));
        let t = c.trace_set(&b(0), &b(1), &NoCache).unwrap();
        assert_eq!(t.elements, vec![KElement::zero()]);
    }

    #[test]
    fn weil_cubic_relations() {
        for a in [[1i128, -3, 5], [0, 0, 0], [7, 7, -2]] {
            let l = LPoly::from_traces(13, a);
            let h = l.weil_cubic();
            let e1 = a[0] + a[1] + a[2];
            let e2 = a[0] * a[1] + a[0] * a[2] + a[1] * a[2];
            let e3 = a[0] * a[1] * a[2];
            assert_eq!(h, [-e3, e2, -e1]);
            assert!(l.satisfies_functional_equation());
            let counts = l.counts(3);
            let back = lpoly_from_counts([counts[0] as u64, counts[1] as u64, counts[2] as u64], 13).unwrap();
            assert_eq!(back, l);
        }
        assert!(!LPoly::from_traces(13, [8, 0, 0]).satisfies_weil());
        assert!(LPoly::from_traces(16, [8, -8, 0]).satisfies_weil());
    }

    #[test]
    fn signs() {
        let p13 = crate::numfield::split_prime(13)[0];
        let p11 = crate::numfield::split_prime(11)[0];
        let p29 = crate::numfield::split_prime(29)[0];
        let p17 = crate::numfield::split_prime(17)[0];
        assert_eq!((chi7_sign(&p13), chi7_sign(&p11), chi7_sign(&p29)), (-1, 1, 1));
        assert_eq!((symmetry_sign(&p13), symmetry_sign(&p11), symmetry_sign(&p17)), (1, -1, 1));
    }

    #[test]
    fn split_trace_set() {
        let t = trace_set(&b(1), &b(1), 13).unwrap();
        t.check_invariants().unwrap();
        let t = trace_set(&b(1), &b(2), 29).unwrap();
        t.check_invariants().unwrap();
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn inert_trace_set() {
        let t = trace_set(&b(1), &b(1), 11).unwrap();
        t.check_invariants().unwrap();
        let n3 = count_points_c7(&b(1), &b(1), 11, 3).unwrap() as i128;
        assert_eq!(t.elements, vec![KElement::from_ints(((1332 - n3) / 3) as i64, 0, 0)]);
    }

    #[test]
    fn f_counts() {
        let pr = crate::numfield::prime_q3();
        for (x, y) in [(1, 0), (0, 1), (1, 1), (-1, -1), (-1, 0), (0, -1)] {
            let a = count_points_f(&b(x), &b(y), &KElement::one(), &pr).unwrap();
            assert_eq!(a.abs(), 4, "({}, {})", x, y);
        }
        for pr in crate::numfield::split_prime(13) {
            let a = count_points_f(&b(1), &b(1), &KElement::omega_i(2), &pr).unwrap();
            assert!(a * a <= 4 * 13);
        }
    }
}
