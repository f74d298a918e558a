//! Exact arithmetic in K = Q(zeta_7)^+ = Q(w), w^3 + w^2 - 2w - 1 = 0, and in Hecke
//! fields given by a monic integral defining polynomial.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, inv_mod, large_primes, mul_mod, reduce_big, Crt, Sieve};
use crate::error::{Error, Result};
use crate::poly::{self, Zp};

/// The defining polynomial X^3 + X^2 - 2X - 1 of K, constant term first.
pub const K_POLY: [i64; 4] = [-1, -2, 1, 1];

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qb(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

// ---------------------------------------------------------------------------
// K

/// c0 + c1 w + c2 w^2 with w = zeta_7 + zeta_7^{-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KElement {
    pub coords: [BigRational; 3],
}

impl fmt::Debug for KElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl PartialOrd for KElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl KElement {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        KElement { coords: [c0, c1, c2] }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        KElement::new(q(c0), q(c1), q(c2))
    }

    pub fn from_bigints(c: [BigInt; 3]) -> Self {
        let [a, b, d] = c;
        KElement::new(qb(a), qb(b), qb(d))
    }

    pub fn rational(r: BigRational) -> Self {
        KElement::new(r, BigRational::zero(), BigRational::zero())
    }

    pub fn zero() -> Self {
        KElement::from_ints(0, 0, 0)
    }

    pub fn one() -> Self {
        KElement::from_ints(1, 0, 0)
    }

    /// w_1 = w.
    pub fn omega() -> Self {
        KElement::from_ints(0, 1, 0)
    }

    /// w_i = zeta^i + zeta^{-i} for i = 1, 2, 3.
    pub fn omega_i(i: usize) -> Self {
        match i {
            1 => KElement::from_ints(0, 1, 0),
            2 => KElement::from_ints(-2, 0, 1),
            3 => KElement::from_ints(1, -1, -1),
            _ => panic!("omega index must be 1, 2 or 3"),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates; panics if not integral.
    pub fn int_coords(&self) -> [BigInt; 3] {
        assert!(self.is_integral(), "element is not integral");
        [self.coords[0].to_integer(), self.coords[1].to_integer(), self.coords[2].to_integer()]
    }

    pub fn add(&self, o: &Self) -> Self {
        KElement::new(&self.coords[0] + &o.coords[0], &self.coords[1] + &o.coords[1], &self.coords[2] + &o.coords[2])
    }

    pub fn sub(&self, o: &Self) -> Self {
        KElement::new(&self.coords[0] - &o.coords[0], &self.coords[1] - &o.coords[1], &self.coords[2] - &o.coords[2])
    }

    pub fn neg(&self) -> Self {
        KElement::new(-&self.coords[0], -&self.coords[1], -&self.coords[2])
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        KElement::new(&self.coords[0] * r, &self.coords[1] * r, &self.coords[2] * r)
    }

    pub fn mul(&self, o: &Self) -> Self {
        k_mul(self, o)
    }

    pub fn square(&self) -> Self {
        k_mul(self, self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = KElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn norm(&self) -> BigRational {
        k_norm(self)
    }

    pub fn trace(&self) -> BigRational {
        // Tr(1) = 3, Tr(w) = -1, Tr(w^2) = 5.
        &self.coords[0] * q(3) - &self.coords[1] + &self.coords[2] * q(5)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let s1 = sigma0(self);
        let s2 = sigma0(&s1);
        let conj = s1.mul(&s2);
        let n = self.mul(&conj);
        debug_assert!(n.is_rational());
        Some(conj.scale(&n.coords[0].recip()))
    }

    /// Apply sigma_0^k.
    pub fn sigma(&self, k: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..(k % 3) {
            x = sigma0(&x);
        }
        x
    }

    /// Value under the real embedding w -> 2cos(2 pi j / 7), j = 1, 2, 3.
    pub fn embed_f64(&self, j: usize) -> f64 {
        let w = real_omega(j);
        let c: [f64; 3] = [
            self.coords[0].to_f64().unwrap_or(f64::NAN),
            self.coords[1].to_f64().unwrap_or(f64::NAN),
            self.coords[2].to_f64().unwrap_or(f64::NAN),
        ];
        c[0] + c[1] * w + c[2] * w * w
    }

    /// Image in F_p under w -> r (for a prime of degree one with root r).
    pub fn reduce_mod(&self, r: u64, p: u64) -> Result<u64> {
        let mut acc = 0u64;
        let mut pw = 1u64;
        for c in &self.coords {
            let num = reduce_big(c.numer(), p);
            let den = reduce_big(c.denom(), p);
            let inv = inv_mod(den, p).ok_or(Error::DenominatorDivisible { p })?;
            acc = arith::add_mod(acc, mul_mod(mul_mod(num, inv, p), pw, p), p);
            pw = mul_mod(pw, r, p);
        }
        Ok(acc)
    }

    /// Coordinates reduced modulo p (for the residue field F_p[X]/(cubic) at an inert p).
    pub fn coords_mod(&self, p: u64) -> Result<[u64; 3]> {
        let mut out = [0u64; 3];
        for (o, c) in out.iter_mut().zip(self.coords.iter()) {
            let num = reduce_big(c.numer(), p);
            let den = reduce_big(c.denom(), p);
            let inv = inv_mod(den, p).ok_or(Error::DenominatorDivisible { p })?;
            *o = mul_mod(num, inv, p);
        }
        Ok(out)
    }
}

pub fn real_omega(j: usize) -> f64 {
    2.0 * libm::cos(2.0 * core::f64::consts::PI * j as f64 / 7.0)
}

/// Product in K, reducing with w^3 = -w^2 + 2w + 1 and w^4 = 3w^2 - w - 1.
pub fn k_mul(x: &KElement, y: &KElement) -> KElement {
    let a = &x.coords;
    let b = &y.coords;
    let p0 = &a[0] * &b[0];
    let p1 = &a[0] * &b[1] + &a[1] * &b[0];
    let p2 = &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0];
    let p3 = &a[1] * &b[2] + &a[2] * &b[1];
    let p4 = &a[2] * &b[2];
    let c0 = p0 + &p3 - &p4;
    let c1 = p1 + &p3 * q(2) - &p4;
    let c2 = p2 - &p3 + &p4 * q(3);
    KElement::new(c0, c1, c2)
}

/// The generator sigma_0: w -> w^2 - 2.
pub fn sigma0(x: &KElement) -> KElement {
    let c = &x.coords;
    KElement::new(&c[0] - &c[1] * q(2) + &c[2] * q(3), -c[2].clone(), &c[1] - &c[2])
}

/// Norm_{K/Q}(x) = x sigma(x) sigma^2(x).
pub fn k_norm(x: &KElement) -> BigRational {
    let s1 = sigma0(x);
    let s2 = sigma0(&s1);
    let n = k_mul(&k_mul(x, &s1), &s2);
    debug_assert!(n.is_rational());
    n.coords[0].clone()
}

/// Fundamental units e1 = 1 - w^2 and e2 = 1 + w.
pub fn units() -> [KElement; 2] {
    [KElement::from_ints(1, 0, -1), KElement::from_ints(1, 1, 0)]
}

/// Uniformizer 2 - w of the prime above 7.
pub fn q7_uniformizer() -> KElement {
    KElement::from_ints(2, -1, 0)
}

/// Primes p >= 5, p != 7 dividing gcd(N(e1^k - 1), N(e2^k - 1)).
pub fn unit_gcd_primes(exponent: u64) -> Result<Vec<u64>> {
    if exponent == 0 {
        return Err(Error::Invalid("exponent must be positive".to_string()));
    }
    let [e1, e2] = units();
    let one = KElement::one();
    let n1 = e1.pow(exponent).sub(&one).norm().to_integer();
    let n2 = e2.pow(exponent).sub(&one).norm().to_integer();
    let g = n1.gcd(&n2);
    if g.is_zero() {
        return Err(Error::Invalid("gcd of unit norms vanishes".to_string()));
    }
    let sieve = Sieve::new(1_000_000);
    let f = sieve.factor(&g.magnitude().clone());
    let mut out: Vec<u64> = Vec::new();
    for (p, _) in f.primes {
        let p = p.to_u64().ok_or_else(|| Error::Invalid("prime factor exceeds 64 bits".to_string()))?;
        if p >= 5 && p != 7 {
            out.push(p);
        }
    }
    if !f.cofactor.is_one() {
        return Err(Error::Invalid("unit gcd has an unfactored cofactor".to_string()));
    }
    out.sort_unstable();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Primes of K

/// A prime of K above q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdealK {
    pub q: u64,
    /// Residue degree: 1 or 3.
    pub f: u8,
    /// Image of w in F_q when f = 1.
    pub root: Option<u64>,
    /// Position in the sigma_0-orbit: index i is sigma_0^i of index 0.
    pub index: u8,
    pub ramified: bool,
}

impl PrimeIdealK {
    pub fn norm(&self) -> u64 {
        self.q.pow(self.f as u32)
    }

    pub fn is_split(&self) -> bool {
        self.f == 1 && !self.ramified
    }

    /// Key used to index eigenvalue tables.
    pub fn key(&self) -> PrimeKey {
        PrimeKey { q: self.q, index: self.index }
    }

    /// sigma_0^k applied to this prime.
    pub fn sigma(&self, k: usize) -> PrimeIdealK {
        if !self.is_split() {
            return *self;
        }
        let all = split_prime(self.q);
        all[(self.index as usize + k) % 3]
    }
}

/// Compact identifier of a prime of K (or of Q, with index 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeKey {
    pub q: u64,
    pub index: u8,
}

/// Factorization of q in K.
///
/// For split q the primes are ordered so that index 0 has the smallest root and
/// index i+1 = sigma_0(index i); sigma_0 sends the prime with root r to the prime
/// with root 1 - r - r^2.
pub fn split_prime(q: u64) -> Vec<PrimeIdealK> {
    assert!(arith::is_prime(q), "{} is not prime", q);
    if q == 7 {
        return vec![PrimeIdealK { q, f: 1, root: Some(2), index: 0, ramified: true }];
    }
    let cubic = poly::from_i64(&K_POLY, q);
    let roots = if q < 1 << 20 {
        poly::roots_small(&cubic, q)
    } else {
        poly::factor_squarefree(&cubic, q)
            .into_iter()
            .filter(|g| g.len() == 2)
            .map(|g| arith::sub_mod(0, g[0], q))
            .collect()
    };
    if roots.is_empty() {
        return vec![PrimeIdealK { q, f: 3, root: None, index: 0, ramified: false }];
    }
    assert_eq!(roots.len(), 3, "cubic has 0 or 3 roots modulo q != 7");
    let r0 = *roots.iter().min().unwrap();
    let next = |r: u64| -> u64 {
        let rr = mul_mod(r, r, q);
        arith::sub_mod(arith::sub_mod(1, r, q), rr, q)
    };
    let r1 = next(r0);
    let r2 = next(r1);
    debug_assert_eq!(next(r2), r0);
    [r0, r1, r2]
        .iter()
        .enumerate()
        .map(|(i, &r)| PrimeIdealK { q, f: 1, root: Some(r), index: i as u8, ramified: false })
        .collect()
}

/// Residue degree of primes above q != 7 without computing roots: the order of q in (Z/7)^*/{+-1}.
pub fn residue_degree(q: u64) -> u8 {
    match q % 7 {
        0 => 1,
        1 | 6 => 1,
        _ => 3,
    }
}

pub fn prime_q2() -> PrimeIdealK {
    split_prime(2)[0]
}

pub fn prime_q3() -> PrimeIdealK {
    split_prime(3)[0]
}

pub fn prime_q7() -> PrimeIdealK {
    split_prime(7)[0]
}

/// Valuation of x at the prime above 7, computed as v_7(N(x)) (the prime has norm 7).
pub fn v_q7(x: &KElement) -> Option<i64> {
    let n = x.norm();
    if n.is_zero() {
        return None;
    }
    let vn = arith::valuation(n.numer(), 7).unwrap() as i64;
    let vd = arith::valuation(n.denom(), 7).unwrap() as i64;
    Some(vn - vd)
}

/// Reduction of an integral element modulo a prime of K, as an element of the residue
/// field represented by coordinates over F_q (length 1 for split, 3 for inert primes).
pub fn reduce_k(x: &KElement, pr: &PrimeIdealK) -> Result<Vec<u64>> {
    if pr.f == 1 {
        Ok(vec![x.reduce_mod(pr.root.unwrap(), pr.q)?])
    } else {
        Ok(x.coords_mod(pr.q)?.to_vec())
    }
}

// ---------------------------------------------------------------------------
// General number fields

/// A number field Q[x]/(f) with f monic and integral.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberFieldSpec {
    /// Coefficients of f, constant term first; the last entry is 1.
    pub poly: Vec<BigInt>,
}

impl fmt::Debug for NumberFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField{:?}", self.poly.iter().map(|c| c.to_string()).collect::<Vec<_>>())
    }
}

impl NumberFieldSpec {
    pub fn new(poly: Vec<BigInt>) -> Result<Arc<Self>> {
        if poly.len() < 2 || !poly.last().unwrap().is_one() {
            return Err(Error::NonMonic);
        }
        Ok(Arc::new(NumberFieldSpec { poly }))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Arc<Self>> {
        NumberFieldSpec::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn rationals() -> Arc<Self> {
        NumberFieldSpec::from_i64(&[0, 1]).unwrap()
    }

    pub fn k() -> Arc<Self> {
        NumberFieldSpec::from_i64(&K_POLY).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn is_k_poly(&self) -> bool {
        self.poly.len() == 4 && self.poly.iter().zip(K_POLY.iter()).all(|(a, &b)| *a == BigInt::from(b))
    }
}

/// Element of a number field in the power basis 1, a, ..., a^{n-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NFElement {
    pub field: Arc<NumberFieldSpec>,
    pub coords: Vec<BigRational>,
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl NFElement {
    pub fn new(field: &Arc<NumberFieldSpec>, mut coords: Vec<BigRational>) -> Self {
        let n = field.degree();
        if coords.len() > n {
            let reduced = reduce_poly(&coords, &field.poly);
            coords = reduced;
        }
        coords.resize(n, BigRational::zero());
        NFElement { field: field.clone(), coords }
    }

    pub fn from_ints(field: &Arc<NumberFieldSpec>, coords: &[i64]) -> Self {
        NFElement::new(field, coords.iter().map(|&c| q(c)).collect())
    }

    pub fn from_rational(field: &Arc<NumberFieldSpec>, r: BigRational) -> Self {
        NFElement::new(field, vec![r])
    }

    pub fn from_int(field: &Arc<NumberFieldSpec>, n: i64) -> Self {
        NFElement::from_rational(field, q(n))
    }

    /// The generator a of the field.
    pub fn generator(field: &Arc<NumberFieldSpec>) -> Self {
        NFElement::new(field, vec![q(0), q(1)])
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let coords = self.coords.iter().zip(o.coords.iter()).map(|(a, b)| a + b).collect();
        NFElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let coords = self.coords.iter().zip(o.coords.iter()).map(|(a, b)| a - b).collect();
        NFElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        NFElement { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        let mut out = self.clone();
        out.coords[0] = &out.coords[0] + r;
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        NFElement { field: self.field.clone(), coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        NFElement::new(&self.field, prod)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = NFElement::from_int(&self.field, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    pub fn norm(&self) -> BigRational {
        nf_norm(self)
    }

    /// Evaluate a polynomial with rational coefficients at this element.
    pub fn eval_poly(&self, coeffs: &[BigRational]) -> Self {
        let mut acc = NFElement::from_int(&self.field, 0);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).add_rational(c);
        }
        acc
    }

    /// Image of u = u0 + u1 w + u2 w^2 under the embedding w -> theta.
    pub fn embed_k(theta: &NFElement, u: &KElement) -> NFElement {
        let t2 = theta.square();
        let mut out = NFElement::from_rational(&theta.field, u.coords[0].clone());
        out = out.add(&theta.scale(&u.coords[1]));
        out.add(&t2.scale(&u.coords[2]))
    }

    /// Common denominator d and integer coordinates of d * self.
    pub fn integral_parts(&self) -> (BigInt, Vec<BigInt>) {
        let mut d = BigInt::one();
        for c in &self.coords {
            d = d.lcm(c.denom());
        }
        let h = self.coords.iter().map(|c| (c * qb(d.clone())).to_integer()).collect();
        (d, h)
    }
}

/// Reduce a polynomial with rational coefficients modulo a monic integral polynomial.
fn reduce_poly(a: &[BigRational], f: &[BigInt]) -> Vec<BigRational> {
    let n = f.len() - 1;
    let mut r: Vec<BigRational> = a.to_vec();
    while r.len() > n {
        let top = r.len() - 1;
        let c = r.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let shift = top - n;
        for (i, fi) in f.iter().enumerate().take(n) {
            if !fi.is_zero() {
                r[shift + i] -= &c * qb(fi.clone());
            }
        }
    }
    r
}

fn bits_f64(x: &BigInt) -> f64 {
    x.bits() as f64
}

/// log2 of an upper bound for the Euclidean norm of a coefficient vector.
fn log2_norm(v: &[BigInt]) -> f64 {
    let m = v.iter().map(bits_f64).fold(0.0f64, f64::max);
    m + 0.5 * libm::log2(v.len() as f64) + 1.0
}

/// Res(f, h) = prod_{f(a)=0} h(a) for monic integral f, exactly via CRT with a Hadamard bound.
pub fn resultant_monic(f: &[BigInt], h: &[BigInt]) -> BigInt {
    let mut h: Vec<BigInt> = h.to_vec();
    while h.last().map_or(false, |c| c.is_zero()) {
        h.pop();
    }
    if h.is_empty() {
        return BigInt::zero();
    }
    let n = f.len() - 1;
    let dh = h.len() - 1;
    let bound_bits = log2_norm(f) * dh as f64 + log2_norm(&h) * n as f64 + 2.0;
    let count = (bound_bits / 61.0) as usize + 2;
    let mut crt = Crt::default();
    for ell in large_primes(count) {
        let fm = poly::from_big(f, ell);
        let hm = poly::from_big(&h, ell);
        let r = if hm.is_empty() { 0 } else { poly::resultant(&fm, &hm, ell) };
        crt.push(r, ell);
    }
    crt.symmetric()
}

/// Norm_{K_g/Q}(x) as Res(f, H) / d^n with x = H(a)/d.
pub fn nf_norm(x: &NFElement) -> BigRational {
    let n = x.degree();
    if n == 1 {
        return x.coords[0].clone();
    }
    let (d, h) = x.integral_parts();
    let r = resultant_monic(&x.field.poly, &h);
    BigRational::new(r, d.pow(n as u32))
}

/// Characteristic polynomial of multiplication by x, monic, constant term first.
pub fn charpoly(x: &NFElement) -> Vec<BigRational> {
    let n = x.degree();
    // chi(t) = prod (t - x_i) = (-1)^n N(x - t); interpolate at t = 0..n.
    let ys: Vec<BigRational> = (0..=n as i64)
        .map(|t| {
            let v = nf_norm(&x.add_rational(&q(-t)));
            if n % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    interpolate(&ys)
}

/// Polynomial through (t, ys[t]) for t = 0..len, via Newton divided differences.
fn interpolate(ys: &[BigRational]) -> Vec<BigRational> {
    let m = ys.len();
    let mut dd: Vec<BigRational> = ys.to_vec();
    for level in 1..m {
        for i in (level..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / q(level as i64);
        }
    }
    // Expand sum dd[k] prod_{j<k} (t - j).
    let mut out = vec![BigRational::zero(); m];
    let mut basis = vec![BigRational::one()];
    for (k, c) in dd.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            out[i] += c * b;
        }
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b;
            next[i] -= b * q(k as i64);
        }
        basis = next;
    }
    while out.len() > 1 && out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Evaluate a polynomial with rational coefficients at a rational point.
pub fn eval_rational(p: &[BigRational], t: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * t + c)
}

// ---------------------------------------------------------------------------
// Embeddings of K into a Hecke field

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingSearch {
    /// Maximum number of place-to-root assignments tried at one prime.
    pub max_assignments: u64,
    /// Largest p-adic precision attempted, in bits.
    pub max_bits: u64,
}

impl Default for EmbeddingSearch {
    fn default() -> Self {
        EmbeddingSearch { max_assignments: 200_000, max_bits: 1 << 15 }
    }
}

/// Outcome of searching for the roots of K's cubic inside a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Embeddings {
    /// The three roots theta, theta^2 - 2, 1 - theta - theta^2 (images of w_1, w_2, w_3).
    Found([NFElement; 3]),
    Absent(AbsenceProof),
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsenceProof {
    /// The degree is not divisible by 3.
    Degree,
    /// At a prime inert in K with f squarefree mod l, some factor has degree prime to 3.
    InertFactor { ell: u64, degree: usize },
    /// At a prime split in K the local degrees cannot be grouped into three equal sums.
    NoPartition { ell: u64 },
}

/// Roots of X^3 + X^2 - 2X - 1 in the field, decided exactly.
///
/// Absence is certified by factor degrees modulo primes; presence by a p-adic
/// reconstruction that is verified by exact evaluation.
pub fn find_k_embeddings(spec: &Arc<NumberFieldSpec>, opts: EmbeddingSearch) -> Embeddings {
    let n = spec.degree();
    if n % 3 != 0 {
        return Embeddings::Absent(AbsenceProof::Degree);
    }
    let mut inert_tries = 0;
    let mut split: Vec<(u64, Vec<usize>, u64)> = Vec::new();
    let mut ell = 7u64;
    while (inert_tries < 24 || split.len() < 8) && ell < 200_000 {
        ell += 1;
        if !arith::is_prime(ell) || ell <= 7 {
            continue;
        }
        let fm = poly::from_big(&spec.poly, ell);
        if !poly::is_squarefree(&fm, ell) {
            continue;
        }
        let degs = poly::factor_degrees(&fm, ell);
        if residue_degree(ell) == 3 {
            if inert_tries < 24 {
                inert_tries += 1;
                if let Some(&d) = degs.iter().find(|&&d| d % 3 != 0) {
                    return Embeddings::Absent(AbsenceProof::InertFactor { ell, degree: d });
                }
            }
        } else if split.len() < 8 {
            let count = count_assignments(&degs, n / 3, opts.max_assignments.saturating_add(1));
            if count == 0 {
                return Embeddings::Absent(AbsenceProof::NoPartition { ell });
            }
            split.push((ell, degs, count));
        }
    }
    split.sort_by_key(|s| (s.2, s.0));
    for (ell, _, count) in split.iter().take(3) {
        if *count > opts.max_assignments {
            continue;
        }
        if let Some(roots) = lift_and_search(spec, *ell, opts) {
            return Embeddings::Found(roots);
        }
    }
    Embeddings::Inconclusive
}

/// Number of ways to split factors into 3 labelled groups of total degree `target`,
/// with factor 0 in group 0; saturates at `cap`.
fn count_assignments(degs: &[usize], target: usize, cap: u64) -> u64 {
    fn rec(degs: &[usize], i: usize, sums: &mut [usize; 3], target: usize, cap: u64, acc: &mut u64) {
        if *acc >= cap {
            return;
        }
        if i == degs.len() {
            if sums.iter().all(|&s| s == target) {
                *acc += 1;
            }
            return;
        }
        let groups: &[usize] = if i == 0 { &[0] } else { &[0, 1, 2] };
        for &g in groups {
            if sums[g] + degs[i] <= target {
                sums[g] += degs[i];
                rec(degs, i + 1, sums, target, cap, acc);
                sums[g] -= degs[i];
            }
        }
    }
    let mut acc = 0;
    rec(degs, 0, &mut [0; 3], target, cap, &mut acc);
    acc
}

fn enumerate_assignments(degs: &[usize], target: usize) -> Vec<Vec<u8>> {
    fn rec(degs: &[usize], i: usize, sums: &mut [usize; 3], cur: &mut Vec<u8>, target: usize, out: &mut Vec<Vec<u8>>) {
        if i == degs.len() {
            if sums.iter().all(|&s| s == target) {
                out.push(cur.clone());
            }
            return;
        }
        let groups: &[u8] = if i == 0 { &[0] } else { &[0, 1, 2] };
        for &g in groups {
            let gi = g as usize;
            if sums[gi] + degs[i] <= target {
                sums[gi] += degs[i];
                cur.push(g);
                rec(degs, i + 1, sums, cur, target, out);
                cur.pop();
                sums[gi] -= degs[i];
            }
        }
    }
    let mut out = Vec::new();
    rec(degs, 0, &mut [0; 3], &mut Vec::new(), target, &mut out);
    out
}

fn lift_and_search(spec: &Arc<NumberFieldSpec>, ell: u64, opts: EmbeddingSearch) -> Option<[NFElement; 3]> {
    let n = spec.degree();
    let fm = poly::from_big(&spec.poly, ell);
    let factors = poly::factor_squarefree(&fm, ell);
    let degs: Vec<usize> = factors.iter().map(|g| g.len() - 1).collect();
    let assignments = enumerate_assignments(&degs, n / 3);
    if assignments.is_empty() {
        return None;
    }
    // Idempotents modulo ell: e_i = 1 mod f_i, 0 mod f_j.
    let mut idem0: Vec<Zp> = Vec::new();
    for (i, fi) in factors.iter().enumerate() {
        let cof = poly::divrem(&fm, fi, ell).0;
        let di = fi.len() - 1;
        let order = BigUint::from(ell).pow(di as u32) - 2u32;
        let inv = poly::powmod(&poly::rem(&cof, fi, ell), &order, fi, ell);
        let e = poly::rem(&poly::mul(&cof, &inv, ell), &fm, ell);
        debug_assert_eq!(poly::rem(&e, fi, ell), alloc::vec![1]);
        let _ = i;
        idem0.push(e);
    }
    let cubic: Vec<BigInt> = K_POLY.iter().map(|&c| BigInt::from(c)).collect();
    let roots0 = poly::roots_small(&poly::from_i64(&K_POLY, ell), ell.min(1 << 20));
    let roots0 = if roots0.len() == 3 {
        roots0
    } else {
        poly::factor_squarefree(&poly::from_i64(&K_POLY, ell), ell)
            .iter()
            .map(|g| arith::sub_mod(0, g[0], ell))
            .collect()
    };
    if roots0.len() != 3 {
        return None;
    }
    let log2_ell = libm::log2(ell as f64);
    let mut bits = 128u64;
    while bits <= opts.max_bits {
        let k = (bits as f64 / log2_ell).ceil() as u32 + 1;
        let m = BigInt::from(ell).pow(k);
        let idem: Vec<Vec<BigInt>> =
            idem0.iter().map(|e| poly::lift_idempotent(&poly::zm_from_zp(e), &spec.poly, ell, &m)).collect();
        let rho: Vec<BigInt> = roots0.iter().map(|&r| poly::lift_root(&cubic, r, ell, &m)).collect();
        for a in &assignments {
            let mut theta = vec![BigInt::zero(); n];
            for (i, &g) in a.iter().enumerate() {
                for (t, c) in theta.iter_mut().zip(idem[i].iter()) {
                    *t += c * &rho[g as usize];
                }
            }
            let mut coords = Vec::with_capacity(n);
            let mut ok = true;
            for t in theta.iter() {
                match arith::rational_reconstruct(&t.mod_floor(&m), &m) {
                    Some((num, den)) => coords.push(BigRational::new(num, den)),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let cand = NFElement::new(spec, coords);
            if is_k_root(&cand) {
                return Some(orbit_canonical(&cand));
            }
        }
        bits *= 2;
    }
    None
}

/// True iff theta^3 + theta^2 - 2 theta - 1 = 0 exactly.
pub fn is_k_root(theta: &NFElement) -> bool {
    let coeffs: Vec<BigRational> = K_POLY.iter().map(|&c| q(c)).collect();
    theta.eval_poly(&coeffs).is_zero()
}

fn root_orbit(theta: &NFElement) -> [NFElement; 3] {
    let t2 = theta.square();
    let s1 = t2.add_rational(&q(-2));
    let s2 = NFElement::from_int(&theta.field, 1).sub(theta).sub(&t2);
    [theta.clone(), s1, s2]
}

fn height(x: &NFElement) -> BigInt {
    x.coords.iter().fold(BigInt::zero(), |acc, c| acc + c.numer().abs() + c.denom() - BigInt::one())
}

/// Order the three roots starting from the one of smallest height.
fn orbit_canonical(theta: &NFElement) -> [NFElement; 3] {
    let orbit = root_orbit(theta);
    let best = (0..3)
        .min_by(|&i, &j| height(&orbit[i]).cmp(&height(&orbit[j])).then_with(|| orbit[i].coords.cmp(&orbit[j].coords)))
        .unwrap();
    root_orbit(&orbit[best])
}

// ---------------------------------------------------------------------------
// Residue maps

/// Reduction map from a Hecke field to F_{p^d} = F_p[x]/(g) for a prime above p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueMap {
    pub p: u64,
    /// Monic irreducible factor of the defining polynomial modulo p.
    pub modulus: Zp,
}

impl ResidueMap {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Image of x, as a reduced coefficient vector over F_p.
    pub fn map(&self, x: &NFElement) -> Result<Zp> {
        let p = self.p;
        let mut v = Vec::with_capacity(x.coords.len());
        for c in &x.coords {
            let num = reduce_big(c.numer(), p);
            let den = reduce_big(c.denom(), p);
            let inv = inv_mod(den, p).ok_or(Error::DenominatorDivisible { p })?;
            v.push(mul_mod(num, inv, p));
        }
        poly::trim(&mut v);
        Ok(poly::rem(&v, &self.modulus, p))
    }

    /// Image of an integer.
    pub fn map_int(&self, n: i64) -> Zp {
        poly::from_i64(&[n], self.p)
    }
}

/// One residue map per prime above p, i.e. per irreducible factor of f modulo p.
pub fn residue_maps_mod_p(spec: &NumberFieldSpec, p: u64) -> Result<Vec<ResidueMap>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let fm = poly::from_big(&spec.poly, p);
    if !poly::is_squarefree(&fm, p) {
        return Err(Error::IndexDivisor { p });
    }
    Ok(poly::factor_squarefree(&fm, p).into_iter().map(|g| ResidueMap { p, modulus: g }).collect())
}
