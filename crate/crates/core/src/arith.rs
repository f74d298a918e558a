//! Word-size modular arithmetic, primality, trial factoring and CRT helpers.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (m as i128, (a % m) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

/// Reduce a signed integer into [0, m).
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn reduce_big(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64().unwrap()
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with a fixed base set; exact below 3.3e24, probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime(v);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes p with 2 <= p <= n.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = alloc::vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce_i64(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Exact integer cube root, if `n` is a perfect cube.
pub fn exact_cube_root(n: &BigInt) -> Option<BigInt> {
    let r = n.cbrt();
    if &(&r * &r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Result of trial division of a single integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFactors {
    /// Primes found with their exponents (includes a proven-prime remainder above the bound).
    pub primes: Vec<(BigUint, u32)>,
    /// Part left unfactored: 1, or a composite/unknown number with no prime factor below the bound.
    pub cofactor: BigUint,
}

/// Sieved primes reused across many trial divisions.
#[derive(Debug, Clone)]
pub struct Sieve {
    pub bound: u64,
    primes: Vec<u64>,
}

impl Sieve {
    pub fn new(bound: u64) -> Self {
        Sieve { bound, primes: primes_up_to(bound) }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Trial-divide |n| (n != 0) by primes up to the bound.
    ///
    /// Division stops early once p^2 exceeds the remaining part, in which case the
    /// remainder is prime and reported among `primes`.
    pub fn factor(&self, n: &BigUint) -> TrialFactors {
        assert!(!n.is_zero());
        let mut out = Vec::new();
        if let Some(v) = n.to_u64() {
            let (ps, cof) = self.factor_u64(v);
            for (p, e) in ps {
                out.push((BigUint::from(p), e));
            }
            return TrialFactors { primes: out, cofactor: BigUint::from(cof) };
        }
        let mut n = n.clone();
        for &p in &self.primes {
            if let Some(v) = n.to_u64() {
                let (ps, cof) = self.factor_u64_from(v, p);
                for (p, e) in ps {
                    out.push((BigUint::from(p), e));
                }
                return TrialFactors { primes: out, cofactor: BigUint::from(cof) };
            }
            let pb = BigUint::from(p);
            let mut e = 0;
            loop {
                let (q, r) = n.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
            if e > 0 {
                out.push((pb, e));
            }
        }
        let last = BigUint::from(self.primes.last().copied().unwrap_or(1));
        if !n.is_one() && n <= &last * &last {
            out.push((n, 1));
            n = BigUint::one();
        }
        let cofactor = n;
        TrialFactors { primes: out, cofactor }
    }

    fn factor_u64(&self, n: u64) -> (Vec<(u64, u32)>, u64) {
        self.factor_u64_from(n, 2)
    }

    fn factor_u64_from(&self, mut n: u64, start: u64) -> (Vec<(u64, u32)>, u64) {
        let mut out = Vec::new();
        let begin = self.primes.partition_point(|&p| p < start);
        for &p in &self.primes[begin..] {
            if (p as u128) * (p as u128) > n as u128 {
                break;
            }
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        if n == 1 {
            return (out, 1);
        }
        let last = self.primes.last().copied().unwrap_or(1);
        if (last as u128) * (last as u128) >= n as u128 || is_prime(n) {
            out.push((n, 1));
            (out, 1)
        } else {
            (out, n)
        }
    }
}

/// Symmetric residue of r modulo m, in (-m/2, m/2].
pub fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let r = r.mod_floor(m);
    let half: BigInt = m >> 1;
    if r > half {
        r - m
    } else {
        r
    }
}

/// Incremental Chinese remaindering over coprime word-size moduli.
#[derive(Debug, Clone)]
pub struct Crt {
    pub value: BigInt,
    pub modulus: BigInt,
}

impl Default for Crt {
    fn default() -> Self {
        Crt { value: BigInt::zero(), modulus: BigInt::one() }
    }
}

impl Crt {
    pub fn push(&mut self, r: u64, m: u64) {
        let mb = BigInt::from(m);
        let cur = reduce_big(&self.value, m);
        let mm = reduce_big(&self.modulus, m);
        let inv = inv_mod(mm, m).expect("moduli must be coprime");
        let t = mul_mod(sub_mod(r % m, cur, m), inv, m);
        self.value += &self.modulus * BigInt::from(t);
        self.modulus *= mb;
    }

    pub fn symmetric(&self) -> BigInt {
        symmetric(&self.value, &self.modulus)
    }
}

/// Rational reconstruction of a mod m with |num|, den bounded by sqrt(m/2).
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Primes just below 2^62, descending, used as CRT moduli.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 57;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Small deterministic PRNG for randomized algorithms in no_std code.
#[derive(Debug, Clone)]
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// 2-adic and odd-part helpers used by the case analysis.
pub fn v2_i128(n: i128) -> Option<u32> {
    if n == 0 {
        None
    } else {
        Some(n.trailing_zeros())
    }
}

/// Divisibility with the convention that 0 is divisible by everything.
#[inline]
pub fn divides(d: i128, n: i128) -> bool {
    n == 0 || n % d == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, primes_up_to(59));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn inverse_and_crt() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 4), None);
        let mut c = Crt::default();
        c.push(2, 3);
        c.push(3, 5);
        c.push(2, 7);
        assert_eq!(c.value, BigInt::from(23));
        let mut c = Crt::default();
        c.push(reduce_i64(-40, 97), 97);
        c.push(reduce_i64(-40, 101), 101);
        assert_eq!(c.symmetric(), BigInt::from(-40));
    }

    #[test]
    fn reconstruct() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        // -22/7 mod m
        let mut c = Crt::default();
        for p in [1_000_003u64, 998_244_353] {
            let v = mul_mod(reduce_i64(-22, p), inv_mod(7, p).unwrap(), p);
            c.push(v, p);
        }
        assert_eq!(c.modulus, m);
        let (n, d) = rational_reconstruct(&c.value, &m).unwrap();
        assert_eq!((n, d), (BigInt::from(-22), BigInt::from(7)));
    }

    #[test]
    fn trial_division() {
        let s = Sieve::new(1000);
        let f = s.factor(&BigUint::from(2u32 * 2 * 3 * 1009 * 1013));
        assert_eq!(f.cofactor, BigUint::from(1009u32 * 1013));
        let f = s.factor(&BigUint::from(2u32 * 1009));
        assert_eq!(f.cofactor, BigUint::one());
        assert_eq!(f.primes, alloc::vec![(BigUint::from(2u32), 1), (BigUint::from(1009u32), 1)]);
    }

    #[test]
    fn cube_roots() {
        assert_eq!(exact_cube_root(&BigInt::from(-27)), Some(BigInt::from(-3)));
        assert_eq!(exact_cube_root(&BigInt::from(28)), None);
    }
}
