//! Dense univariate polynomials over F_p (word-size p) and over Z/MZ for p-adic lifting.
//!
//! Coefficients are stored constant term first and kept trimmed (no trailing zeros).

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{add_mod, inv_mod, mul_mod, pow_mod, reduce_big, sub_mod, XorShift};

pub type Zp = Vec<u64>;

pub fn trim(a: &mut Zp) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Degree, with the zero polynomial reported as `None`.
pub fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn from_big(coeffs: &[BigInt], p: u64) -> Zp {
    let mut v: Zp = coeffs.iter().map(|c| reduce_big(c, p)).collect();
    trim(&mut v);
    v
}

pub fn from_i64(coeffs: &[i64], p: u64) -> Zp {
    let mut v: Zp = coeffs.iter().map(|&c| crate::arith::reduce_i64(c, p)).collect();
    trim(&mut v);
    v
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Zp {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(add_mod(x, y, p));
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Zp {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(sub_mod(x, y, p));
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Zp {
    let mut out: Zp = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Zp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pm = p as u128;
    // Accumulate in u128 and reduce periodically to avoid overflow for 62-bit moduli.
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = acc[i + j] + (x as u128) * (y as u128);
            acc[i + j] = if t >= (1u128 << 126) { t % pm } else { t };
        }
    }
    let mut out: Zp = acc.into_iter().map(|t| (t % pm) as u64).collect();
    trim(&mut out);
    out
}

pub fn monic(a: &[u64], p: u64) -> Zp {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => scale(a, inv_mod(lc, p).expect("p prime"), p),
    }
}

/// Division with remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Zp, Zp) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r: Zp = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = inv_mod(b[db], p).expect("p prime");
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mul_mod(r[dr], inv, p);
        let shift = dr - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bi, p), p);
        }
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Zp {
    divrem(a, b, p).1
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Zp {
    rem(&mul(a, b, p), m, p)
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Zp {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// base^e mod m, with e given as little-endian u64 limbs.
pub fn powmod_limbs(base: &[u64], e: &[u64], m: &[u64], p: u64) -> Zp {
    let mut result: Zp = vec![1];
    result = rem(&result, m, p);
    let mut b = rem(base, m, p);
    for (li, &limb) in e.iter().enumerate() {
        let bits = if li + 1 == e.len() { 64 - limb.leading_zeros() } else { 64 };
        for k in 0..bits {
            if (limb >> k) & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
        }
    }
    result
}

pub fn powmod(base: &[u64], e: &num_bigint::BigUint, m: &[u64], p: u64) -> Zp {
    powmod_limbs(base, &e.to_u64_digits(), m, p)
}

pub fn derivative(a: &[u64], p: u64) -> Zp {
    let mut out: Zp = a.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % p, p)).collect();
    trim(&mut out);
    out
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

pub fn is_squarefree(a: &[u64], p: u64) -> bool {
    let d = derivative(a, p);
    if d.is_empty() {
        return deg(a).map_or(true, |k| k == 0);
    }
    deg(&gcd(a, &d, p)) == Some(0)
}

/// Roots in F_p of a polynomial (by exhaustive evaluation; intended for small p).
pub fn roots_small(a: &[u64], p: u64) -> Vec<u64> {
    (0..p).filter(|&x| eval(a, x, p) == 0).collect()
}

/// Distinct-degree factorization of a monic squarefree polynomial.
/// Returns (degree, product of all irreducible factors of that degree).
pub fn ddf(f: &[u64], p: u64) -> Vec<(usize, Zp)> {
    let mut out = Vec::new();
    let mut f = monic(f, p);
    let mut h: Zp = rem(&[0, 1], &f, p);
    let mut d = 0;
    let pe = [p];
    while deg(&f).unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = powmod_limbs(&h, &pe, &f, p);
        let g = gcd(&f, &sub(&h, &[0, 1], p), p);
        if deg(&g).unwrap_or(0) > 0 {
            out.push((d, g.clone()));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    if deg(&f).unwrap_or(0) > 0 {
        let df = deg(&f).unwrap();
        out.push((df, f));
    }
    out
}

/// Equal-degree splitting (Cantor-Zassenhaus) of a product of irreducibles of degree d.
pub fn edf(f: &[u64], d: usize, p: u64, rng: &mut XorShift) -> Vec<Zp> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![monic(f, p)];
    }
    loop {
        let mut r: Zp = (0..n).map(|_| rng.below(p)).collect();
        trim(&mut r);
        if deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let t = if p == 2 {
            // Absolute trace to F_2 of r in F_{2^d}.
            let mut acc = r.clone();
            let mut pw = r.clone();
            for _ in 1..d {
                pw = mulmod(&pw, &pw, f, p);
                acc = add(&acc, &pw, p);
            }
            acc
        } else {
            let e = (num_bigint::BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            let s = powmod(&r, &e, f, p);
            sub(&s, &[1], p)
        };
        let g = gcd(f, &t, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&h, d, p, rng));
            return out;
        }
    }
}

/// Full factorization of a squarefree polynomial into monic irreducibles, sorted.
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<Zp> {
    let mut rng = XorShift::new(0x9E37_79B9_7F4A_7C15 ^ p);
    let mut out = Vec::new();
    for (d, g) in ddf(f, p) {
        out.extend(edf(&g, d, p, &mut rng));
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())));
    out
}

/// Degrees of the irreducible factors of a squarefree polynomial (no splitting needed).
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (d, g) in ddf(f, p) {
        let k = deg(&g).unwrap() / d;
        out.extend(core::iter::repeat(d).take(k));
    }
    out
}

/// Resultant over F_p using the Euclidean recurrence
/// res(A,B) = (-1)^{deg A deg B} lc(B)^{deg A - deg R} res(B, R), R = A mod B.
pub fn resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut acc = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mul_mod(acc, pow_mod(b[0], da as u64, p), p);
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = sub_mod(0, acc, p);
        }
        acc = mul_mod(acc, pow_mod(b[db], (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Element of F_p[x]/(g) compressed to its coefficient vector (used as a hashable value).
pub fn reduce_into(a: &[u64], g: &[u64], p: u64) -> Zp {
    rem(a, g, p)
}

// ---------------------------------------------------------------------------
// Polynomials over Z/MZ with big modulus, used for p-adic lifting.

pub type Zm = Vec<BigInt>;

fn norm_m(v: &mut Zm, m: &BigInt) {
    for c in v.iter_mut() {
        *c = c.mod_floor(m);
    }
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

pub fn zm_from_zp(a: &[u64]) -> Zm {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Zm {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    norm_m(&mut out, m);
    out
}

/// Remainder modulo a monic polynomial.
pub fn zm_rem_monic(a: &[BigInt], f: &[BigInt], m: &BigInt) -> Zm {
    let df = f.len() - 1;
    let mut r: Zm = a.to_vec();
    norm_m(&mut r, m);
    while r.len() > df {
        let top = r.len() - 1;
        let c = r[top].clone();
        let shift = top - df;
        for (i, fi) in f.iter().enumerate() {
            r[shift + i] -= &c * fi;
        }
        r.pop();
        for x in r.iter_mut().skip(shift) {
            *x = x.mod_floor(m);
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

pub fn zm_mulmod(a: &[BigInt], b: &[BigInt], f: &[BigInt], m: &BigInt) -> Zm {
    zm_rem_monic(&zm_mul(a, b, m), f, m)
}

pub fn zm_lin(terms: &[(&BigInt, &[BigInt])], m: &BigInt) -> Zm {
    let n = terms.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = vec![BigInt::zero(); n];
    for (c, v) in terms {
        for (i, x) in v.iter().enumerate() {
            out[i] += *c * x;
        }
    }
    norm_m(&mut out, m);
    out
}

/// Lift an idempotent of (Z/p)[x]/(f) to (Z/p^k)[x]/(f) via e <- 3e^2 - 2e^3.
pub fn lift_idempotent(e: &[BigInt], f: &[BigInt], p: u64, target: &BigInt) -> Zm {
    let mut m = BigInt::from(p);
    let mut e: Zm = e.to_vec();
    let three = BigInt::from(3);
    let mtwo = BigInt::from(-2);
    loop {
        m = &m * &m;
        if &m > target {
            m = target.clone();
        }
        let e2 = zm_mulmod(&e, &e, f, &m);
        let e3 = zm_mulmod(&e2, &e, f, &m);
        e = zm_lin(&[(&three, &e2), (&mtwo, &e3)], &m);
        if &m == target {
            return e;
        }
    }
}

/// Newton-lift a simple root r of g (integer coefficients) from mod p to mod `target` = p^k.
pub fn lift_root(g: &[BigInt], r: u64, p: u64, target: &BigInt) -> BigInt {
    let dg: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let ev = |poly: &[BigInt], x: &BigInt, m: &BigInt| -> BigInt {
        poly.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    };
    let mut m = BigInt::from(p);
    let mut x = BigInt::from(r);
    loop {
        m = &m * &m;
        if &m > target {
            m = target.clone();
        }
        let fx = ev(g, &x, &m);
        let dfx = ev(&dg, &x, &m);
        let inv = big_inv_mod(&dfx, &m).expect("simple root");
        x = (&x - fx * inv).mod_floor(&m);
        if &m == target {
            return x;
        }
    }
}

pub fn big_inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let p = 13;
        let a = from_i64(&[5, -3, 0, 2, 7, 1], p);
        let b = from_i64(&[1, 2, 3], p);
        let (q, r) = divrem(&a, &b, p);
        assert_eq!(add(&mul(&q, &b, p), &r, p), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn cubic_factorization() {
        let f = from_i64(&[-1, -2, 1, 1], 13);
        let fs = factor_squarefree(&f, 13);
        let roots: Vec<u64> = fs.iter().map(|g| (13 - g[0]) % 13).collect();
        assert_eq!(fs.len(), 3);
        let mut r = roots.clone();
        r.sort();
        assert_eq!(r, vec![7, 8, 10]);
        let f11 = from_i64(&[-1, -2, 1, 1], 11);
        assert_eq!(factor_degrees(&f11, 11), vec![3]);
        assert_eq!(factor_squarefree(&f11, 11).len(), 1);
    }

    #[test]
    fn factor_mod_two_and_large() {
        // x^4 + x + 1 is irreducible over F_2; (x^2+x+1)(x^3+x+1) splits as degrees 2,3.
        let f = from_i64(&[1, 1, 0, 0, 1], 2);
        assert_eq!(factor_squarefree(&f, 2).len(), 1);
        let g = mul(&from_i64(&[1, 1, 1], 2), &from_i64(&[1, 1, 0, 1], 2), 2);
        let fs = factor_squarefree(&g, 2);
        assert_eq!(fs.iter().map(|h| h.len() - 1).collect::<Vec<_>>(), vec![2, 3]);
        // Split x^2 - 2 modulo a 62-bit prime congruent to +-1 mod 8.
        let p = crate::arith::large_primes(8).into_iter().find(|&p| p % 8 == 1 || p % 8 == 7).unwrap();
        let fs = factor_squarefree(&from_i64(&[-2, 0, 1], p), p);
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn resultant_small() {
        // res(x^2 - 2, x + 3) = (-3)^2 - 2 = 7 (monic first argument: prod of g over roots of f).
        let p = 101;
        assert_eq!(resultant(&from_i64(&[-2, 0, 1], p), &from_i64(&[3, 1], p), p), 7);
        // res(x^2 - 2, x) = -2
        assert_eq!(resultant(&from_i64(&[-2, 0, 1], p), &from_i64(&[0, 1], p), p), 99);
    }

    #[test]
    fn lifting() {
        let p = 13u64;
        let target = BigInt::from(p).pow(20);
        let g: Vec<BigInt> = [-1, -2, 1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let r = lift_root(&g, 7, p, &target);
        let v = g.iter().rev().fold(BigInt::zero(), |acc, c| (acc * &r + c).mod_floor(&target));
        assert!(v.is_zero());
    }
}
