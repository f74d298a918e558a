//! Finite fields F_{q^k}, k <= 3, for small q.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{add_mod, inv_mod, is_prime, mul_mod, sub_mod};
use crate::error::{Error, Result};

/// Default enumeration cap on q^k.
pub const DEFAULT_CAP: u64 = 2_000_000;

/// Fields below this size carry log/exp multiplication tables.
pub const TABLE_LIMIT: u64 = 4096;

/// An element of F_{q^k}: coordinates c0 + c1 t + c2 t^2 (unused slots are zero).
pub type Fq = [u64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Square {
    Zero,
    Square,
    NonSquare,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// F_q[t]/(m(t)) with m monic irreducible of degree k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqTower {
    pub q: u64,
    pub k: u32,
    /// Monic modulus, constant term first (length k + 1).
    pub modulus: Vec<u64>,
    pub size: u64,
    tables: Option<Tables>,
}

impl FqTower {
    /// F_{q^k} with the smallest monic irreducible modulus, ordered by sum c_i q^i.
    pub fn build(q: u64, k: u32, cap: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if !(1..=3).contains(&k) {
            return Err(Error::Invalid(alloc::format!("extension degree {} not in 1..=3", k)));
        }
        let size = q.checked_pow(k).filter(|&s| s <= cap).ok_or(Error::CapExceeded { q, k, cap })?;
        let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(q, k as usize) };
        Ok(FqTower::assemble(q, k, modulus, size))
    }

    /// F_q[t]/(m) for a given monic modulus of degree k <= 3, checked irreducible.
    pub fn with_modulus(q: u64, modulus: &[u64], cap: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let k = modulus.len() as u32 - 1;
        if !(1..=3).contains(&k) || modulus[k as usize] % q != 1 {
            return Err(Error::NotIrreducible(q));
        }
        let m: Vec<u64> = modulus.iter().map(|c| c % q).collect();
        if k > 1 && (0..q).any(|x| eval_mod(&m, x, q) == 0) {
            return Err(Error::NotIrreducible(q));
        }
        let size = q.checked_pow(k).filter(|&s| s <= cap).ok_or(Error::CapExceeded { q, k, cap })?;
        Ok(FqTower::assemble(q, k, m, size))
    }

    fn assemble(q: u64, k: u32, modulus: Vec<u64>, size: u64) -> Self {
        let mut t = FqTower { q, k, modulus, size, tables: None };
        if size <= TABLE_LIMIT {
            t.tables = Some(t.make_tables());
        }
        t
    }

    fn make_tables(&self) -> Tables {
        let n = self.size as usize;
        let mut g_idx = 1u64;
        loop {
            g_idx += 1;
            if g_idx >= self.size {
                // F_2: the only nonzero element is 1.
                g_idx = 1;
            }
            let g = self.from_index(g_idx);
            let mut exp = Vec::with_capacity(n - 1);
            let mut log = vec![u32::MAX; n];
            let mut x = self.one();
            let mut ok = true;
            for i in 0..(n - 1) {
                let idx = self.index(&x) as usize;
                if log[idx] != u32::MAX {
                    ok = false;
                    break;
                }
                log[idx] = i as u32;
                exp.push(idx as u32);
                x = self.mul_plain(&x, &g);
            }
            if ok {
                return Tables { log, exp };
            }
        }
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn zero(&self) -> Fq {
        [0; 3]
    }

    pub fn one(&self) -> Fq {
        [1, 0, 0]
    }

    pub fn from_int(&self, n: i64) -> Fq {
        [n.rem_euclid(self.q as i64) as u64, 0, 0]
    }

    pub fn from_coords(&self, c: &[u64]) -> Fq {
        let mut out = [0; 3];
        for (o, &x) in out.iter_mut().zip(c.iter().take(self.k as usize)) {
            *o = x % self.q;
        }
        out
    }

    /// Base-q integer encoding of an element, in 0..size.
    pub fn index(&self, x: &Fq) -> u64 {
        x[0] + self.q * (x[1] + self.q * x[2])
    }

    pub fn from_index(&self, mut n: u64) -> Fq {
        let mut out = [0; 3];
        for o in out.iter_mut().take(self.k as usize) {
            *o = n % self.q;
            n /= self.q;
        }
        out
    }

    pub fn is_zero(&self, x: &Fq) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        let q = self.q;
        [add_mod(a[0], b[0], q), add_mod(a[1], b[1], q), add_mod(a[2], b[2], q)]
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let q = self.q;
        [sub_mod(a[0], b[0], q), sub_mod(a[1], b[1], q), sub_mod(a[2], b[2], q)]
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        self.sub(&self.zero(), a)
    }

    pub fn scale(&self, a: &Fq, s: u64) -> Fq {
        let q = self.q;
        [mul_mod(a[0], s, q), mul_mod(a[1], s, q), mul_mod(a[2], s, q)]
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        if let Some(t) = &self.tables {
            let (ia, ib) = (self.index(a) as usize, self.index(b) as usize);
            if ia == 0 || ib == 0 {
                return self.zero();
            }
            let e = (t.log[ia] as u64 + t.log[ib] as u64) % (self.size - 1);
            return self.from_index(t.exp[e as usize] as u64);
        }
        self.mul_plain(a, b)
    }

    /// Schoolbook product with reduction by the modulus.
    pub fn mul_plain(&self, a: &Fq, b: &Fq) -> Fq {
        let q = self.q;
        let k = self.k as usize;
        if k == 1 {
            return [mul_mod(a[0], b[0], q), 0, 0];
        }
        let mut prod = [0u128; 5];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] += a[i] as u128 * b[j] as u128;
            }
        }
        let mut p: [u64; 5] = [0; 5];
        for (o, v) in p.iter_mut().zip(prod.iter()) {
            *o = (*v % q as u128) as u64;
        }
        for top in (k..2 * k - 1).rev() {
            let c = p[top];
            if c == 0 {
                continue;
            }
            p[top] = 0;
            for i in 0..k {
                let s = top - k + i;
                p[s] = sub_mod(p[s], mul_mod(c, self.modulus[i], q), q);
            }
        }
        [p[0], p[1], if k > 2 { p[2] } else { 0 }]
    }

    pub fn square(&self, a: &Fq) -> Fq {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &Fq, mut e: u128) -> Fq {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        if self.k == 1 {
            return inv_mod(a[0], self.q).map(|x| [x, 0, 0]);
        }
        Some(self.pow(a, self.size as u128 - 2))
    }

    pub fn frobenius(&self, a: &Fq) -> Fq {
        self.pow(a, self.q as u128)
    }

    /// Euler criterion x^((q^k - 1)/2).
    pub fn is_square(&self, x: &Fq) -> Result<Square> {
        if self.q == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if self.is_zero(x) {
            return Ok(Square::Zero);
        }
        if let Some(t) = &self.tables {
            let l = t.log[self.index(x) as usize];
            return Ok(if l % 2 == 0 { Square::Square } else { Square::NonSquare });
        }
        let e = self.pow(x, (self.size as u128 - 1) / 2);
        Ok(if e == self.one() { Square::Square } else { Square::NonSquare })
    }

    /// chi(x) for every element, indexed by `index`: 0, 1 or -1.
    pub fn character_table(&self) -> Result<Vec<i8>> {
        if self.q == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let n = self.size as usize;
        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        for x in self.elements() {
            let s = self.square(&x);
            chi[self.index(&s) as usize] = if self.is_zero(&s) { 0 } else { 1 };
        }
        Ok(chi)
    }

    /// All q^k elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }
}

fn eval_mod(p: &[u64], x: u64, q: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
}

fn smallest_irreducible(q: u64, k: usize) -> Vec<u64> {
    let span = q.pow(k as u32);
    for n in 0..span {
        let mut m = Vec::with_capacity(k + 1);
        let mut r = n;
        for _ in 0..k {
            m.push(r % q);
            r /= q;
        }
        m.push(1);
        if m[0] != 0 && (0..q).all(|x| eval_mod(&m, x, q) != 0) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of degree 2 or 3 always exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(FqTower::build(13, 1, DEFAULT_CAP).unwrap().size, 13);
        assert_eq!(FqTower::build(11, 3, DEFAULT_CAP).unwrap().size, 1331);
        assert_eq!(FqTower::build(2, 3, DEFAULT_CAP).unwrap().size, 8);
        assert!(matches!(FqTower::build(101, 3, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn squares() {
        let f13 = FqTower::build(13, 1, DEFAULT_CAP).unwrap();
        assert_eq!(f13.is_square(&f13.one()).unwrap(), Square::Square);
        let f3 = FqTower::build(3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(f3.is_square(&f3.from_int(2)).unwrap(), Square::NonSquare);
        assert_eq!(f3.is_square(&f3.zero()).unwrap(), Square::Zero);
        let f2 = FqTower::build(2, 3, DEFAULT_CAP).unwrap();
        assert_eq!(f2.is_square(&f2.one()), Err(Error::CharacteristicTwo));
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = FqTower::build(5, 3, DEFAULT_CAP).unwrap();
        assert!(f.has_tables());
        for i in (0..f.size).step_by(7) {
            for j in (0..f.size).step_by(11) {
                let (a, b) = (f.from_index(i), f.from_index(j));
                assert_eq!(f.mul(&a, &b), f.mul_plain(&a, &b));
            }
        }
    }

    #[test]
    fn residue_field_of_k() {
        let m: Vec<u64> = crate::numfield::K_POLY.iter().map(|&c| c.rem_euclid(11) as u64).collect();
        let f = FqTower::with_modulus(11, &m, DEFAULT_CAP).unwrap();
        let w = f.from_coords(&[0, 1, 0]);
        let cubic = f.add(&f.add(&f.pow(&w, 3), &f.square(&w)), &f.add(&f.scale(&w, 9), &f.from_int(-1)));
        assert!(f.is_zero(&cubic));
        assert!(FqTower::with_modulus(13, &[12, 11, 1, 1], DEFAULT_CAP).is_err());
    }
}
