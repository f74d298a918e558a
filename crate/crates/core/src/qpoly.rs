//! Integer polynomials: squarefree parts, Sturm counts and an exact Weil-interval test.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients, constant term first, no trailing zeros.
pub type ZPoly = Vec<BigInt>;

pub fn trim(p: &mut ZPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Clears denominators of a rational polynomial, keeping the sign of the leading coefficient.
pub fn from_rational(p: &[BigRational]) -> ZPoly {
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: ZPoly = p.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    trim(&mut out);
    primitive(&out)
}

/// Divides by the positive content.
pub fn primitive(p: &[BigInt]) -> ZPoly {
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return p.to_vec();
    }
    p.iter().map(|c| c / &g).collect()
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    let mut out: ZPoly = p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    trim(&mut out);
    out
}

/// Remainder of c a by b, with c a positive power of lc(b) chosen so the division is exact.
fn pos_prem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r: ZPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    if r.len() < b.len() {
        return r;
    }
    let mut e = r.len() - b.len() + 1;
    if e % 2 == 1 {
        e += 1;
    }
    let scale = lb.pow(e as u32);
    for c in r.iter_mut() {
        *c *= &scale;
    }
    while r.len() >= b.len() {
        let shift = r.len() - 1 - db;
        let coef = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &coef * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Greatest common divisor up to a constant, primitive.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = pos_prem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    x
}

/// Exact quotient a / b.
fn div_exact(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut r: ZPoly = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let coef = r.last().unwrap() / lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &coef * bc;
        }
        q[shift] = coef;
        r.pop();
    }
    q
}

/// p / gcd(p, p'), primitive.
pub fn squarefree_part(p: &[BigInt]) -> ZPoly {
    let p = primitive(p);
    if p.len() <= 2 {
        return p;
    }
    let g = gcd(&p, &derivative(&p));
    if g.len() <= 1 {
        return p;
    }
    // Exact over Q; scale p so the quotient is integral.
    let lg = g.last().unwrap().abs();
    let scaled: ZPoly = p.iter().map(|c| c * lg.pow((p.len() - g.len() + 1) as u32)).collect();
    primitive(&div_exact(&scaled, &g))
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Number of distinct real roots.
pub fn count_real_roots(p: &[BigInt]) -> usize {
    let p = squarefree_part(p);
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), derivative(&p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        if seq[n - 1].len() == 1 {
            break;
        }
        let r = pos_prem(&seq[n - 2], &seq[n - 1]);
        let r: ZPoly = primitive(&r).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    let sgn = |c: &BigInt| -> i8 {
        if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_pos = sign_changes(seq.iter().map(|s| sgn(s.last().unwrap())));
    let at_neg = sign_changes(seq.iter().map(|s| {
        let l = sgn(s.last().unwrap());
        if (s.len() - 1) % 2 == 1 {
            -l
        } else {
            l
        }
    }));
    at_neg - at_pos
}

/// Sign of u + v sqrt(n) for n > 0 not necessarily squarefree.
pub fn sign_surd(u: &BigInt, v: &BigInt, n: &BigInt) -> i8 {
    let su = u.signum();
    let sv = v.signum();
    let s = |x: &BigInt| -> i8 {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    };
    if sv.is_zero() || su == sv {
        return s(&su);
    }
    if su.is_zero() {
        return s(&sv);
    }
    let lhs = u * u;
    let rhs = v * v * n;
    match lhs.cmp(&rhs) {
        core::cmp::Ordering::Equal => 0,
        core::cmp::Ordering::Greater => s(&su),
        core::cmp::Ordering::Less => s(&sv),
    }
}

/// Coefficients of p(c sqrt(n) + t) as pairs (u_i, v_i) meaning u_i + v_i sqrt(n).
pub fn shift_by_surd(p: &[BigInt], c: &BigInt, n: &BigInt) -> Vec<(BigInt, BigInt)> {
    // Horner: acc = acc * (t + s) + p_i with s = c sqrt(n).
    let mut acc: Vec<(BigInt, BigInt)> = Vec::new();
    let cn = c * n;
    for pi in p.iter().rev() {
        let mut next = vec![(BigInt::zero(), BigInt::zero()); acc.len() + 1];
        for (i, (u, v)) in acc.iter().enumerate() {
            // times t
            next[i + 1].0 += u;
            next[i + 1].1 += v;
            // times s: (u + v sqrt n) c sqrt n = v c n + u c sqrt n
            next[i].0 += v * &cn;
            next[i].1 += u * c;
        }
        next[0].0 += pi;
        acc = next;
    }
    acc
}

/// Whether every root of p is real and lies in [-2 sqrt(n), 2 sqrt(n)].
pub fn roots_in_weil_interval(p: &[BigInt], n: u64) -> bool {
    let p = squarefree_part(p);
    if p.len() <= 1 {
        return true;
    }
    if count_real_roots(&p) != p.len() - 1 {
        return false;
    }
    let nn = BigInt::from(n);
    let lead_pos = p.last().unwrap().is_positive();
    let orient = |q: ZPoly| -> ZPoly {
        if q.last().unwrap().is_positive() {
            q
        } else {
            q.into_iter().map(|c| -c).collect()
        }
    };
    let p = if lead_pos { p } else { orient(p) };
    let upper = shift_by_surd(&p, &BigInt::from(2), &nn);
    // p(-x) has the negated roots.
    let reflected: ZPoly = orient(p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect());
    let lower = shift_by_surd(&reflected, &BigInt::from(2), &nn);
    upper.iter().chain(lower.iter()).all(|(u, v)| sign_surd(u, v, &nn) >= 0)
}
