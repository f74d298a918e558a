"""Independent reference values for the frey-core test suite.

Usage: python3 scripts/oracle.py

Point counts are brute force over F_q[x]/(m) with the quadratic character
computed by Euler's criterion; norms are sympy resultants; trace sets are
found by searching O_K for the roots of the real Weil cubic.  The printed
values are frozen into crates/core/tests/oracle.rs.
"""
import itertools
import json

import mpmath
import sympy
from sympy import Poly, ZZ, resultant, symbols

X = symbols("x")
K_POLY = [-1, -2, 1, 1]  # x^3 + x^2 - 2x - 1, constant first


# --- F_q[x]/(m) ------------------------------------------------------------

def irreducible(q, k):
    """Smallest monic irreducible of degree k over F_q (constant first)."""
    if k == 1:
        return [0, 1]
    for tail in itertools.product(range(q), repeat=k):
        m = list(tail) + [1]
        if Poly(list(reversed(m)), X, modulus=q).is_irreducible:
            return m
    raise ValueError


class Field:
    def __init__(self, q, modulus):
        self.q = q
        self.m = modulus
        self.k = len(modulus) - 1
        self.size = q ** self.k

    def elements(self):
        return itertools.product(range(self.q), repeat=self.k)

    def mul(self, a, b):
        q, k = self.q, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % q
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * self.m[i]
            prod[d] = 0
        return tuple(x % q for x in prod[:k])

    def add(self, a, b):
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def const(self, c):
        return tuple([c % self.q] + [0] * (self.k - 1))

    def pow(self, a, e):
        r = self.const(1)
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def chi(self, a):
        if not any(a):
            return 0
        return 1 if self.pow(a, (self.size - 1) // 2) == self.const(1) else -1

    def eval(self, coeffs, x):
        """coeffs are field elements, constant first."""
        acc = self.const(0)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc


def count_odd_model(field, coeffs):
    """#points of y^2 = f(x) with deg f odd: one point at infinity."""
    return 1 + sum(1 + field.chi(field.eval(coeffs, x)) for x in field.elements())


# --- curves ------------------------------------------------------------------

def e_coeffs(a, b):
    a2 = -((a - b) ** 2)
    a4 = -2 * a**4 + a**3 * b - 5 * a**2 * b**2 + a * b**3 - 2 * b**4
    c = [1, -6, 8, -13, 8, -6, 1]
    a6 = sum(c[i] * a ** (6 - i) * b**i for i in range(7))
    return a2, a4, a6


def e_disc(a, b):
    a2, a4, a6 = e_coeffs(a, b)
    b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
    b8 = 4 * a2 * a6 - a4**2
    return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6


def e_trace(a, b, q):
    if e_disc(a, b) % q == 0:
        return None
    f = Field(q, [0, 1])
    a2, a4, a6 = e_coeffs(a, b)
    n = count_odd_model(f, [f.const(a6), f.const(a4), f.const(a2), f.const(1)])
    return q + 1 - n


def c7_coeffs(a, b):
    ab = a * b
    return [b**7 - a**7, 7 * ab**3, 0, 14 * ab**2, 0, 7 * ab, 0, 1]


def c7_count(a, b, q, k):
    f = Field(q, irreducible(q, k))
    return count_odd_model(f, [f.const(c) for c in c7_coeffs(a, b)])


# Elements of K as integer triples in the basis 1, w, w^2.

def k_mul(x, y):
    p = [0] * 5
    for i in range(3):
        for j in range(3):
            p[i + j] += x[i] * y[j]
    # w^3 = 1 + 2w - w^2
    for d in (4, 3):
        c = p[d]
        p[d] = 0
        p[d - 3] += c
        p[d - 2] += 2 * c
        p[d - 1] -= c
    return tuple(p[:3])


def k_add(*xs):
    return tuple(sum(c) for c in zip(*xs))


def k_scale(s, x):
    return tuple(s * c for c in x)


def f_roots(a, b, delta):
    """(delta A, delta B) for y^2 = x(x - delta A)(x + delta B)."""
    w1, w2 = (0, 1, 0), (-2, 0, 1)
    s2 = (a + b) ** 2
    big_a = k_scale(s2, k_add(w2, k_scale(-1, w1)))
    inner = k_add((a * a + b * b, 0, 0), k_scale(a * b, w1))
    big_b = k_mul(k_add((2, 0, 0), k_scale(-1, w2)), inner)
    return k_mul(delta, big_a), k_mul(delta, big_b)


def f_trace_split(a, b, delta, q, root):
    f = Field(q, [0, 1])
    red = lambda x: f.const(x[0] + x[1] * root + x[2] * root * root)
    da, db = f_roots(a, b, delta)
    da, db = red(da), red(db)
    if not any(da) or not any(db) or not any(f.add(da, db)):
        return None
    a2 = f.add(db, tuple((-c) % q for c in da))
    a4 = tuple((-c) % q for c in f.mul(da, db))
    n = count_odd_model(f, [f.const(0), a4, a2, f.const(1)])
    return q + 1 - n


def f_trace_inert(a, b, delta, q):
    m = [c % q for c in K_POLY]
    f = Field(q, m)
    da, db = f_roots(a, b, delta)
    da, db = tuple(c % q for c in da), tuple(c % q for c in db)
    if not any(da) or not any(db) or not any(f.add(da, db)):
        return None
    a2 = f.add(db, tuple((-c) % q for c in da))
    a4 = tuple((-c) % q for c in f.mul(da, db))
    n = count_odd_model(f, [f.const(0), a4, a2, f.const(1)])
    return q**3 + 1 - n


def k_roots_mod(q):
    return sorted(r for r in range(q) if (r**3 + r * r - 2 * r - 1) % q == 0)


def split_primes(q):
    """Roots ordered as index 0 = smallest root, next = 1 - r - r^2."""
    r0 = k_roots_mod(q)[0]
    out = [r0]
    for _ in range(2):
        r = out[-1]
        out.append((1 - r - r * r) % q)
    return out


# --- trace sets ----------------------------------------------------------------

def lpoly_power_sums(q, counts):
    return [q**i + 1 - counts[i - 1] for i in (1, 2, 3)]


def weil_cubic(q, counts):
    s1, s2, s3 = lpoly_power_sums(q, counts)
    # elementary symmetric functions of the six inverse roots
    e1 = s1
    e2 = (e1 * s1 - s2) // 2
    e3 = (e2 * s1 - e1 * s2 + s3) // 3
    # alpha_i + q/alpha_i = t_i: e1 = sum t, e2 = sum t t' + 3q, e3 = t t' t'' + 2q sum t
    t1 = e1
    t2 = e2 - 3 * q
    t3 = e3 - 2 * q * t1
    return t1, t2, t3


def k_conj(x):
    """sigma_0: w -> w^2 - 2."""
    w = (-2, 0, 1)
    return k_add((x[0], 0, 0), k_scale(x[1], w), k_scale(x[2], k_mul(w, w)))


def trace_set_split(a, b, q):
    counts = [c7_count(a, b, q, k) for k in (1, 2, 3)]
    t1, t2, t3 = weil_cubic(q, counts)
    t = sympy.symbols("t")
    h = Poly(t**3 - t1 * t**2 + t2 * t - t3, t)
    if len(set(h.all_roots())) == 1:
        return counts, [(int(h.all_roots()[0]), 0, 0)]
    # numeric roots, then integral coordinates from the three real embeddings
    roots = sorted(float(r) for r in mpmath.polyroots([1, -t1, t2, -t3], maxsteps=200, extraprec=200))
    thetas = sorted(float(r) for r in mpmath.polyroots([1, 1, -2, -1]))
    m = sympy.Matrix([[1, th, th * th] for th in thetas])
    for perm in itertools.permutations(roots):
        sol = m.solve(sympy.Matrix(perm))
        cand = tuple(int(round(float(c))) for c in sol)
        if all(abs(float(c) - r) < 1e-6 for c, r in zip(sol, cand)):
            orbit = {cand, k_conj(cand), k_conj(k_conj(cand))}
            if len(orbit) == 3:
                return counts, sorted(orbit)
    return counts, None


# --- norms ---------------------------------------------------------------------

def nf_norm(field_poly, coords):
    """N(sum c_i x^i) = Res(f, g) for monic f."""
    f = Poly(list(reversed(field_poly)), X, domain=ZZ)
    g = Poly(list(reversed(coords)), X, domain=sympy.QQ)
    return sympy.Rational(resultant(f.as_expr(), g.as_expr(), X))


def unit_gcd_primes(e):
    u1, u2 = [1, 0, -1], [1, 1, 0]
    kx = list(K_POLY)
    def norm_pow_minus_one(u):
        g = Poly(list(reversed(u)), X)
        f = Poly(list(reversed(kx)), X)
        r = (g**e - 1).rem(f)
        return int(resultant(f.as_expr(), r.as_expr(), X))
    n = sympy.gcd(norm_pow_minus_one(u1), norm_pow_minus_one(u2))
    return sorted(p for p in sympy.factorint(abs(int(n))) if p >= 5 and p != 7)


def main():
    out = {}
    pairs_e = [(1, 0), (1, -1), (3, 1), (2, 5), (-3, 7), (11, 4)]
    qs = [3, 5, 11, 13, 17, 19, 23, 29, 31, 37]
    out["e_traces"] = [[a, b, q, e_trace(a, b, q)] for a, b in pairs_e for q in qs]

    out["f_split"] = []
    for delta in [(1, 0, 0), (-7, 0, 0), (0, 0, 1)]:
        for a, b in [(1, 1), (1, 0), (2, 1), (3, -1), (5, 2)]:
            for q in (13, 29, 43):
                for i, r in enumerate(split_primes(q)):
                    out["f_split"].append([list(delta), a, b, q, i, f_trace_split(a, b, delta, q, r)])

    six = [(1, 1), (-1, -1), (1, 0), (-1, 0), (0, 1), (0, -1)]
    out["f_q3"] = [[a, b, f_trace_inert(a, b, (1, 0, 0), 3)] for a, b in six]
    out["f_inert"] = [[a, b, q, f_trace_inert(a, b, (1, 0, 0), q)] for a, b in [(1, 2), (2, 3)] for q in (5, 11)]

    out["c7_counts"] = []
    for a, b, q in [(0, 1, 13), (1, 1, 13), (1, 2, 13), (2, 3, 13), (1, 1, 5), (1, 2, 11), (3, 1, 11)]:
        out["c7_counts"].append([a, b, q, [c7_count(a, b, q, k) for k in (1, 2, 3)]])

    out["trace_sets"] = []
    for a, b, q in [(1, 1, 13), (1, 2, 13), (2, 3, 13), (1, 2, 29), (1, 3, 29)]:
        counts, ts = trace_set_split(a, b, q)
        out["trace_sets"].append([a, b, q, [list(u) for u in ts] if ts else None])

    out["nf_norms"] = []
    for fp, c in [
        ([-2, 0, 1], [3, 5]),
        ([-1, -1, 0, 1], [2, -1, 4]),
        (K_POLY, [7, -3, 2]),
        ([1, 0, 0, 0, 1], [1, 2, 3, 4]),
        ([5, -3, 0, 1, 0, 1], [-2, 0, 1, 0, 6]),
    ]:
        out["nf_norms"].append([fp, c, str(nf_norm(fp, c))])

    out["unit_gcd_primes"] = {e: unit_gcd_primes(e) for e in (12, 42, 84)}
    print(json.dumps(out))


if __name__ == "__main__":
    main()
