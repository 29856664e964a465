"""Slow, independent reference implementations used by the tests.

Nothing here imports the package.  Field elements are integers whose base-p
digits are the coefficients of a polynomial in the generator, reduced by the
monic irreducible with the least lower-coefficient code; G_N elements are
integers whose base-q digits are the coefficients a_0..a_{N-1}; the dual index
of sum_j b_j t^-j is sum_j b_j q^(j-1).
"""
from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np


# -- finite fields ----------------------------------------------------------------------


def _pmod(a, m, p):
    a = list(a)
    while len(a) >= len(m):
        c = a[-1] % p
        if c:
            shift = len(a) - len(m)
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return [x % p for x in a]


def _irreducible(m, p):
    e = len(m) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_pmod(m, list(low) + [1], p)):
                return False
    return True


class OracleField:
    def __init__(self, p: int, e: int = 1):
        self.p, self.e, self.q = p, e, p**e
        if e == 1:
            self.modulus = (0, 1)
        else:
            for code in range(p**e):
                low = [(code // p**i) % p for i in range(e)]
                if low[0] and _irreducible(low + [1], p):
                    self.modulus = tuple(low + [1])
                    break

    def digits(self, a):
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def code(self, digs):
        return sum((d % self.p) * self.p**i for i, d in enumerate(digs))

    def add(self, a, b):
        return self.code([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a):
        return self.code([-x for x in self.digits(a)])

    def mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        if self.e == 1:
            return prod[0] % self.p
        return self.code(_pmod(prod, self.modulus, self.p) + [0] * self.e)

    def power(self, a, n):
        out = 1
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def trace(self, a):
        acc, y = 0, a
        for _ in range(self.e):
            acc = self.add(acc, y)
            y = self.power(y, self.p)
        assert acc < self.p
        return acc

    def inv(self, a):
        for b in range(1, self.q):
            if self.mul(a, b) == 1:
                return b
        raise ZeroDivisionError


# -- groups and transforms ---------------------------------------------------------------


def coeffs_of(idx: int, q: int, N: int) -> list[int]:
    return [(idx // q**i) % q for i in range(N)]


def index_of(coeffs, q: int) -> int:
    return sum(c * q**i for i, c in enumerate(coeffs))


def pairing_table(F: OracleField, N: int) -> np.ndarray:
    """E[xi, x] = Tr(sum_i a_i b_{i+1}) in Z/p, built from a trace-of-product table."""
    q = F.q
    tp = np.array([[F.trace(F.mul(a, b)) for b in range(q)] for a in range(q)], dtype=np.int64)
    idx = np.arange(q**N)
    D = (idx[:, None] // q ** np.arange(N)) % q
    E = np.zeros((q**N, q**N), dtype=np.int64)
    for i in range(N):
        E += tp[D[:, i][:, None], D[:, i][None, :]]
    return E % F.p


def naive_transform(F: OracleField, N: int, values: np.ndarray, table=None) -> np.ndarray:
    """f^(xi) = E_x f(x) e(xi x), straight from the definition."""
    E = pairing_table(F, N) if table is None else table
    W = np.exp(2j * np.pi * E / F.p)
    return W @ np.asarray(values, dtype=complex) / q_pow(F.q, N)


def q_pow(q, N):
    return q**N


def group_add(F: OracleField, N: int, x: int, y: int) -> int:
    a, b = coeffs_of(x, F.q, N), coeffs_of(y, F.q, N)
    return index_of([F.add(u, v) for u, v in zip(a, b)], F.q)


def group_neg(F: OracleField, N: int, x: int) -> int:
    return index_of([F.neg(u) for u in coeffs_of(x, F.q, N)], F.q)


def group_scale(F: OracleField, N: int, lam: int, x: int) -> int:
    return index_of([F.mul(lam, u) for u in coeffs_of(x, F.q, N)], F.q)


def direct_convolution(F: OracleField, N: int, f, g) -> np.ndarray:
    """sum_y f(y) g(x - y) by a double loop."""
    size = F.q**N
    out = np.zeros(size, dtype=complex)
    neg = [group_neg(F, N, y) for y in range(size)]
    for y in range(size):
        if f[y] == 0:
            continue
        for x in range(size):
            out[x] += f[y] * g[group_add(F, N, x, neg[y])]
    return out


def chain_counts(F: OracleField, N: int, sets) -> dict:
    """#{(y_1..y_m) in S_1 x..x S_m : sum = x} as a dict x -> count (direct enumeration)."""
    cur = {0: 1}
    for S in sets:
        nxt: dict = {}
        for x, c in cur.items():
            for y in S:
                z = group_add(F, N, x, int(y))
                nxt[z] = nxt.get(z, 0) + c
        cur = nxt
    return cur


def digit_matrix(q: int, N: int) -> np.ndarray:
    idx = np.arange(q**N)
    return (idx[:, None] // q ** np.arange(N)) % q


def sub_table(F: OracleField, N: int) -> np.ndarray:
    """T[x, y] = x - y, assembled digit by digit from the field's own addition table."""
    q = F.q
    add = np.array([[F.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    neg = np.array([F.neg(a) for a in range(q)], dtype=np.int64)
    D = digit_matrix(q, N)
    T = np.zeros((q**N, q**N), dtype=np.int64)
    for i in range(N):
        T += add[D[:, i][:, None], neg[D[:, i]][None, :]] * q**i
    return T


def table_convolution(T: np.ndarray, f, g) -> np.ndarray:
    """sum_y f(y) g(x - y) using a precomputed subtraction table."""
    f = np.asarray(f)
    g = np.asarray(g)
    return (g[T] * f[None, :]).sum(axis=1)


def span_sums(F: OracleField, N: int, gens) -> tuple[np.ndarray, np.ndarray]:
    """All sums sum eps_i g_i with eps in {-1,0,1}^n, and flags for eps != 0 (vectorized)."""
    q = F.q
    add = np.array([[F.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    neg = np.array([F.neg(a) for a in range(q)], dtype=np.int64)
    digs = np.zeros((1, N), dtype=np.int64)
    nontriv = np.zeros(1, dtype=bool)
    for g in gens:
        gd = np.array(coeffs_of(int(g), q, N), dtype=np.int64)
        plus = add[digs, gd[None, :]]
        minus = add[digs, neg[gd][None, :]]
        digs = np.concatenate([digs, plus, minus])
        nontriv = np.concatenate([nontriv, np.ones(2 * len(nontriv), dtype=bool)])
    return digs @ (q ** np.arange(N)), nontriv


# -- polynomials over prime fields --------------------------------------------------------


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


# -- equations ----------------------------------------------------------------------------


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def zero_sum_partitions(coeffs, p):
    """All set partitions of the indices whose parts have zero coefficient sum."""
    out = []
    for part in set_partitions(range(len(coeffs))):
        if all(not trim(_sum_polys([coeffs[i] for i in blk], p)) for blk in part):
            out.append(part)
    return out


def _sum_polys(polys, p):
    tot = []
    for c in polys:
        tot = poly_add(tot, c, p)
    return tot


def oracle_genus(coeffs, p):
    parts = zero_sum_partitions(coeffs, p)
    if not parts:
        raise ValueError("not translation invariant")
    return max(len(pt) for pt in parts)


def is_trivial(tup, partitions):
    return any(all(len({tup[i] for i in blk}) == 1 for blk in part) for part in partitions)


def solutions(A, coeffs, p, N):
    """Every s-tuple over A with sum c_i x_i = 0 in F_p[t], by full enumeration."""
    polys = {a: trim(coeffs_of(a, p, N)) for a in A}
    out = []
    for tup in itertools.product(sorted(A), repeat=len(coeffs)):
        tot = []
        for c, x in zip(coeffs, tup):
            tot = poly_add(tot, poly_mul(c, polys[x], p), p)
        if not tot:
            out.append(tup)
    return out


def solution_free(A, coeffs, p, N, partitions=None):
    partitions = zero_sum_partitions(coeffs, p) if partitions is None else partitions
    return all(is_trivial(t, partitions) for t in solutions(A, coeffs, p, N))


def max_solution_free_brute(coeffs, p, N):
    """Largest solution-free subset of G_N by scanning subsets in decreasing size."""
    size = p**N
    parts = zero_sum_partitions(coeffs, p)
    for k in range(size, 0, -1):
        for A in itertools.combinations(range(size), k):
            if solution_free(A, coeffs, p, N, parts):
                return k, A
    return 0, ()


# -- Z/NZ ---------------------------------------------------------------------------------


def znz_size(N: int, gammas, rho: float) -> int:
    return sum(1 for x in range(N)
               if all(abs(cmath.exp(2j * math.pi * g * x / N) - 1) < rho for g in gammas))


def znz_regular_oracle(N: int, gammas, rho: float) -> bool:
    """Regularity decided from sizes evaluated just beside every jump and on a fine grid."""
    k = len(gammas)
    if k == 0:
        return True
    lim = 1.0 / (100 * k)
    base = znz_size(N, gammas, rho)
    dist = [max((abs(cmath.exp(2j * math.pi * g * x / N) - 1) for g in gammas), default=0.0)
            for x in range(N)]
    etas = {-lim, lim, 0.0}
    for t in dist:
        e = t / rho - 1
        if -lim <= e <= lim:
            etas.update({e, min(lim, e + 1e-13), max(-lim, e - 1e-13)})
    etas.update(np.linspace(-lim, lim, 401).tolist())
    for eta in etas:
        size = sum(1 for t in dist if t < (1 + eta) * rho)
        factor = 1 + 100 * k * abs(eta)
        if size > factor * base * (1 + 1e-12) or size < base / factor * (1 - 1e-12):
            return False
    return True


def exact_fraction(num: int, den: int) -> Fraction:
    return Fraction(num, den)
