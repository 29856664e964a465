"""Finite fields F_q, q = p^e, as integer-coded lookup tables.

An element of F_q is an integer ``0 <= a < q`` whose base-p digits are the
coefficients (constant term first) of a polynomial over F_p reduced modulo
a fixed irreducible ``modulus`` of degree e.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NotPrime, TooLarge, ZeroDivisor

TABLE_LIMIT = 1 << 16
# full q x q add/mul tables are only materialised up to this size
DENSE_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _fp_polymod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo monic m over F_p (coefficient lists, constant first)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    r = [x % p for x in a[:dm]]
    return r + [0] * (dm - len(r))


def _is_irreducible(m: list[int], p: int) -> bool:
    e = len(m) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            if not any(_fp_polymod(m, divisor, p)[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e over F_p with the least lower-coefficient code.

    The code is ``sum(c_i * p**i for i < e)``; the result is the coefficient
    tuple ``(c_0, ..., c_{e-1}, 1)``.
    """
    for code in range(p**e):
        low = [(code // p**i) % p for i in range(e)]
        m = low + [1]
        if e == 1 or (m[0] != 0 and _is_irreducible(m, p)):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldCtx:
    p: int
    e: int
    modulus: tuple[int, ...]
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)
    add_table: np.ndarray | None = field(repr=False, default=None)
    mul_table: np.ndarray | None = field(repr=False, default=None)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    # vectorised arithmetic on integer codes; accepts scalars or arrays

    def add(self, a, b):
        if self.add_table is not None:
            return self.add_table[a, b]
        a, b = np.asarray(a), np.asarray(b)
        if self.p == 2:
            return a ^ b
        return _encode(self, (self.digits[a] + self.digits[b]) % self.p)

    def neg(self, a):
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg_table[b])

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        a, b = np.asarray(a), np.asarray(b)
        q1 = self.q - 1
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % q1]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisor("0 has no inverse in F_q")
        return self.inv_table[a]

    def trace(self, a):
        return self.trace_table[a]

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p ⊂ F_q."""
        return n % self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.q)


def _encode(ctx: FieldCtx, digs: np.ndarray) -> np.ndarray:
    weights = ctx.p ** np.arange(ctx.e)
    return digs @ weights


def field_make(p: int, e: int = 1, limit: int = TABLE_LIMIT) -> FieldCtx:
    """Build F_{p^e} with the lexicographically least irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**e
    if q > limit:
        raise TooLarge(f"q = {q} exceeds table limit {limit}")
    return _field_cached(p, e)


@lru_cache(maxsize=None)
def _field_cached(p: int, e: int) -> FieldCtx:
    q = p**e
    modulus = least_irreducible(p, e)
    digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(e)

    def mul_poly(a: int, b: int) -> int:
        da, db = digits[a], digits[b]
        prod = [0] * (2 * e - 1)
        for i in range(e):
            if da[i]:
                for j in range(e):
                    prod[i + j] += int(da[i]) * int(db[j])
        r = _fp_polymod(prod, list(modulus), p) if e > 1 else [prod[0] % p]
        return int(np.dot(r, weights))

    # a generator of the multiplicative group gives log/exp tables
    exp_table = np.zeros(max(q - 1, 1), dtype=np.int64)
    log_table = np.zeros(q, dtype=np.int64)
    for g in range(1, q):
        seen = set()
        x = 1
        order = 0
        for k in range(q - 1):
            exp_table[k] = x
            seen.add(x)
            x = mul_poly(x, g)
            order += 1
            if x == 1:
                break
        if order == q - 1 and len(seen) == q - 1:
            break
    else:  # pragma: no cover
        raise AssertionError("no multiplicative generator")
    for k, x in enumerate(exp_table[: q - 1]):
        log_table[x] = k

    neg_table = np.array([int(np.dot((-digits[a]) % p, weights)) for a in range(q)], dtype=np.int64)
    inv_table = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv_table[a] = exp_table[(-log_table[a]) % (q - 1)]

    ctx = FieldCtx(p, e, modulus, exp_table, log_table, digits, neg_table, inv_table,
                   np.zeros(q, dtype=np.int64))
    if q <= DENSE_TABLE_LIMIT:
        a = np.arange(q)
        add_t = ctx.add(a[:, None], a[None, :])
        mul_t = ctx.mul(a[:, None], a[None, :])
        object.__setattr__(ctx, "add_table", add_t)
        object.__setattr__(ctx, "mul_table", mul_t)

    # Tr(x) = x + x^p + ... + x^{p^{e-1}}
    trace = np.zeros(q, dtype=np.int64)
    for a in range(q):
        acc, y = 0, a
        for _ in range(e):
            acc = int(ctx.add(acc, y))
            y = _pow(ctx, y, p)
        if acc >= p:  # pragma: no cover
            raise AssertionError("trace left the prime field")
        trace[a] = acc
    object.__setattr__(ctx, "trace_table", trace)
    return ctx


def _pow(ctx: FieldCtx, a: int, n: int) -> int:
    if a == 0:
        return 0 if n else 1
    return int(ctx.exp_table[(int(ctx.log_table[a]) * n) % (ctx.q - 1)])


def trace_form_matrix(ctx: FieldCtx) -> np.ndarray:
    """Matrix M over F_p with Tr(a*b) = digits(a) @ M @ digits(b) mod p."""
    basis = [ctx.p**i for i in range(ctx.e)]
    return np.array([[int(ctx.trace(ctx.mul(x, y))) for y in basis] for x in basis], dtype=np.int64)
