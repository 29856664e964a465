"""The additive group G_N = {x in F_q[t] : deg x < N} and its dual.

Elements are addressed by integer index, the little-endian base-q encoding
of the coefficient vector.  Dual frequencies ``b_1 t^-1 + ... + b_N t^-N``
use the same encoding over ``(b_1, ..., b_N)``, so dual addition is the same
operation as group addition.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .field import FieldCtx, field_make
from .errors import TooLarge
from .poly import GPoly, LaurentTail, Poly, ptrim

GROUP_LIMIT = 1 << 24


class PolyGroup:
    def __init__(self, ctx: FieldCtx, N: int):
        if N < 0:
            raise ValueError("N must be non-negative")
        if ctx.q**N > GROUP_LIMIT:
            raise TooLarge(f"|G_N| = {ctx.q}^{N} exceeds {GROUP_LIMIT}")
        self.ctx = ctx
        self.N = N
        self.q = ctx.q
        self.size = ctx.q**N
        self.weights = ctx.q ** np.arange(N, dtype=np.int64)

    def __repr__(self):
        return f"PolyGroup(q={self.q}, N={self.N})"

    def __eq__(self, other):
        return isinstance(other, PolyGroup) and self.ctx == other.ctx and self.N == other.N

    def __hash__(self):
        return hash((self.ctx, self.N))

    @cached_property
    def digits(self) -> np.ndarray:
        """(size, N) coefficient table; row x holds the coefficients of element x."""
        idx = np.arange(self.size, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.q

    def encode(self, digs: np.ndarray) -> np.ndarray:
        return np.asarray(digs, dtype=np.int64) @ self.weights

    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.q

    def add(self, x, y):
        if self.q == 2:
            return np.bitwise_xor(np.asarray(x), np.asarray(y))
        return self.encode(self.ctx.add(self.decode(x), self.decode(y)))

    def neg(self, x):
        if self.q == 2:
            return np.asarray(x)
        return self.encode(self.ctx.neg(self.decode(x)))

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, lam: int, x):
        return self.encode(self.ctx.mul(lam, self.decode(x)))

    @cached_property
    def neg_perm(self) -> np.ndarray:
        return np.asarray(self.neg(np.arange(self.size)))

    def element(self, idx: int) -> GPoly:
        return GPoly.from_index(self.ctx, idx, self.N)

    def index_of(self, a: Poly | GPoly) -> int:
        if isinstance(a, GPoly):
            a = a.poly
        a = ptrim(a)
        if len(a) > self.N:
            raise ValueError(f"degree {len(a) - 1} polynomial is not in G_{self.N}")
        return int(sum(c * self.q**i for i, c in enumerate(a)))

    def poly_of(self, idx: int) -> Poly:
        return ptrim(self.decode(idx).tolist())

    def dual(self, idx: int) -> LaurentTail:
        return LaurentTail.from_dual_index(self.ctx, idx, self.N)

    def mask(self, members) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[np.asarray(list(members), dtype=np.int64)] = True
        return m

    def coupling(self, x) -> np.ndarray:
        """t^-1 coefficient of xi*x for every dual xi (F_q codes), x given by index."""
        a = self.decode(x)
        B = self.digits
        acc = np.zeros(self.size, dtype=np.int64)
        for i in range(self.N):
            if a[i]:
                acc = self.ctx.add(acc, self.ctx.mul(int(a[i]), B[:, i]))
        return acc

    def pairing(self, x) -> np.ndarray:
        """Exponent Tr(coeff_{-1}(xi*x)) in Z/p for every dual xi."""
        return self.ctx.trace(self.coupling(x))

    def pairing_matrix(self) -> np.ndarray:
        """Full (dual, element) exponent table; O(|G|^2) memory."""
        ctx = self.ctx
        X = self.digits
        acc = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.N):
            acc = ctx.add(acc, ctx.mul(X[:, i][:, None], X[:, i][None, :]))
        return ctx.trace(acc)

    def annihilator(self, basis_indices) -> np.ndarray:
        """Mask of duals trivial on the F_q-span of the given elements."""
        m = np.ones(self.size, dtype=bool)
        for v in basis_indices:
            m &= self.coupling(int(v)) == 0
        return m

    def sub_group(self, N: int) -> np.ndarray:
        """Mask of G_N' inside this group (elements of degree < N')."""
        return np.arange(self.size) < self.q ** min(N, self.N)


@lru_cache(maxsize=None)
def make_group(p: int, e: int, N: int) -> PolyGroup:
    return PolyGroup(field_make(p, e), N)


def group_for_q(q: int, N: int) -> PolyGroup:
    p, e = prime_power(q)
    return make_group(p, e, N)


def prime_power(q: int) -> tuple[int, int]:
    from .field import is_prime
    from .errors import NotPrime

    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):  # pragma: no cover
                break
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise NotPrime(f"{q} is not a prime power")
            return p, e
    raise NotPrime(f"{q} is not a prime power")
