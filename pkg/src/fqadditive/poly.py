"""Polynomials in F_q[t] and truncated Laurent series in F_q((1/t)).

Plain polynomials are tuples of F_q codes, constant term first, with no
trailing zeros (the zero polynomial is ``()``).  ``GPoly`` pins a polynomial
to an ambient group G_N; ``LaurentTail`` holds a fractional part
``sum_{i<0} a_i t^i`` either as a finite coefficient list or as an exact
rational ``num/den`` expanded on demand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import PrecisionTooLow, ZeroDivisor
from .field import FieldCtx

Poly = tuple


def ptrim(a: Sequence[int]) -> Poly:
    a = [int(x) for x in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def pdeg(a: Poly) -> int:
    """Degree, with deg 0 = -1 for the zero polynomial."""
    return len(ptrim(a)) - 1


def padd(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return ptrim(int(ctx.add(x, y)) for x, y in zip(a, b))


def pneg(ctx: FieldCtx, a: Poly) -> Poly:
    return ptrim(int(ctx.neg(x)) for x in a)


def psub(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    return padd(ctx, a, pneg(ctx, b))


def pscale(ctx: FieldCtx, lam: int, a: Poly) -> Poly:
    return ptrim(int(ctx.mul(lam, x)) for x in a)


def pmul(ctx: FieldCtx, a: Poly, b: Poly) -> Poly:
    a, b = ptrim(a), ptrim(b)
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = int(ctx.add(out[i + j], ctx.mul(x, y)))
    return ptrim(out)


def pdivmod(ctx: FieldCtx, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    a, b = list(ptrim(a)), ptrim(b)
    if not b:
        raise ZeroDivisor("division by the zero polynomial")
    db = len(b) - 1
    lead_inv = int(ctx.inv(b[-1]))
    if len(a) <= db:
        return (), tuple(a)
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = int(ctx.mul(c, lead_inv))
        quot[i - db] = f
        for j in range(db + 1):
            a[i - db + j] = int(ctx.sub(a[i - db + j], ctx.mul(f, b[j])))
    return ptrim(quot), ptrim(a[:db])


def pconst(ctx: FieldCtx, c: int) -> Poly:
    return ptrim([c % ctx.q])


def from_int_coeffs(ctx: FieldCtx, coeffs: Sequence[int]) -> Poly:
    """Polynomial whose integer coefficients are reduced into the prime field."""
    return ptrim(ctx.from_int(int(c)) for c in coeffs)


def poly_str(a: Poly) -> str:
    a = ptrim(a)
    if not a:
        return "0"
    terms = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(reversed(terms))


@dataclass(frozen=True)
class GPoly:
    """An element of G_N: a length-N coefficient vector."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= c < self.ctx.q for c in self.coeffs):
            raise ValueError("coefficient outside F_q")

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def deg(self) -> int:
        return pdeg(self.coeffs)

    @property
    def poly(self) -> Poly:
        return ptrim(self.coeffs)

    @classmethod
    def from_poly(cls, ctx: FieldCtx, a: Sequence[int], N: int) -> GPoly:
        a = ptrim(a)
        if len(a) > N:
            raise ValueError(f"degree {len(a) - 1} does not fit in G_{N}")
        return cls(ctx, tuple(a) + (0,) * (N - len(a)))

    @classmethod
    def from_index(cls, ctx: FieldCtx, idx: int, N: int) -> GPoly:
        q = ctx.q
        return cls(ctx, tuple((int(idx) // q**i) % q for i in range(N)))

    @property
    def index(self) -> int:
        q = self.ctx.q
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    def __str__(self):
        return poly_str(self.coeffs)


def poly_mul(a: GPoly, b: GPoly) -> GPoly:
    """Schoolbook product; the result lives in G_{deg a + deg b + 1}."""
    if a.ctx != b.ctx:
        raise ValueError("polynomials over different fields")
    prod = pmul(a.ctx, a.poly, b.poly)
    N = max(a.deg + b.deg + 1, 1) if prod else 1
    return GPoly.from_poly(a.ctx, prod, N)


class LaurentTail:
    """Fractional part ``sum_{j>=1} b_j t^{-j}`` of a Laurent series.

    Either a finite list of known coefficients (``exact`` says whether all
    further coefficients are zero) or an exact rational ``num/den`` whose
    expansion is produced lazily to any depth.
    """

    def __init__(self, ctx: FieldCtx, coeffs: Sequence[int] = (), exact: bool = False,
                 *, _num: Poly | None = None, _den: Poly | None = None):
        self.ctx = ctx
        self._coeffs = [int(c) for c in coeffs]
        self.exact = exact
        self._num = _num
        self._den = _den
        self._rem = _num  # long-division state for rational tails

    @classmethod
    def rational(cls, ctx: FieldCtx, num: Poly, den: Poly) -> LaurentTail:
        """Fractional part of num/den."""
        den = ptrim(den)
        if not den:
            raise ZeroDivisor("zero denominator")
        _, r = pdivmod(ctx, num, den)
        return cls(ctx, (), True, _num=r, _den=den)

    @classmethod
    def from_dual_index(cls, ctx: FieldCtx, idx: int, N: int) -> LaurentTail:
        q = ctx.q
        return cls(ctx, [(int(idx) // q**i) % q for i in range(N)], exact=True)

    @property
    def is_rational(self) -> bool:
        return self._den is not None

    @property
    def precision(self) -> float:
        if self.exact:
            return math.inf
        return len(self._coeffs)

    def _extend(self, D: int) -> None:
        ctx, den = self.ctx, self._den
        dd = len(den) - 1
        lead_inv = int(ctx.inv(den[-1]))
        r = list(self._rem)
        while len(self._coeffs) < D:
            # multiply remainder by t and peel off the t^dd coefficient
            r = [0] + r
            r = r + [0] * (dd + 1 - len(r))
            c = int(ctx.mul(r[dd], lead_inv)) if len(r) > dd else 0
            self._coeffs.append(c)
            if c:
                for j in range(dd + 1):
                    r[j] = int(ctx.sub(r[j], ctx.mul(c, den[j])))
            r = list(ptrim(r[:dd]))
        self._rem = tuple(r)

    def coeffs(self, D: int) -> tuple[int, ...]:
        """The first D coefficients (of t^-1 .. t^-D)."""
        if self._den is not None:
            if len(self._coeffs) < D:
                self._extend(D)
            return tuple(self._coeffs[:D])
        if D <= len(self._coeffs):
            return tuple(self._coeffs[:D])
        if self.exact:
            return tuple(self._coeffs) + (0,) * (D - len(self._coeffs))
        raise PrecisionTooLow(f"tail known to t^-{len(self._coeffs)}, need t^-{D}")

    def truncate(self, D: int) -> LaurentTail:
        return LaurentTail(self.ctx, self.coeffs(D), exact=False)

    def dual_index(self, N: int) -> int:
        """Index of the character this tail induces on G_N."""
        q = self.ctx.q
        return sum(c * q**i for i, c in enumerate(self.coeffs(N)))

    def degree(self, D: int) -> int:
        """deg of the tail, or -(D+1) if the first D coefficients vanish."""
        for j, c in enumerate(self.coeffs(D), start=1):
            if c:
                return -j
        return -(D + 1)

    def __repr__(self):
        if self._den is not None:
            return f"LaurentTail({poly_str(self._num)} / {poly_str(self._den)})"
        return f"LaurentTail({self._coeffs}, exact={self.exact})"


DualFreq = LaurentTail


@dataclass
class Laurent:
    """A truncated Laurent series: integer part plus a tail of known depth."""

    ctx: FieldCtx
    pos: Poly
    neg: tuple[int, ...] = ()
    exact: bool = False
    _meta: dict = field(default_factory=dict, repr=False)

    @property
    def precision(self) -> float:
        return math.inf if self.exact else len(self.neg)

    def coeff(self, i: int) -> int:
        if i >= 0:
            return self.pos[i] if i < len(self.pos) else 0
        j = -i
        if j <= len(self.neg):
            return self.neg[j - 1]
        if self.exact:
            return 0
        raise PrecisionTooLow(f"coefficient of t^{i} unknown")

    @property
    def degree(self) -> int:
        if ptrim(self.pos):
            return pdeg(self.pos)
        for j, c in enumerate(self.neg, start=1):
            if c:
                return -j
        return -math.inf if self.exact else -(len(self.neg) + 1)

    def mul_poly(self, a: Poly) -> Laurent:
        """Product with a polynomial; loses deg(a) places of precision."""
        ctx = self.ctx
        a = ptrim(a)
        if not a:
            return Laurent(ctx, (), (), True)
        da = len(a) - 1
        lo = -len(self.neg)
        hi = len(self.pos) - 1
        out: dict[int, int] = {}
        for i in range(lo, hi + 1):
            x = self.coeff(i)
            if x == 0:
                continue
            for k, y in enumerate(a):
                if y:
                    out[i + k] = int(ctx.add(out.get(i + k, 0), ctx.mul(x, y)))
        D = len(self.neg) if self.exact else len(self.neg) - da
        D = max(D, 0)
        pos = ptrim([out.get(i, 0) for i in range(max(hi + da + 1, 0))])
        neg = tuple(out.get(-j, 0) for j in range(1, D + 1))
        return Laurent(ctx, pos, neg, self.exact)


def laurent_inverse(c: GPoly | Poly, D: int, ctx: FieldCtx | None = None) -> Laurent:
    """1/c as a Laurent series known down to t^-D."""
    if isinstance(c, GPoly):
        ctx, cp = c.ctx, c.poly
    else:
        cp = ptrim(c)
    if not cp:
        raise ZeroDivisor("cannot invert the zero polynomial")
    intpart, _ = pdivmod(ctx, (1,), cp)
    tail = LaurentTail.rational(ctx, (1,), cp)
    return Laurent(ctx, intpart, tail.coeffs(D), exact=False)


def frac_part(x: Laurent, D: int) -> LaurentTail:
    """Strip the non-negative-degree part, keeping D tail coefficients."""
    return LaurentTail(x.ctx, tuple(x.coeff(-j) for j in range(1, D + 1)), exact=False)


def tail_times_poly(xi: LaurentTail, a: Poly, D: int) -> tuple[int, ...]:
    """First D coefficients of the fractional part of xi * a.

    Coefficient of t^-j in xi*a is sum_i a_i b_{i+j}, so this needs
    deg(a) + D coefficients of xi.
    """
    ctx = xi.ctx
    a = ptrim(a)
    b = xi.coeffs(len(a) + D)
    out = []
    for j in range(1, D + 1):
        acc = 0
        for i, ai in enumerate(a):
            if ai:
                acc = int(ctx.add(acc, ctx.mul(ai, b[i + j - 1])))
        out.append(acc)
    return tuple(out)
