"""Bohr sets in G_N, held as explicit F_q-subspaces.

``B_kappa(Gamma) = {x in G_N : deg{x xi} < -kappa(xi) for all xi}``.  The
condition for one xi is that the coefficients of t^-1 .. t^-kappa(xi) in
``x xi`` vanish; the coefficient of t^-j is ``sum_i a_i b_{i+j}``, linear in
the coefficients a_i of x, so B is the null space of a matrix over F_q.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainViolation, PrecisionTooLow, TooLarge, ZeroDilate
from .group import PolyGroup
from .linalg import matvec_zero_mask, nullspace, rref
from .poly import GPoly, LaurentTail, Poly, pdeg, pmul, ptrim, tail_times_poly

ENUMERATION_LIMIT = 1 << 20


class BohrSet:
    def __init__(self, group: PolyGroup, gammas: Sequence[LaurentTail], kappa: Sequence[int]):
        gammas = list(gammas)
        kappa = [int(k) for k in kappa]
        if len(gammas) != len(kappa):
            raise ValueError("one width per frequency")
        if any(k < 1 for k in kappa):
            raise ValueError("widths must be positive")
        self.group = group
        self.gammas = gammas
        self.kappa = kappa
        N = group.N
        rows = []
        for xi, k in zip(gammas, kappa):
            need = N - 1 + k
            if xi.precision < need:
                raise PrecisionTooLow(
                    f"frequency known to t^-{xi.precision}, width {k} on G_{N} needs t^-{need}")
            b = xi.coeffs(need)
            for j in range(1, k + 1):
                rows.append([b[i + j - 1] for i in range(N)])
        M = np.array(rows, dtype=np.int64).reshape(len(rows), N)
        self.conditions, _ = rref(group.ctx, M)
        self.basis = nullspace(group.ctx, M, N)

    @property
    def rank(self) -> int:
        return len(self.gammas)

    @property
    def width(self) -> int:
        return max(self.kappa, default=0)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return self.group.q**self.dim

    @property
    def density(self) -> float:
        """mu_G(B)."""
        return self.size / self.group.size

    @cached_property
    def _mask(self) -> np.ndarray:
        m = matvec_zero_mask(self.group.ctx, self.conditions, self.group.digits)
        m.setflags(write=False)
        return m

    def mask(self) -> np.ndarray:
        return self._mask

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self._mask)

    @cached_property
    def basis_indices(self) -> np.ndarray:
        return self.group.encode(self.basis) if self.dim else np.zeros(0, dtype=np.int64)

    @cached_property
    def annihilator(self) -> np.ndarray:
        """Mask of duals whose character is trivial on B."""
        return self.group.annihilator(self.basis_indices)

    def __contains__(self, x) -> bool:
        return bohr_member(self, x)

    def __repr__(self):
        return (f"BohrSet(q={self.group.q}, N={self.group.N}, rank={self.rank}, "
                f"width={self.width}, size={self.size})")

    def same_set(self, other: BohrSet) -> bool:
        return bool(np.array_equal(self._mask, other._mask))


def _as_kappa(kappa, n: int) -> list[int]:
    if isinstance(kappa, int):
        return [kappa] * n
    return list(kappa)


def bohr_build(gammas: Sequence[LaurentTail], kappa, group: PolyGroup) -> BohrSet:
    """B_kappa(Gamma) in G_N; kappa is an int or one width per frequency."""
    return BohrSet(group, gammas, _as_kappa(kappa, len(gammas)))


def whole_group(group: PolyGroup) -> BohrSet:
    return BohrSet(group, [], [])


def degree_subspace(group: PolyGroup, M: int) -> BohrSet:
    """G_M inside G_N as the Bohr set B_{N-M}({t^-N})."""
    if M >= group.N:
        return whole_group(group)
    xi = LaurentTail(group.ctx, [0] * (group.N - 1) + [1], exact=True)
    return BohrSet(group, [xi], [group.N - M])


def bohr_member(B: BohrSet, x) -> bool:
    idx = x.index if isinstance(x, GPoly) else int(x)
    return bool(B.mask()[idx])


def bohr_member_direct(B: BohrSet, x) -> bool:
    """Membership by evaluating every deg{x xi} condition from the definition."""
    a = x.poly if isinstance(x, GPoly) else B.group.poly_of(int(x))
    for xi, k in zip(B.gammas, B.kappa):
        if any(tail_times_poly(xi, a, k)):
            return False
    return True


def bohr_narrow(B: BohrSet, k: int) -> BohrSet:
    """B_k = B_{kappa + k}(Gamma)."""
    if k < 0:
        raise ValueError("narrowing amount must be >= 0")
    if k == 0:
        return B
    return BohrSet(B.group, B.gammas, [kk + k for kk in B.kappa])


def normalize(B: BohrSet) -> BohrSet:
    """Drop zero frequencies and merge duplicates (keeping the largest width)."""
    N = B.group.N
    kept: list[tuple[LaurentTail, int]] = []
    # (xi, k) is implied by a kept (xi', k') with k' >= k sharing the first N-1+k coefficients
    for xi, k in sorted(zip(B.gammas, B.kappa), key=lambda t: -t[1]):
        key = xi.coeffs(N - 1 + k)
        if not any(key):
            continue
        if any(k2 >= k and xi2.coeffs(N - 1 + k) == key for xi2, k2 in kept):
            continue
        kept.append((xi, k))
    return BohrSet(B.group, [v[0] for v in kept], [v[1] for v in kept])


def _tail_over_poly(xi: LaurentTail, c: Poly) -> LaurentTail:
    """Fractional part of xi / c."""
    ctx = xi.ctx
    if xi.is_rational:
        return LaurentTail.rational(ctx, xi._num, pmul(ctx, xi._den, c))
    if xi.exact:
        b = xi.coeffs(len(xi._coeffs))
        D = len(b)
        num = ptrim([b[D - 1 - i] for i in range(D)])  # sum_j b_j t^{D-j}
        den = tuple([0] * D + [1])
        return LaurentTail.rational(ctx, num, pmul(ctx, den, c))
    # truncated tail: multiply by the series of 1/c, gaining deg c places
    d = pdeg(c)
    inv = LaurentTail.rational(ctx, (1,), c)
    c0inv = int(ctx.inv(c[0])) if d == 0 else 0
    D = int(xi.precision)
    b = xi.coeffs(D)
    u = inv.coeffs(D + d)
    out = []
    for m in range(1, D + d + 1):
        acc = 0
        if d == 0 and m <= D:
            acc = int(ctx.mul(c0inv, b[m - 1]))
        for j in range(1, min(m, D) + 1):
            k = m - j
            if k >= 1 and u[k - 1]:
                acc = int(ctx.add(acc, ctx.mul(b[j - 1], u[k - 1])))
        out.append(acc)
    return LaurentTail(ctx, out, exact=False)


def bohr_dilate(B: BohrSet, c) -> BohrSet:
    """The Bohr set equal to c.B, built from the frequencies c^-1 (Gamma u G_{deg c})."""
    group = B.group
    ctx = group.ctx
    cp = c.poly if isinstance(c, GPoly) else ptrim(c)
    if not cp:
        raise ZeroDilate("dilation by zero")
    d = pdeg(cp)
    N = group.N
    if B.dim and np.any(B.basis[:, max(N - d, 0):] != 0):
        raise DomainViolation(f"B is not contained in G_{N - d}")
    gam = [_tail_over_poly(xi, cp) for xi in B.gammas]
    kap = list(B.kappa)
    for l in itertools.product(range(ctx.q), repeat=d):
        gam.append(LaurentTail.rational(ctx, ptrim(l), cp))
        kap.append(1)
    return BohrSet(group, gam, kap)


def dilate_set(group: PolyGroup, members, c: Poly) -> np.ndarray:
    """Indices of {c x : x in members}; members must stay inside G_N."""
    ctx = group.ctx
    out = []
    for x in members:
        y = pmul(ctx, group.poly_of(int(x)), ptrim(c))
        out.append(group.index_of(y))
    return np.array(sorted(out), dtype=np.int64)


def bohr_enumerate(B: BohrSet, limit: int = ENUMERATION_LIMIT) -> list[GPoly]:
    """All members, generated from the basis and sorted by index."""
    if B.size > limit:
        raise TooLarge(f"|B| = {B.size} exceeds enumeration limit {limit}")
    return [B.group.element(int(i)) for i in span_indices(B)]


def span_indices(B: BohrSet) -> np.ndarray:
    group = B.group
    idx = np.zeros(1, dtype=np.int64)
    for v in B.basis_indices:
        idx = np.concatenate([group.add(idx, group.scale(lam, int(v))) for lam in range(group.q)])
    return np.sort(idx)
