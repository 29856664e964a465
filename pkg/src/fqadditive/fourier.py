"""Characters, Fourier transform and convolutions on G_N.

The character attached to a dual frequency xi is ``x -> e(xi x)`` with
``e(y) = exp(2 pi i Tr(y_{-1}) / p)`` and ``y_{-1}`` the t^-1 coefficient.
Since ``Tr(coeff_{-1}(xi x)) = sum_i Tr(a_i b_{i+1})`` and the trace form on
F_q is a non-degenerate F_p-bilinear form ``a^T M b``, the transform is a
tensor product of eN p-point DFTs followed by the fixed re-indexing
``b -> M b`` in every coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import EmptySet, SupportViolation
from .field import trace_form_matrix
from .group import PolyGroup
from .poly import GPoly, Laurent, LaurentTail


@dataclass(frozen=True, eq=False)
class GroupFn:
    """Dense complex table indexed by G_N (or by the dual of G_N)."""

    values: np.ndarray
    group: PolyGroup
    dual: bool = False

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.group.size,):
            raise ValueError(f"expected {self.group.size} values, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("GroupFn values must be finite")

    @property
    def ambient(self) -> int:
        return self.group.N

    def mean(self) -> complex:
        return complex(np.mean(self.values))


def roots_of_unity(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def char_eval(xi: LaurentTail, x: GPoly) -> complex:
    """e(xi * x), evaluated from the Laurent product directly."""
    ctx = x.ctx
    y = Laurent(ctx, (), xi.coeffs(max(x.N, 1)), exact=False).mul_poly(x.poly)
    k = int(ctx.trace(y.coeff(-1)))
    return complex(roots_of_unity(ctx.p)[k])


@lru_cache(maxsize=None)
def _dual_perm(group: PolyGroup) -> np.ndarray:
    """Map dual index b -> p-digit index of the vector M b (per coordinate)."""
    ctx = group.ctx
    p, e = ctx.p, ctx.e
    M = trace_form_matrix(ctx)
    pw = p ** np.arange(e)
    per_coord = np.array([int(((M @ ctx.digits[b]) % p) @ pw) for b in range(ctx.q)], dtype=np.int64)
    if group.N == 0:
        return np.zeros(1, dtype=np.int64)
    return group.encode(per_coord[group.digits])


def _stage_transform(arr: np.ndarray, p: int, n_digits: int, sign: int) -> np.ndarray:
    roots = roots_of_unity(p)
    jk = np.outer(np.arange(p), np.arange(p)) % p
    W = roots[(sign * jk) % p]
    out = np.asarray(arr, dtype=complex)
    size = out.size
    for d in range(n_digits):
        # digit d has stride p^d in the little-endian index
        left = size // p ** (d + 1)
        right = p**d
        out = np.einsum("ca,lar->lcr", W, out.reshape(left, p, right)).reshape(size)
    return out


def fourier_values(group: PolyGroup, values: np.ndarray) -> np.ndarray:
    """f^(xi) = E_x f(x) e(xi x) for all duals, by the factored transform."""
    ctx = group.ctx
    g = _stage_transform(values, ctx.p, ctx.e * group.N, +1)
    return g[_dual_perm(group)] / group.size


def inverse_values(group: PolyGroup, fhat: np.ndarray) -> np.ndarray:
    """f(x) = sum_xi f^(xi) e(-xi x)."""
    ctx = group.ctx
    tmp = np.empty(group.size, dtype=complex)
    tmp[_dual_perm(group)] = fhat
    return _stage_transform(tmp, ctx.p, ctx.e * group.N, -1)


def naive_fourier_values(group: PolyGroup, values: np.ndarray) -> np.ndarray:
    """O(|G|^2) transform straight from the character table."""
    E = roots_of_unity(group.ctx.p)[group.pairing_matrix()]
    return E @ np.asarray(values, dtype=complex) / group.size


def fourier_forward(f: GroupFn) -> GroupFn:
    return GroupFn(fourier_values(f.group, f.values), f.group, dual=True)


def fourier_inverse(fhat: GroupFn) -> GroupFn:
    return GroupFn(inverse_values(fhat.group, fhat.values), fhat.group, dual=False)


def _as_values(f) -> np.ndarray:
    return f.values if isinstance(f, GroupFn) else np.asarray(f)


def convolve_local(f, g, B) -> GroupFn:
    """(f*g)(x) = E_{y in B} f(y) g(x - y), for B a Bohr set (or mask)."""
    from .bohr import BohrSet

    group = B.group if isinstance(B, BohrSet) else (f.group if isinstance(f, GroupFn) else g.group)
    Bmask = B.mask() if isinstance(B, BohrSet) else np.asarray(B, dtype=bool)
    fv, gv = _as_values(f).astype(complex), _as_values(g).astype(complex)
    if np.any(fv[~Bmask] != 0):
        raise SupportViolation("f is non-zero outside B")
    B_size = int(Bmask.sum())
    prod = fourier_values(group, fv) * fourier_values(group, gv)
    return GroupFn(inverse_values(group, prod) * group.size / B_size, group)


def convolve_with_measure(f, C) -> GroupFn:
    """(f*mu_C)(x) = E_{y in C} f(x - y), a global convolution."""
    fv = _as_values(f).astype(complex)
    group = f.group
    if isinstance(C, (set, frozenset, list, tuple)):
        Cmask = group.mask(c.index if isinstance(c, GPoly) else int(c) for c in C)
    else:
        Cmask = np.asarray(C, dtype=bool)
    n = int(Cmask.sum())
    if n == 0:
        raise EmptySet("measure of the empty set")
    prod = fourier_values(group, fv) * fourier_values(group, Cmask.astype(complex))
    return GroupFn(inverse_values(group, prod) * group.size / n, group)


def convolve_direct(group: PolyGroup, fv: np.ndarray, gv: np.ndarray) -> np.ndarray:
    """sum_y f(y) g(x - y) by direct summation over the support of f."""
    fv = np.asarray(fv)
    gv = np.asarray(gv)
    dtype = np.result_type(fv.dtype, gv.dtype)
    out = np.zeros(group.size, dtype=dtype)
    allx = np.arange(group.size)
    for y in np.flatnonzero(fv):
        out += fv[y] * gv[group.sub(allx, int(y))]
    return out


def conv_counts(group: PolyGroup, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer convolution sum_y a(y) b(x - y) of non-negative integer tables."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    bound = float(a.sum()) * float(b.max(initial=0))
    if bound < 2**40:
        prod = fourier_values(group, a) * fourier_values(group, b)
        raw = inverse_values(group, prod).real * group.size
        out = np.rint(raw)
        if np.max(np.abs(raw - out), initial=0.0) < 0.25:
            return out.astype(np.int64)
    return convolve_direct(group, a.astype(object), b.astype(object))


def conv_chain_counts(group: PolyGroup, masks) -> np.ndarray:
    """#{(y_1, ..., y_m) in S_1 x ... x S_m : y_1 + ... + y_m = x} for every x."""
    masks = list(masks)
    out = np.asarray(masks[0]).astype(np.int64)
    for m in masks[1:]:
        out = conv_counts(group, out, np.asarray(m).astype(np.int64))
    return out
