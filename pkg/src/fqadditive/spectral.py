"""Spectra, symmetry sets, Chang dissection and the spectral density increment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bohr import BohrSet, whole_group
from .errors import InvariantViolation, SpanCheckOverflow, SupportViolation, ZeroFunction
from .fourier import GroupFn, conv_counts, fourier_values
from .group import PolyGroup
from .poly import LaurentTail

# relative slack on threshold comparisons between floating-point quantities
THRESHOLD_RTOL = 1e-12
SPAN_CHECK_LIMIT = 12


@dataclass
class Spectrum:
    group: PolyGroup
    eta: float
    indices: np.ndarray
    magnitudes: np.ndarray
    norm1: float

    def freqs(self) -> list[LaurentTail]:
        return [self.group.dual(int(i)) for i in self.indices]

    def __len__(self):
        return len(self.indices)

    def __contains__(self, idx) -> bool:
        return int(idx) in set(self.indices.tolist())


def _values(f, group: PolyGroup | None):
    if isinstance(f, GroupFn):
        return f.group, np.asarray(f.values, dtype=complex)
    if group is None:
        raise ValueError("a group is required for raw arrays")
    return group, np.asarray(f, dtype=complex)


def spectrum(f, eta: float, group: PolyGroup | None = None) -> Spectrum:
    """Delta_eta(f) = {xi : |f^(xi)| >= eta ||f||_1}, ties included."""
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    group, v = _values(f, group)
    norm1 = float(np.mean(np.abs(v)))
    if norm1 == 0:
        raise ZeroFunction("spectrum of the zero function")
    mags = np.abs(fourier_values(group, v))
    thr = eta * norm1 * (1 - THRESHOLD_RTOL)
    idx = np.flatnonzero(mags >= thr)
    return Spectrum(group, float(eta), idx, mags[idx], norm1)


def _check_subset(mask: np.ndarray, B: BohrSet, name: str) -> None:
    if np.any(mask & ~B.mask()):
        raise SupportViolation(f"{name} is not contained in B")


def local_conv_counts(group: PolyGroup, L: np.ndarray, K: np.ndarray) -> np.ndarray:
    """|B| * (L*K)(x) = #{y : y in L, x - y in K} for every x."""
    return conv_counts(group, L.astype(np.int64), K.astype(np.int64))


def _threshold_count(eta, B_size: int) -> int:
    """Smallest integer count c with c >= eta * |B|."""
    return math.ceil(Fraction(eta) * B_size)


def symmetry_set(L: np.ndarray, K: np.ndarray, eta, B: BohrSet) -> np.ndarray:
    """Sym_eta(L, K) = {x in B : (L*K)(x) >= eta}, as a mask; exact in rational eta."""
    L = np.asarray(L, dtype=bool)
    K = np.asarray(K, dtype=bool)
    _check_subset(L, B, "L")
    _check_subset(K, B, "K")
    counts = local_conv_counts(B.group, L, K)
    return B.mask() & (counts >= _threshold_count(eta, B.size))


def neg_set(group: PolyGroup, S: np.ndarray) -> np.ndarray:
    return np.asarray(S)[group.neg_perm]


def translate_set(group: PolyGroup, S: np.ndarray, x: int) -> np.ndarray:
    """Mask of S + x."""
    allx = np.arange(group.size)
    return np.asarray(S)[group.sub(allx, int(x))]


# -- Chang dissection ---------------------------------------------------------


class _Quotient:
    """Coordinates on the dual of B: xi -> (coeff_{-1}(xi v))_v over a basis v of B."""

    def __init__(self, B: BohrSet):
        group = B.group
        self.key_group = PolyGroup(group.ctx, B.dim)
        key = np.zeros(group.size, dtype=np.int64)
        for k, v in enumerate(B.basis_indices):
            key += group.coupling(int(v)) * group.q**k
        self.key = key

    def neg(self, k):
        return self.key_group.neg(k)


@dataclass
class ChangResult:
    delta_tilde: np.ndarray
    spectrum: Spectrum
    density: float
    bound: float
    within_bound: bool
    cover_keys: np.ndarray = field(repr=False)

    def freqs(self) -> list[LaurentTail]:
        g = self.spectrum.group
        return [g.dual(int(i)) for i in self.delta_tilde]


def chang_dissect(D: np.ndarray, eta: float, group: PolyGroup, B: BohrSet | None = None,
                  C_chang: float = 8.0) -> ChangResult:
    """Greedy dissociated subset of Delta_eta(D) whose {-1,0,1}-span covers it.

    Frequencies are compared through their restriction to B (default: all of
    G_N), so with a proper Bohr set the dissociation and cover statements hold
    in the dual of B.
    """
    D = np.asarray(D, dtype=bool)
    if B is None:
        B = whole_group(group)
    if not D.any():
        raise ZeroFunction("D is empty")
    spec = spectrum(D.astype(float), eta, group)
    quo = _Quotient(B)
    kg = quo.key_group
    cover = np.zeros(kg.size, dtype=bool)
    cover[0] = True
    order = np.lexsort((spec.indices, -spec.magnitudes))
    chosen = []
    all_keys = np.arange(kg.size)
    for i in order:
        xi = int(spec.indices[i])
        k = int(quo.key[xi])
        if cover[k]:
            continue
        chosen.append(xi)
        plus = cover[kg.sub(all_keys, k)]
        minus = cover[kg.add(all_keys, k)]
        cover = cover | plus | minus
    delta = D.sum() / B.size
    bound = C_chang * eta**-2 * max(1.0, math.log(1 / delta))
    return ChangResult(np.array(chosen, dtype=np.int64), spec, float(delta), bound,
                       len(chosen) <= bound, cover)


def span_combinations(group: PolyGroup, gens, B: BohrSet | None = None):
    """Enumerate sum eps_i g_i over eps in {-1,0,1}^n (as F_p values).

    Returns (keys, nontrivial) where keys are the combinations restricted to B
    and nontrivial flags eps != 0.
    """
    gens = [int(g) for g in gens]
    if len(gens) > SPAN_CHECK_LIMIT:
        raise SpanCheckOverflow(f"{len(gens)} generators exceed the span-check limit")
    if B is None:
        B = whole_group(group)
    quo = _Quotient(B)
    kg = quo.key_group
    p = group.ctx.p
    eps_vals = sorted({0, 1, p - 1})
    keys = np.zeros(1, dtype=np.int64)
    nontriv = np.zeros(1, dtype=bool)
    for g in gens:
        k = int(quo.key[g])
        new_keys, new_nt = [], []
        for e in eps_vals:
            new_keys.append(kg.add(keys, kg.scale(e, k)) if e else keys)
            new_nt.append(nontriv | (e != 0))
        keys = np.concatenate(new_keys)
        nontriv = np.concatenate(new_nt)
    return quo, keys, nontriv


def verify_chang(result: ChangResult, B: BohrSet | None = None) -> tuple[bool, bool]:
    """Brute-force (dissociated, covers) check of a dissection by span enumeration."""
    group = result.spectrum.group
    quo, keys, nontriv = span_combinations(group, result.delta_tilde, B)
    dissociated = not np.any((keys == 0) & nontriv)
    spec_keys = set(quo.key[result.spectrum.indices].tolist())
    covers = spec_keys <= set(keys.tolist())
    return dissociated, covers


# -- spectrum -> density increment -------------------------------------------


@dataclass
class IncrementOutcome:
    kind: str  # "HypothesisNotMet" | "Increment"
    alpha: float
    hypothesis_sum: float
    hypothesis_target: float
    B_prime: BohrSet | None = None
    x: int | None = None
    count: int | None = None
    density: float | None = None
    delta_tilde: np.ndarray | None = None

    @property
    def is_increment(self) -> bool:
        return self.kind == "Increment"


def balanced_function(A: np.ndarray, B: BohrSet) -> np.ndarray:
    """A - alpha B."""
    alpha = A.sum() / B.size
    return A.astype(float) - alpha * B.mask().astype(float)


def refine_by(B: BohrSet, duals) -> BohrSet:
    """B' = {x in B : deg{x gamma} < -1 for every listed dual gamma}."""
    group = B.group
    extra = [group.dual(int(g)) for g in duals]
    return BohrSet(group, B.gammas + extra, B.kappa + [1] * len(extra))


def best_translate(A: np.ndarray, Bp: BohrSet, B: BohrSet) -> tuple[int, int]:
    """argmax over x in B of (A*beta')(x) = |A cap (x - B')| / |B'|; returns (x, count)."""
    counts = conv_counts(B.group, A.astype(np.int64), Bp.mask().astype(np.int64))
    masked = np.where(B.mask(), counts, -1)
    x = int(np.argmax(masked))
    return x, int(masked[x])


def increment_from_spectrum(A: np.ndarray, D: np.ndarray, B: BohrSet, eta: float, nu: float,
                            C_chang: float = 8.0) -> IncrementOutcome:
    """Large balanced mass on Delta_eta(D) forces a denser translate in a refined Bohr set."""
    group = B.group
    A = np.asarray(A, dtype=bool)
    D = np.asarray(D, dtype=bool)
    _check_subset(A, B, "A")
    _check_subset(D, B, "D")
    alpha = A.sum() / B.size
    bal_hat = fourier_values(group, balanced_function(A, B))
    spec = spectrum(D.astype(float), eta, group)
    S = float(np.sum(np.abs(bal_hat[spec.indices]) ** 2))
    target = float(nu * alpha**2 * B.density)
    if S < target * (1 - 1e-9):
        return IncrementOutcome("HypothesisNotMet", float(alpha), S, target)
    ch = chang_dissect(D, eta, group, B, C_chang)
    Bp = refine_by(B, ch.delta_tilde)
    x, count = best_translate(A, Bp, B)
    dens = count / Bp.size
    if dens < alpha * (1 + nu) - 1e-9:
        raise InvariantViolation(
            f"increment {dens} below alpha(1+nu) = {alpha * (1 + nu)} despite hypothesis")
    return IncrementOutcome("Increment", float(alpha), S, target, Bp, x, count, dens,
                            ch.delta_tilde)
