"""Almost-periodicity translate sets and the resulting density increment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bohr import BohrSet
from ..errors import DegenerateDensity, InvariantViolation
from ..fourier import conv_chain_counts, fourier_values, inverse_values
from ..spectral import balanced_function, increment_from_spectrum
from .tuning import TuningConstants

NORM_RTOL = 1e-12
CHUNK_ELEMENTS = 1 << 22


def measure_transform(group, mask: np.ndarray) -> np.ndarray:
    """E_{y in T} e(xi y) for every dual xi."""
    n = int(np.asarray(mask).sum())
    if n == 0:
        raise DegenerateDensity("measure of the empty set")
    return fourier_values(group, np.asarray(mask, dtype=float)) * group.size / n


def convolve_measures(group, f: np.ndarray, masks) -> np.ndarray:
    """f * mu_{S_1} * ... * mu_{S_m} with global measure convolutions."""
    fh = fourier_values(group, np.asarray(f, dtype=complex))
    for m in masks:
        fh = fh * measure_transform(group, m)
    return inverse_values(group, fh).real


def p_norm_on(values: np.ndarray, B: BohrSet, p: float) -> float:
    """||h||_{p(beta)} = (E_{x in B} |h(x)|^p)^(1/p)."""
    v = np.abs(np.asarray(values)[B.indices])
    return float(np.mean(v**p) ** (1.0 / p))


def translation_errors(F: np.ndarray, B: BohrSet, p: float, shifts=None,
                       target: np.ndarray | None = None) -> np.ndarray:
    """||tau_t F - target||_{p(beta)} for each shift t (default: every t in B, target F)."""
    group = B.group
    Bidx = B.indices
    shifts = Bidx if shifts is None else np.asarray(shifts, dtype=np.int64)
    FB = (F if target is None else target)[Bidx]
    out = np.empty(len(shifts))
    chunk = max(1, CHUNK_ELEMENTS // max(1, len(Bidx) * max(1, group.N)))
    for start in range(0, len(shifts), chunk):
        t = shifts[start:start + chunk]
        idx = group.sub(Bidx[None, :], t[:, None])
        diff = np.abs(F[idx] - FB[None, :])
        out[start:start + len(t)] = np.mean(diff**p, axis=1) ** (1.0 / p)
    return out


@dataclass
class TranslateSet:
    T: np.ndarray
    errors: np.ndarray = field(repr=False)
    bound: float
    eps: float
    p: float
    sigma: float
    density: float
    floor: float
    meets_floor: bool
    method: str = "exhaustive"

    @property
    def size(self) -> int:
        return int(self.T.sum())


def cs_translates(f, S, eps: float, p: float, B: BohrSet, C: float = 1.0) -> TranslateSet:
    """T = {t in B : ||tau_t(f*mu_S) - f*mu_S||_p(beta) <= eps ||f||_p(beta)}, exhaustively."""
    group = B.group
    S = np.asarray(S, dtype=bool)
    fv = np.asarray(getattr(f, "values", f), dtype=float)
    F = convolve_measures(group, fv, [S])
    bound = eps * p_norm_on(fv, B, p)
    errs = translation_errors(F, B, p)
    ok = errs <= bound * (1 + NORM_RTOL) + 1e-15
    T = np.zeros(group.size, dtype=bool)
    T[B.indices[ok]] = True
    T[0] = True  # tau_0 is the identity
    sigma = S.sum() / B.size
    dens = T.sum() / B.size
    floor = float(sigma ** (C * eps**-2 * p))
    full = np.full(group.size, np.nan)
    full[B.indices] = errs
    return TranslateSet(T, full, bound, eps, p, float(sigma), float(dens), floor, dens >= floor)


def cs_translates_sampled(f, S, eps: float, p: float, B: BohrSet, rng: np.random.Generator,
                          samples: int = 64, C: float = 1.0) -> TranslateSet:
    """Random-sampling construction in the style of the almost-periodicity proof.

    Draw m-tuples a from S^m; call a good when the empirical average of the
    translates tau_{a_i} f is within eps/2 of f*mu_S.  For a good a, every t
    with a + t also good is an eps-almost-period by the triangle inequality.
    Returns the largest such set found, always a subset of the exhaustive T.
    """
    group = B.group
    S = np.asarray(S, dtype=bool)
    fv = np.asarray(getattr(f, "values", f), dtype=float)
    F = convolve_measures(group, fv, [S])
    bound = eps * p_norm_on(fv, B, p)
    m = max(1, math.ceil(C * eps**-2 * p))
    Sidx = np.flatnonzero(S)
    Bidx = B.indices
    best = np.zeros(group.size, dtype=bool)
    for _ in range(samples):
        a = rng.choice(Sidx, size=m)
        emp = np.bincount(a, minlength=group.size).astype(float)
        fh = fourier_values(group, fv) * fourier_values(group, emp) * group.size / m
        avg = inverse_values(group, fh).real
        # the average over the shifted tuple a + t is tau_t of the average over a
        good = translation_errors(avg, B, p, target=F) <= bound / 2
        if not good.any():
            continue
        anchor = int(Bidx[np.flatnonzero(good)[0]])
        cand = np.zeros(group.size, dtype=bool)
        cand[group.sub(Bidx[good], anchor)] = True
        if cand.sum() > best.sum():
            best = cand
    if not best.any():
        best[0] = True
    sigma = S.sum() / B.size
    dens = best.sum() / B.size
    floor = float(sigma ** (C * eps**-2 * p))
    return TranslateSet(best, np.full(group.size, np.nan), bound, eps, p, float(sigma),
                        float(dens), floor, dens >= floor, method="sampled")


@dataclass
class CSOutcome:
    kind: str  # "InnerProductLarge" | "Increment"
    inner_product: Fraction
    threshold: Fraction
    B_prime: BohrSet | None = None
    shift: int | None = None       # density of (A + shift) in B_prime is `density`
    density: float | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_increment(self) -> bool:
        return self.kind == "Increment"


def local_inner_product(B: BohrSet, sets, A) -> Fraction:
    """<X_1*...*X_m, A>_beta with B-normalized convolutions, exactly."""
    counts = conv_chain_counts(B.group, list(sets))
    total = int(counts[np.asarray(A, dtype=bool)].astype(object).sum())
    return Fraction(total, B.size ** len(list(sets)))


def cs_increment(A, L, S_list, B: BohrSet, l: int,
                 tuning: TuningConstants | None = None) -> CSOutcome:
    """Large inner product <L*S_1*...*S_k, A>, or a Bohr set on which A is denser by 1 + lambda/32."""
    tuning = tuning or TuningConstants()
    if l < 1:
        raise ValueError("l must be >= 1")
    group = B.group
    A = np.asarray(A, dtype=bool)
    L = np.asarray(L, dtype=bool)
    S_list = [np.asarray(S, dtype=bool) for S in S_list]
    for name, m in [("A", A), ("L", L)] + [(f"S{i + 1}", S) for i, S in enumerate(S_list)]:
        if not m.any():
            raise DegenerateDensity(f"{name} is empty")
    dens = lambda m: Fraction(int(m.sum()), B.size)  # noqa: E731
    lam, alpha = dens(L), dens(A)
    sig_prod = math.prod((dens(S) for S in S_list), start=Fraction(1))
    inner = local_inner_product(B, [L] + S_list, A)
    threshold = lam * sig_prod * alpha / 2
    diag = {"lambda": float(lam), "alpha": float(alpha), "sigma_product": float(sig_prod),
            "inner_product": float(inner), "threshold": float(threshold)}
    if inner >= threshold:
        return CSOutcome("InnerProductLarge", inner, threshold, diagnostics=diag)
    a = float(alpha)
    p = tuning.choose_p(a)
    eps = float(lam) / (4 * math.e * l)
    f = convolve_measures(group, L.astype(float), S_list[:-1])
    if tuning.cs_mode == "sampled":
        rng = np.random.default_rng(tuning.seed)
        ts = cs_translates_sampled(f, S_list[-1], eps, p, B, rng, tuning.cs_samples, tuning.C_size)
    else:
        ts = cs_translates(f, S_list[-1], eps, p, B, tuning.C_size)
    eta = (float(lam) * a / 32) ** (1.0 / (2 * l))
    nu = float(lam) / 32
    # proof-chain quantities, evaluated numerically
    mu = B.density
    mT = measure_transform(group, ts.T)
    Abal_hat = fourier_values(group, balanced_function(A, B))
    Fchain = float(sig_prod) * convolve_measures(group, L.astype(float), S_list)
    Fg = convolve_measures(group, Fchain, [ts.T] * l)
    Aidx = np.flatnonzero(A)
    holder_gap = abs(Fg[Aidx].sum() - Fchain[Aidx].sum()) / B.size
    fourier_mass = float(np.sum(np.abs(mT) ** (2 * l) * np.abs(Abal_hat) ** 2))
    diag.update(p=p, eps=eps, l=l, eta=eta, nu=nu, T_size=ts.size, T_density=ts.density,
                T_floor=ts.floor, holder_gap=float(holder_gap),
                holder_bound=float(lam * sig_prod * alpha / 4),
                fourier_mass=fourier_mass, fourier_target=float(lam) * a * a * mu / 16)
    out = increment_from_spectrum(A, ts.T, B, min(1.0, eta), nu, C_chang=tuning.C_chang)
    diag.update(spectral_mass=out.hypothesis_sum, spectral_target=out.hypothesis_target)
    if not out.is_increment:
        raise InvariantViolation("spectral hypothesis fails below the inner-product threshold")
    shift = int(group.neg(out.x))
    return CSOutcome("Increment", inner, threshold, out.B_prime, shift, out.density, diag)
