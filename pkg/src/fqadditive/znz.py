"""Bohr sets in Z/NZ: construction, the regularity condition, and regular-width search.

Membership uses ``|e(gamma x) - 1| = 2 |sin(pi gamma x / N)| < rho``; the
alternative ``||gamma x / N|| < rho`` convention is available as
``metric="norm"``.  Because ``|B_{(1+eta) rho}|`` is a step function of
eta, regularity is decided exactly from the jump points.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NotFoundAtResolution, PreconditionViolation

METRICS = ("exp", "norm")


def _distance_profile(N: int, gammas, metric: str) -> np.ndarray:
    """m(x) = max over gamma of the chosen distance from gamma x to 0, for every residue x."""
    x = np.arange(N, dtype=np.int64)
    out = np.zeros(N)
    for g in gammas:
        r = (int(g) * x) % N
        if metric == "exp":
            d = 2 * np.abs(np.sin(np.pi * r / N))
        else:
            d = np.minimum(r, N - r) / N
        out = np.maximum(out, d)
    return out


@dataclass(frozen=True)
class ZBohrSet:
    N: int
    gammas: tuple
    rho: float
    metric: str = "exp"

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if not 0 < self.rho < 2:
            raise ValueError("rho must lie in (0, 2)")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        object.__setattr__(self, "gammas", tuple(int(g) % self.N for g in self.gammas))

    @property
    def rank(self) -> int:
        return len(self.gammas)

    @cached_property
    def profile(self) -> np.ndarray:
        return _distance_profile(self.N, self.gammas, self.metric)

    @cached_property
    def mask(self) -> np.ndarray:
        return self.profile < self.rho

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def contains(self, x: int) -> bool:
        """Membership re-evaluated from the definition."""
        x = int(x) % self.N
        for g in self.gammas:
            r = (g * x) % self.N
            d = (2 * abs(np.sin(np.pi * r / self.N)) if self.metric == "exp"
                 else min(r, self.N - r) / self.N)
            if not d < self.rho:
                return False
        return True

    def with_width(self, rho: float) -> "ZBohrSet":
        return ZBohrSet(self.N, self.gammas, rho, self.metric)

    def size_at(self, rho: float) -> int:
        return int((self.profile < rho).sum())

    @property
    def size_floor_ratio(self) -> float:
        """|B| / (rho^k N), logged against the size estimate rho^k N."""
        return self.size / (self.rho**self.rank * self.N)


def znz_bohr_build(N: int, gammas, rho: float, metric: str = "exp") -> ZBohrSet:
    return ZBohrSet(N, tuple(gammas), float(rho), metric)


@dataclass
class RegularityReport:
    regular: bool
    worst_eta: float | None
    worst_excess: float
    checked: int


def znz_is_regular(B: ZBohrSet, grid_step: float | None = None) -> RegularityReport:
    """Check |B|/(1+100k|eta|) <= |B_{(1+eta)rho}| <= (1+100k|eta|)|B| for all |eta| <= 1/100k."""
    k = B.rank
    if k == 0:
        return RegularityReport(True, None, 0.0, 0)
    size = B.size
    lim = 1.0 / (100 * k)
    step = grid_step or 1.0 / (1000 * k)
    thresholds = np.sort(B.profile / B.rho - 1.0)   # x joins B_{(1+eta)rho} once eta > threshold
    etas_up = thresholds[(thresholds >= 0) & (thresholds < lim)]
    etas_dn = thresholds[(thresholds >= -lim) & (thresholds < 0)]
    grid = np.arange(-lim, lim + step / 2, step)
    worst_eta, worst = None, 0.0
    checked = 0

    def count_below(eta):            # |B_{(1+eta) rho}| = #{threshold < eta}
        return int(np.searchsorted(thresholds, eta, side="left"))

    def count_at_or_below(eta):      # limit from the right at a jump point
        return int(np.searchsorted(thresholds, eta, side="right"))

    def consider(eta, value):
        nonlocal worst_eta, worst, checked
        checked += 1
        factor = 1 + 100 * k * abs(eta)
        excess = max(value - factor * size, size / factor - value)
        if excess > worst + 1e-12:
            worst, worst_eta = excess, float(eta)

    for eta in etas_up:              # upper jumps: just to the right of eta
        consider(eta, count_at_or_below(eta))
    for eta in etas_dn:              # lower jumps: value at the jump point itself
        consider(eta, count_below(eta))
    for eta in np.concatenate([grid, [-lim, lim]]):
        consider(eta, count_below(eta))
    return RegularityReport(worst <= 0, worst_eta if worst > 0 else None, worst, checked)


def znz_find_regular_width(N: int, gammas, rho: float, step: float = 1 / 512,
                           max_refinements: int = 3, metric: str = "exp") -> tuple[float, ZBohrSet]:
    """First eps in [1/2, 1) on the grid with B_{eps rho}(Gamma) regular."""
    base = znz_bohr_build(N, gammas, rho, metric)
    if base.rank == 0:
        return 0.5, base.with_width(0.5 * rho)
    tried = set()
    for _ in range(max_refinements + 1):
        n = int(round(0.5 / step))
        for i in range(n):
            eps = 0.5 + i * step
            if eps in tried:
                continue
            tried.add(eps)
            B = base.with_width(eps * rho)
            if znz_is_regular(B).regular:
                return eps, B
        step /= 2
    raise NotFoundAtResolution(f"no regular width on a grid of step {step * 2}")


@dataclass
class ApproxIdentityReport:
    lhs: float            # <f, B * beta'> / mu_G(B)
    rhs: float            # E_{x in B} f(x)
    error: float
    ratio: float          # error / (eps k)
    eps: float
    k: int


def znz_smoothed(B: ZBohrSet, Bp: ZBohrSet) -> np.ndarray:
    """(B * beta')(x) = |B cap (x - B')| / |B'| for every residue x."""
    N = B.N
    x = np.arange(N)
    acc = np.zeros(N, dtype=np.int64)
    for y in Bp.members:
        acc += B.mask[(x - y) % N]
    return acc / Bp.size


def znz_approx_identity_check(f, B: ZBohrSet, Bp: ZBohrSet, eps: float,
                              require_regular: bool = True) -> ApproxIdentityReport:
    """Compare <f, B * beta'> with (E_{x in B} f(x)) mu_G(B)."""
    fv = np.asarray(f, dtype=complex)
    if fv.shape != (B.N,):
        raise PreconditionViolation("f must have one value per residue")
    if np.max(np.abs(fv), initial=0.0) > 1 + 1e-12:
        raise PreconditionViolation("f must be bounded by 1")
    if Bp.N != B.N or Bp.gammas != B.gammas:
        raise PreconditionViolation("B and B' must share modulus and frequencies")
    if np.any(Bp.mask & ~B.with_width(eps * B.rho).mask):
        raise PreconditionViolation("B' is not inside B_{eps rho}")
    if require_regular and not znz_is_regular(B).regular:
        raise PreconditionViolation("B is not regular")
    smooth = znz_smoothed(B, Bp)
    lhs = complex(np.sum(fv * smooth)) / B.size
    rhs = complex(np.mean(fv[B.mask]))
    err = abs(lhs - rhs)
    k = max(B.rank, 1)
    return ApproxIdentityReport(abs(lhs), abs(rhs), err, err / (eps * k), eps, B.rank)
