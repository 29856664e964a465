"""The Katz-Koester transformation step and its iteration.

All sets are boolean masks over G_N contained in a Bohr set B; densities
are relative to B and convolutions are B-normalized, so that
``L*S(x) = #{y in L : x - y in S} / |B|``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bohr import BohrSet
from ..errors import DegenerateDensity, InvariantViolation, SupportViolation
from ..fourier import conv_chain_counts, conv_counts
from ..spectral import increment_from_spectrum, neg_set, symmetry_set, translate_set
from .tuning import TuningConstants

POINTWISE_CHECK_LIMIT = 4096


@dataclass
class KKOutcome:
    kind: str  # "Increment" | "Transformed"
    B_prime: BohrSet | None = None
    shift: int | None = None        # density of (set + shift) in B_prime is `density`
    density: float | None = None
    L: np.ndarray | None = None
    S: list = field(default_factory=list)
    certified_pointwise: bool | None = None
    trivial: bool = False
    x: int | None = None             # translate used by a transforming step
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_increment(self) -> bool:
        return self.kind == "Increment"


def _density(mask: np.ndarray, B: BohrSet) -> Fraction:
    return Fraction(int(mask.sum()), B.size)


def _require(masks: dict, B: BohrSet) -> None:
    Bm = B.mask()
    for name, m in masks.items():
        if np.any(m & ~Bm):
            raise SupportViolation(f"{name} is not contained in B")
        if not m.any():
            raise DegenerateDensity(f"{name} is empty")


def kk_pointwise_ok(B: BohrSet, Lp, Sp, L, S, K, T) -> bool:
    """L'*S'(x) <= L*S(x) + K*T(x) for every x in G (exact counts)."""
    g = B.group
    lhs = conv_counts(g, Lp, Sp)
    rhs = conv_counts(g, L, S) + conv_counts(g, K, T)
    return bool(np.all(lhs <= rhs))


def kk_step(K, T, L, S, B: BohrSet, tuning: TuningConstants | None = None) -> KKOutcome:
    """One transformation step: enlarge L by a translate of K, or find a Bohr increment for K."""
    tuning = tuning or TuningConstants()
    K, T, L, S = (np.asarray(m, dtype=bool) for m in (K, T, L, S))
    _require({"K": K, "T": T, "L": L, "S": S}, B)
    group = B.group
    kappa, tau, lam, sigma = (_density(m, B) for m in (K, T, L, S))
    negS, negK = neg_set(group, S), neg_set(group, K)
    sym_ST = symmetry_set(negS, T, tau * sigma / 2, B)
    sym_LK = symmetry_set(L, negK, kappa / 2, B)
    candidates = sym_ST & ~sym_LK
    diag = {"kappa": float(kappa), "tau": float(tau), "lambda": float(lam), "sigma": float(sigma),
            "sym_ST": int(sym_ST.sum()), "sym_LK": int(sym_LK.sum())}
    if candidates.any():
        counts = conv_counts(group, negS, T)
        x = int(np.argmax(np.where(candidates, counts, -1)))
        Lp = L | translate_set(group, K, x)
        Sp = S & translate_set(group, T, int(group.neg(x)))
        lam_p, sig_p = _density(Lp, B), _density(Sp, B)
        if lam_p < lam + kappa / 2 or sig_p < tau * sigma / 2:
            raise InvariantViolation("transformed sets miss their density floors")
        certified = None
        if group.size <= POINTWISE_CHECK_LIMIT:
            certified = kk_pointwise_ok(B, Lp, Sp, L, S, K, T)
            if not certified:
                raise InvariantViolation("pointwise inequality fails for transformed sets")
        diag.update(lambda_new=float(lam_p), sigma_new=float(sig_p))
        return KKOutcome("Transformed", L=Lp, S=[Sp], certified_pointwise=certified, x=x,
                         diagnostics=diag)
    if lam >= Fraction(1, 4):
        # the increment conclusion is trivial once lambda >= 1/4; report the sets unchanged
        return KKOutcome("Transformed", L=L, S=[S], certified_pointwise=True, trivial=True,
                         diagnostics=diag)
    D = symmetry_set(neg_set(group, L), K, kappa / 2, B)
    ratio = float(kappa / (32 * lam))
    eta = min(1.0, math.sqrt(ratio))
    nu = float(1 / (32 * lam))
    out = increment_from_spectrum(K, D, B, eta, nu, C_chang=tuning.C_chang)
    diag.update(eta=eta, nu=nu, D_density=float(_density(D, B)),
                hypothesis_sum=out.hypothesis_sum, hypothesis_target=out.hypothesis_target)
    if not out.is_increment:
        raise InvariantViolation("spectral hypothesis fails although no transforming translate exists")
    shift = int(group.neg(out.x))
    if out.density < ratio - 1e-12:
        raise InvariantViolation("Bohr increment below kappa/32 lambda")
    return KKOutcome("Increment", B_prime=out.B_prime, shift=shift, density=out.density,
                     diagnostics=diag)


def _ceil_root(alpha1: Fraction, k: int) -> int:
    r = float(alpha1) ** (-1.0 / k)
    n = round(r)
    return n if abs(r - n) < 1e-9 else math.ceil(r)


def kk_transform(A1, rest, B: BohrSet, k: int | None = None,
                 tuning: TuningConstants | None = None) -> KKOutcome:
    """Iterate kk_step to obtain dense L and sets S_1..S_k, or a density increment for A1."""
    tuning = tuning or TuningConstants()
    A1 = np.asarray(A1, dtype=bool)
    rest = [np.asarray(m, dtype=bool) for m in rest]
    k = len(rest) if k is None else k
    if k != len(rest) or k < 1:
        raise ValueError("kk_transform needs k >= 1 further sets")
    _require({"A1": A1, **{f"A{i + 2}": m for i, m in enumerate(rest)}}, B)
    group = B.group
    alpha1 = _density(A1, B)
    steps = _ceil_root(alpha1, k)
    L_prev = A1
    S_done: list[np.ndarray] = []
    X_sets: list[list[int]] = []
    log = []

    def finish(L, S_list, reason, X_current):
        factor = math.prod(len(X) for X in X_sets) * len(X_current)
        out = KKOutcome("Transformed", L=L, S=S_list, diagnostics={
            "steps_per_level": steps, "X_sizes": [len(X) for X in X_sets] + [len(X_current)],
            "log": log, "reason": reason, "lambda": float(_density(L, B)),
            "sigmas": [float(_density(S, B)) for S in S_list], "pointwise_factor": factor})
        if group.size <= POINTWISE_CHECK_LIMIT:
            lhs, rhs = _chain_pair(B, A1, rest, L, S_list)
            # provable bound: each transforming step adds at most one copy of the A-chain
            if not np.all(lhs <= rhs * factor):
                raise InvariantViolation("kk_transform step-count inequality fails")
            a1 = int(A1.sum())
            out.certified_pointwise = bool(np.all(lhs * a1 * a1 <= rhs * B.size * B.size))
        return out

    for j in range(1, k + 1):
        K, T = L_prev, rest[j - 1]
        L_cur, S_cur, X = L_prev, T, [0]
        for i in range(1, steps):
            res = kk_step(K, T, L_cur, S_cur, B, tuning)
            lam_i = _density(L_cur, B)
            log.append({"level": j, "step": i, "kind": res.kind, "trivial": res.trivial,
                        "lambda": float(lam_i)})
            if res.kind == "Transformed" and not res.trivial:
                L_cur, S_cur = res.L, res.S[0]
                X.append(res.x)
                continue
            if res.trivial or lam_i > Fraction(1, 2 ** (j + 6)):
                return finish(L_cur, S_done + [S_cur] + rest[j:], "dense-L", X)
            # Bohr increment for L_{j-1} + shift; pigeonhole to a single translate of A1
            best, best_shift = -1.0, None
            Bp_mask = res.B_prime.mask()
            for xs in itertools.product(*X_sets):
                tot = res.shift
                for xv in xs:
                    tot = int(group.add(tot, xv))
                d = int((translate_set(group, A1, tot) & Bp_mask).sum()) / res.B_prime.size
                if d > best:
                    best, best_shift = d, tot
            if best < 2 * float(alpha1) - 1e-12:
                raise InvariantViolation("pigeonholed translate below 2 alpha_1")
            return KKOutcome("Increment", B_prime=res.B_prime, shift=best_shift, density=best,
                             diagnostics={"level": j, "step": i, "log": log,
                                          "steps_per_level": steps,
                                          "step_density": res.density})
        X_sets.append(X)
        S_done.append(S_cur)
        L_prev = L_cur
    return finish(L_prev, S_done, "completed", [0])


def _chain_pair(B: BohrSet, A1, rest, L, S_list):
    g = B.group
    lhs = conv_chain_counts(g, [L] + list(S_list)).astype(object)
    rhs = conv_chain_counts(g, [A1] + list(rest)).astype(object)
    return lhs, rhs


def kk_transform_pointwise_ok(B: BohrSet, A1, rest, L, S_list) -> bool:
    """L*S_1*...*S_k(x) <= alpha_1^-2 A_1*...*A_{k+1}(x) for every x (exact counts)."""
    lhs, rhs = _chain_pair(B, A1, rest, L, S_list)
    a1 = int(np.asarray(A1).sum())
    return bool(np.all(lhs * a1 * a1 <= rhs * B.size * B.size))
