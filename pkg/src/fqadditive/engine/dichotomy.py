"""The combined dichotomy: many solutions inside B, or a denser translate in a smaller Bohr set."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bohr import BohrSet
from ..errors import DegenerateDensity, InvariantViolation, SupportViolation
from .croot_sisask import cs_increment, local_inner_product
from .katz_koester import kk_transform
from .tuning import TuningConstants


@dataclass
class DichotomyOutcome:
    kind: str  # "InnerProductLarge" | "Increment"
    inner_product: Fraction                 # <A_1*...*A_{s-1}, A_s>_beta, exact
    lower_bound: Fraction | None = None     # alpha_1^2 lambda sigma_1...sigma_k alpha_s / 2
    B_prime: BohrSet | None = None
    shift: int | None = None                # density of (A_index + shift) in B_prime
    index: int | None = None                # 1 or s
    density: float | None = None
    route: str | None = None                # "katz-koester" | "croot-sisask"
    diagnostics: dict = field(default_factory=dict)

    @property
    def is_increment(self) -> bool:
        return self.kind == "Increment"


def density_dichotomy(A_list, B: BohrSet, tuning: TuningConstants | None = None) -> DichotomyOutcome:
    """Katz-Koester transform of A_1..A_{s-1}, then the Croot-Sisask step against A_s."""
    tuning = tuning or TuningConstants()
    A_list = [np.asarray(A, dtype=bool) for A in A_list]
    s = len(A_list)
    if s < 3:
        raise ValueError("the dichotomy needs s >= 3 sets")
    Bm = B.mask()
    for i, A in enumerate(A_list):
        if np.any(A & ~Bm):
            raise SupportViolation(f"A_{i + 1} is not contained in B")
        if not A.any():
            raise DegenerateDensity(f"A_{i + 1} is empty")
    dens = [Fraction(int(A.sum()), B.size) for A in A_list]
    alpha = min(dens)
    inner = local_inner_product(B, A_list[:-1], A_list[-1])
    kk = kk_transform(A_list[0], A_list[1:-1], B, s - 2, tuning)
    diag = {"alpha": float(alpha), "densities": [float(d) for d in dens],
            "kk": {k: v for k, v in kk.diagnostics.items() if k != "log"}}
    if kk.is_increment:
        return DichotomyOutcome("Increment", inner, None, kk.B_prime, kk.shift, 1, kk.density,
                                "katz-koester", diag)
    diag["kk_certified_pointwise"] = kk.certified_pointwise
    l = tuning.choose_l(float(alpha))
    cs = cs_increment(A_list[-1], kk.L, kk.S, B, l, tuning)
    diag["cs"] = cs.diagnostics
    if cs.is_increment:
        return DichotomyOutcome("Increment", inner, None, cs.B_prime, cs.shift, s, cs.density,
                                "croot-sisask", diag)
    # L*S_1*...*S_k <= factor * A_1*...*A_{s-1} always; alpha_1^-2 when certified
    lower = cs.threshold / kk.diagnostics["pointwise_factor"]
    if kk.certified_pointwise:
        lower = max(lower, dens[0] ** 2 * cs.threshold)
    if inner < lower:
        raise InvariantViolation("inner product below its certified lower bound")
    return DichotomyOutcome("InnerProductLarge", inner, lower, diagnostics=diag)
