"""Explicit values for the unnamed positive constants of the density-increment argument."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields

L_RULES = ("ceil_log_inv_alpha",)
P_RULES = ("max2_ceil_log_inv_alpha",)
CS_MODES = ("exhaustive", "sampled")


@dataclass(frozen=True)
class TuningConstants:
    C_chang: float = 8.0          # |dissociated subset| <= C_chang eta^-2 max(1, log 1/delta)
    C_size: float = 1.0           # translate-set floor sigma^(C_size eps^-2 p)
    c_increment: float = 0.125    # c in the dilation test alpha(1 + c/2(s-1))
    C_steps: float = 40.0         # increment steps <= C_steps log(1/alpha) + 1
    max_iterations: int = 64
    l_rule: str = "ceil_log_inv_alpha"
    p_rule: str = "max2_ceil_log_inv_alpha"
    cs_mode: str = "exhaustive"
    cs_samples: int = 64
    seed: int = 0

    def __post_init__(self):
        for name in ("C_chang", "C_size", "c_increment", "C_steps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 1 or self.cs_samples < 1:
            raise ValueError("iteration and sample budgets must be positive")
        if self.l_rule not in L_RULES or self.p_rule not in P_RULES:
            raise ValueError("unknown l or p rule")
        if self.cs_mode not in CS_MODES:
            raise ValueError(f"cs_mode must be one of {CS_MODES}")

    def c_prime(self, s: int) -> float:
        """Guaranteed per-step density factor minus one."""
        c = self.c_increment
        return min(c / (2 * (s - 1)), c / 4)

    def choose_l(self, alpha: float) -> int:
        return max(1, math.ceil(math.log(1 / alpha))) if alpha < 1 else 1

    def choose_p(self, alpha: float) -> int:
        return max(2, math.ceil(math.log(1 / alpha))) if alpha < 1 else 2

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TuningConstants":
        known = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for k, v in d.items():
            if k not in known:
                raise ValueError(f"unknown tuning constant {k!r}")
            default = getattr(cls, k)
            kwargs[k] = type(default)(v)
        return cls(**kwargs)

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]
