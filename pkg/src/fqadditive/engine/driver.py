"""The density-increment iteration and its trajectory record."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..bohr import bohr_dilate, bohr_narrow, degree_subspace, dilate_set
from ..equations import EquationSpec, count_solutions, poly_to_hex
from ..errors import (DegenerateDensity, DomainViolation, InvariantViolation, ScaleTooSmall)
from ..fourier import conv_chain_counts, conv_counts
from ..group import PolyGroup
from ..poly import Poly, padd, pdivmod, pmul, pneg, psub, ptrim
from ..spectral import translate_set
from .dichotomy import density_dichotomy
from .tuning import TuningConstants

CROSS_CHECK_LIMIT = 1 << 12


@dataclass(frozen=True)
class AffineMap:
    """y = u a + v, sending elements a of the original set to the current set."""

    u: Poly
    v: Poly

    def then_translate(self, ctx, x: Poly) -> "AffineMap":
        return AffineMap(self.u, padd(ctx, self.v, x))

    def then_dilate(self, ctx, c: Poly) -> "AffineMap":
        return AffineMap(pmul(ctx, c, self.u), pmul(ctx, c, self.v))

    def preimage(self, ctx, y: Poly) -> Poly | None:
        quo, rem = pdivmod(ctx, psub(ctx, y, self.v), self.u)
        return None if ptrim(rem) else ptrim(quo)


@dataclass
class Trajectory:
    config: dict
    records: list = field(default_factory=list)
    terminal: dict = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)

    @property
    def increments(self) -> int:
        return sum(1 for r in self.records if r.get("increment_ratio") is not None)

    def to_records(self) -> list[dict]:
        out = [{"type": "iteration", **r} for r in self.records]
        out.append({"type": "terminal", **self.terminal, "invariants": self.invariants})
        return out

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.to_records())


def _hex(group: PolyGroup, idx: int) -> str:
    return poly_to_hex(group.poly_of(int(idx)), group.q)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _dilate_mask(group: PolyGroup, mask: np.ndarray, c: Poly) -> np.ndarray:
    return group.mask(dilate_set(group, np.flatnonzero(mask), c))


def _product(ctx, polys) -> Poly:
    out: Poly = (1,)
    for c in polys:
        out = pmul(ctx, out, c)
    return out


def run_density_iteration(A, eq: EquationSpec, group: PolyGroup,
                          tuning: TuningConstants | None = None,
                          exact_lambda: bool = True) -> Trajectory:
    """Iterate the dilation test and the dichotomy until a solution count is certified."""
    tuning = tuning or TuningConstants()
    ctx = group.ctx
    A = np.asarray(A)
    if A.dtype != bool:
        A = group.mask(A.astype(np.int64))
    s, ell, N = eq.s, eq.ell, group.N
    if N <= s * ell:
        raise ScaleTooSmall(f"N = {N} must exceed s*ell = {s * ell}")
    if not A.any():
        raise DegenerateDensity("A is empty")
    if not eq.translation_invariant:
        raise InvariantViolation("the iteration needs coefficients summing to zero")
    alpha0 = Fraction(int(A.sum()), group.size)
    c = tuning.c_increment
    c_prime = tuning.c_prime(s)
    step_cap = tuning.C_steps * math.log(1 / float(alpha0)) + 1 if alpha0 < 1 else 1.0
    traj = Trajectory(config={"q": group.q, "N": N, "coeffs": eq.to_hex(), "size_A": int(A.sum()),
                              "alpha": _frac(alpha0), "tuning": tuning.to_dict(),
                              "c_prime": c_prime, "step_cap": step_cap})

    # pigeonhole translate into B^(1) = G_{N - s ell}
    B = degree_subspace(group, N - s * ell)
    counts = conv_counts(group, A.astype(np.int64), B.mask().astype(np.int64))
    x0 = int(np.argmax(counts))
    cur = translate_set(group, A, int(group.neg(x0)))
    amap = AffineMap((1,), group.poly_of(int(group.neg(x0))))
    P_all = _product(ctx, eq.coeffs)
    P_j = [_product(ctx, eq.coeffs[:j] + eq.coeffs[j + 1:]) for j in range(s)]
    signs = [(1,)] * (s - 1) + [pneg(ctx, (1,))]
    violations = []

    for it in range(1, tuning.max_iterations + 1):
        At = cur & B.mask()
        a_cnt = int(At.sum())
        alpha = Fraction(a_cnt, B.size)
        rec = {"i": it, "rank": B.rank, "bohr_size": B.size, "bohr_dim": B.dim,
               "density": _frac(alpha), "density_float": float(alpha)}
        if alpha > 1:
            violations.append(f"density above 1 at iteration {it}")
        try:
            Bn = bohr_narrow(B, s * ell)
            Bjs = [bohr_dilate(Bn, P) for P in P_j]
        except DomainViolation as exc:
            rec["branch"] = "domain-violation"
            traj.records.append(rec)
            traj.terminal = {"kind": "exhausted", "reason": f"dilation domain: {exc}"}
            break
        # the x maximizing the sum of the s translate averages
        big = max(Bj.size for Bj in Bjs)
        cj = [conv_counts(group, At.astype(np.int64), Bj.mask().astype(np.int64)) for Bj in Bjs]
        score = sum(cnt * (big // Bj.size) for cnt, Bj in zip(cj, Bjs))
        x = int(np.argmax(np.where(B.mask(), score, -1)))
        avgs = [Fraction(int(cnt[x]), Bj.size) for cnt, Bj in zip(cj, Bjs)]
        rec["translate"] = _hex(group, x)
        rec["averages"] = [float(a) for a in avgs]
        cf = Fraction(c)
        target = alpha * (1 + cf / (2 * (s - 1)))
        j_best = max(range(s), key=lambda j: (avgs[j], -j))
        if avgs[j_best] >= target:
            ratio = avgs[j_best] / alpha
            rec.update(branch="dilation", index=j_best + 1, dilation=poly_to_hex(P_j[j_best], group.q),
                       increment_ratio=float(ratio))
            if ratio < 1 + Fraction(c_prime):
                violations.append(f"dilation step {it} below 1 + c'")
            traj.records.append(rec)
            B = Bjs[j_best]
            cur = translate_set(group, cur, int(group.neg(x)))
            amap = amap.then_translate(ctx, group.poly_of(int(group.neg(x))))
            continue

        # all averages are close to alpha: pass to B' = (c_1...c_s) B_{s ell}
        Bp = bohr_dilate(Bn, P_all)
        shifted = translate_set(group, cur, int(group.neg(x)))
        A_js, maps = [], []
        base = amap.then_translate(ctx, group.poly_of(int(group.neg(x))))
        for j in range(s):
            cj_poly = pmul(ctx, signs[j], eq.coeffs[j])
            Sj = shifted & Bjs[j].mask()
            Aj = _dilate_mask(group, Sj, cj_poly)
            if group.size <= CROSS_CHECK_LIMIT and not np.array_equal(
                    _dilate_mask(group, Bjs[j].mask(), eq.coeffs[j]), Bp.mask()):
                violations.append(f"c_{j + 1} B_{j + 1} differs from B' at iteration {it}")
            if np.any(Aj & ~Bp.mask()):
                violations.append(f"A_{j + 1} leaves B' at iteration {it}")
            A_js.append(Aj)
            maps.append(base.then_dilate(ctx, cj_poly))
        rec["dilation"] = poly_to_hex(P_all, group.q)
        dd = density_dichotomy(A_js, Bp, tuning)
        rec["route"] = dd.route
        rec["inner_product"] = _frac(dd.inner_product)
        if not dd.is_increment:
            raw = int(conv_chain_counts(group, A_js[:-1])[A_js[-1]].astype(object).sum())
            cert = Fraction(raw, group.size ** (s - 1))
            rec["branch"] = "certificate"
            traj.records.append(rec)
            traj.terminal = {"kind": "certificate", "solutions": raw, "lambda_lower": _frac(cert),
                             "lambda_lower_float": float(cert),
                             "lower_bound_inner": _frac(dd.lower_bound)}
            # every counted solution pulls back to a solution in A
            for j, (Aj, m) in enumerate(zip(A_js, maps)):
                for y in np.flatnonzero(Aj):
                    a = m.preimage(ctx, group.poly_of(int(y)))
                    if a is None or len(a) > N or not A[group.index_of(a)]:
                        violations.append(f"element of A_{j + 1} does not pull back into A")
                        break
            if exact_lambda:
                exact = count_solutions(A, eq, group, check=False).lam
                traj.terminal["lambda_exact"] = _frac(exact)
                if cert > exact:
                    violations.append("certificate exceeds the exact Lambda(A)")
            break
        idx = dd.index - 1
        ratio = Fraction(dd.density) / alpha
        rec.update(index=dd.index, new_density_float=dd.density)
        if ratio < 1 + Fraction(c_prime):
            rec.update(branch="branch-infeasible", attempted_ratio=float(ratio))
            traj.records.append(rec)
            traj.terminal = {"kind": "exhausted",
                             "reason": f"increment factor {float(ratio):.6f} below 1 + c'"}
            break
        rec["increment_ratio"] = float(ratio)
        rec["branch"] = "dichotomy"
        traj.records.append(rec)
        B = dd.B_prime
        cur = translate_set(group, A_js[idx], dd.shift)
        amap = maps[idx].then_translate(ctx, group.poly_of(dd.shift))
    else:
        traj.terminal = {"kind": "exhausted", "reason": "iteration cap reached"}

    n_inc = traj.increments
    traj.invariants = {"increments": n_inc, "step_cap": step_cap,
                       "within_step_cap": n_inc <= step_cap, "violations": violations,
                       "ok": not violations and n_inc <= step_cap}
    return traj
