"""Linear equations c_1 x_1 + ... + c_s x_s = 0 over F_q[t]: genus, counts, solution-free sets."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (AmbientOverflow, InvariantViolation, NotTranslationInvariant, TooLarge)
from .field import FieldCtx
from .fourier import fourier_values
from .group import PolyGroup, group_for_q
from .poly import Poly, padd, pdeg, pdivmod, pmul, pneg, ptrim

AMBIENT_LIMIT = 1 << 20
TUPLE_LIMIT = 1 << 22
EXHAUSTIVE_LIMIT = 16
FOURIER_RESIDUAL = 1e-6
HEX = "0123456789abcdef"


# -- wire encodings -------------------------------------------------------------


def poly_to_hex(a: Poly, q: int) -> str:
    """Little-endian digit string "a_0a_1..."; the zero polynomial is "0"."""
    if q > 16:
        raise ValueError("hex digit strings need q <= 16")
    a = ptrim(a)
    return "".join(HEX[c] for c in a) if a else "0"


def hex_to_poly(s: str, q: int) -> Poly:
    if q > 16:
        raise ValueError("hex digit strings need q <= 16")
    digs = []
    for ch in s.strip().lower():
        d = HEX.find(ch)
        if d < 0 or d >= q:
            raise ValueError(f"digit {ch!r} is not a field element for q={q}")
        digs.append(d)
    return ptrim(digs)


def parse_coefficient(item: str, ctx: FieldCtx) -> Poly:
    """A hex digit string, or an integer with a leading '-' read modulo p."""
    item = item.strip()
    if item.startswith("-"):
        return ptrim([int(ctx.from_int(int(item) % ctx.p))])
    return hex_to_poly(item, ctx.q)


# -- equations and genus --------------------------------------------------------


@dataclass(frozen=True)
class EquationSpec:
    ctx: FieldCtx
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(ptrim(c) for c in self.coeffs))
        if len(self.coeffs) < 3:
            raise ValueError("equations need s >= 3 variables")
        if any(not c for c in self.coeffs):
            raise ValueError("coefficients must be non-zero")

    @classmethod
    def parse(cls, q: int, text: str) -> "EquationSpec":
        from .field import field_make
        from .group import prime_power

        ctx = field_make(*prime_power(q))
        return cls(ctx, tuple(parse_coefficient(t, ctx) for t in text.split(",")))

    @classmethod
    def from_ints(cls, ctx: FieldCtx, values) -> "EquationSpec":
        return cls(ctx, tuple(ptrim([int(ctx.from_int(v % ctx.p))]) for v in values))

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def s(self) -> int:
        return len(self.coeffs)

    @property
    def ell(self) -> int:
        return max(pdeg(c) for c in self.coeffs)

    def coefficient_sum(self) -> Poly:
        tot: Poly = ()
        for c in self.coeffs:
            tot = padd(self.ctx, tot, c)
        return tot

    @property
    def translation_invariant(self) -> bool:
        return not self.coefficient_sum()

    def to_hex(self) -> str:
        return ",".join(poly_to_hex(c, self.q) for c in self.coeffs)

    @cached_property
    def partition_table(self) -> list[int]:
        """best[mask]: most zero-sum parts in a partition of the index set mask (-1 if none)."""
        return _partition_table(self.ctx, self.coeffs)

    @property
    def genus(self) -> int:
        return genus(self)


def _subset_zero(ctx: FieldCtx, coeffs) -> list[bool]:
    s = len(coeffs)
    sums: list[Poly] = [()] * (1 << s)
    for mask in range(1, 1 << s):
        low = (mask & -mask).bit_length() - 1
        sums[mask] = padd(ctx, sums[mask & (mask - 1)], coeffs[low])
    return [not ptrim(x) for x in sums]


def _partition_table(ctx: FieldCtx, coeffs) -> list[int]:
    s = len(coeffs)
    zero = _subset_zero(ctx, coeffs)
    best = [-1] * (1 << s)
    best[0] = 0
    for mask in range(1, 1 << s):
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        # every part containing the lowest index: low | sub for sub a submask of rest
        while True:
            part = low | sub
            if zero[part] and best[mask ^ part] >= 0:
                best[mask] = max(best[mask], best[mask ^ part] + 1)
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return best


def genus(eq: EquationSpec) -> int:
    """Largest number of parts in a partition of {1..s} into zero-sum parts."""
    if not eq.translation_invariant:
        raise NotTranslationInvariant("coefficients do not sum to zero")
    return eq.partition_table[(1 << eq.s) - 1]


def set_partitions(items):
    """All set partitions of a list (explicit recursive enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


# -- solution tuples ----------------------------------------------------------


class _Solver:
    """Dilation tables into the ambient group G_{N+ell} and a cached last-variable solve."""

    def __init__(self, eq: EquationSpec, group: PolyGroup):
        self.eq = eq
        self.group = group
        self.N = group.N
        amb_N = group.N + eq.ell
        if eq.q**amb_N > AMBIENT_LIMIT:
            raise AmbientOverflow(f"ambient group q^{amb_N} exceeds {AMBIENT_LIMIT}")
        self.amb = PolyGroup(eq.ctx, amb_N)
        ctx = eq.ctx
        self.dil = []
        for c in eq.coeffs:
            tab = np.array([self.amb.index_of(pmul(ctx, group.poly_of(x), c))
                            for x in range(group.size)], dtype=np.int64)
            self.dil.append(tab)
        self._solve_cache: dict[int, int] = {}

    def solve_last(self, r: int) -> int:
        """x with c_s x = -r, deg x < N, as an index; -1 when none exists."""
        hit = self._solve_cache.get(r)
        if hit is not None:
            return hit
        ctx = self.eq.ctx
        num = pneg(ctx, self.amb.poly_of(r))
        quo, rem = pdivmod(ctx, num, self.eq.coeffs[-1])
        out = -1
        if not ptrim(rem) and len(ptrim(quo)) <= self.N:
            out = self.group.index_of(quo)
        self._solve_cache[r] = out
        return out

    def tuples(self, members: np.ndarray) -> np.ndarray:
        """All solutions (x_1..x_s) with every x_i in members, as an (n, s) index array."""
        members = np.asarray(members, dtype=np.int64)
        s = self.eq.s
        n = len(members)
        if n == 0:
            return np.zeros((0, s), dtype=np.int64)
        if float(n) ** (s - 1) > TUPLE_LIMIT:
            raise TooLarge(f"{n}^{s - 1} partial tuples exceed {TUPLE_LIMIT}")
        grids = np.meshgrid(*([members] * (s - 1)), indexing="ij")
        cols = [g.ravel() for g in grids]
        acc = self.dil[0][cols[0]]
        for i in range(1, s - 1):
            acc = self.amb.add(acc, self.dil[i][cols[i]])
        uniq, inv = np.unique(acc, return_inverse=True)
        last_u = np.array([self.solve_last(int(r)) for r in uniq], dtype=np.int64)
        last = last_u[inv]
        in_set = np.zeros(self.group.size, dtype=bool)
        in_set[members] = True
        ok = (last >= 0) & in_set[np.where(last >= 0, last, 0)]
        return np.stack([c[ok] for c in cols] + [last[ok]], axis=1)


def class_masks(tuples: np.ndarray) -> np.ndarray:
    """mask[n, i] = bitmask of indices j with x_j == x_i."""
    s = tuples.shape[1]
    out = np.zeros(tuples.shape, dtype=np.int64)
    for i in range(s):
        for j in range(s):
            out[:, i] |= (tuples[:, j] == tuples[:, i]).astype(np.int64) << j
    return out


def trivial_flags(eq: EquationSpec, tuples: np.ndarray, strict: bool = False) -> np.ndarray:
    """Lenient: some zero-sum partition is constant on the tuple (each value class sums to zero).
    Strict: some genus-achieving partition is constant on the tuple."""
    if len(tuples) == 0:
        return np.zeros(0, dtype=bool)
    best = np.array(eq.partition_table, dtype=np.int64)
    cm = class_masks(tuples)
    parts = best[cm]
    if not strict:
        return np.all(parts >= 1, axis=1)
    s = tuples.shape[1]
    rep = np.stack([(cm[:, i] & -cm[:, i]) == (1 << i) for i in range(s)], axis=1)
    total = np.where(rep, parts, 0).sum(axis=1)
    return np.all(parts >= 1, axis=1) & (total == genus(eq))


# -- counting -------------------------------------------------------------------


@dataclass
class SolutionCount:
    raw: int
    lam: Fraction
    trivial_lower: int
    fourier_raw: float | None = None
    fourier_residual: float | None = None
    routes: tuple = ("brute",)

    def as_dict(self) -> dict:
        return {"raw": self.raw, "lambda": f"{self.lam.numerator}/{self.lam.denominator}",
                "trivial_lower": self.trivial_lower, "fourier_residual": self.fourier_residual,
                "routes": list(self.routes)}


def _members(A, group: PolyGroup) -> np.ndarray:
    A = np.asarray(A)
    if A.dtype == bool:
        if A.shape != (group.size,):
            raise ValueError("mask has the wrong length")
        return np.flatnonzero(A)
    return np.unique(A.astype(np.int64))


def count_brute(A, eq: EquationSpec, group: PolyGroup) -> int:
    return len(_Solver(eq, group).tuples(_members(A, group)))


def count_fourier(A, eq: EquationSpec, group: PolyGroup) -> tuple[int, float]:
    """q^-(N+ell) sum_xi prod_i sum_{x in A} e(xi c_i x), rounded; returns (count, residual)."""
    solver = _Solver(eq, group)
    amb = solver.amb
    mem = _members(A, group)
    prod = np.ones(amb.size, dtype=complex)
    for tab in solver.dil:
        ind = np.zeros(amb.size)
        np.add.at(ind, tab[mem], 1.0)
        prod *= fourier_values(amb, ind) * amb.size
    val = prod.sum().real / amb.size
    r = round(val)
    return int(r), float(abs(val - r))


def count_solutions(A, eq: EquationSpec, group: PolyGroup | None = None, N: int | None = None,
                    check: bool = True) -> SolutionCount:
    """Exact number of solutions in A^s, brute force and (when it fits) by characters."""
    if group is None:
        if N is None:
            raise ValueError("give the group or N")
        group = group_for_q(eq.q, N)
    mem = _members(A, group)
    raw = count_brute(mem, eq, group)
    m = genus(eq) if eq.translation_invariant else 1
    out = SolutionCount(raw, Fraction(raw, group.size ** (eq.s - 1)), len(mem) ** m)
    if check:
        try:
            fr, res = count_fourier(mem, eq, group)
        except AmbientOverflow:
            return out
        out.fourier_raw, out.fourier_residual = fr, float(res)
        out.routes = ("brute", "fourier")
        if res >= FOURIER_RESIDUAL or fr != raw:
            raise InvariantViolation(f"count routes disagree: brute {raw}, characters {fr} (+-{res})")
    if eq.translation_invariant and raw < out.trivial_lower:
        raise InvariantViolation("fewer solutions than trivial ones")
    return out


def is_solution_free(A, eq: EquationSpec, group: PolyGroup, strict: bool = False):
    """(True, None) if every solution in A^s is trivial, else (False, witness tuple)."""
    tup = _Solver(eq, group).tuples(_members(A, group))
    triv = trivial_flags(eq, tup, strict)
    bad = np.flatnonzero(~triv)
    if len(bad):
        return False, tuple(int(v) for v in tup[bad[0]])
    return True, None


# -- extremal search ------------------------------------------------------------


@dataclass
class SearchRecord:
    q: int
    N: int
    coeffs: str
    best_set: list[int]
    best_size: int
    method: str
    certified: bool
    extra: dict = field(default_factory=dict)

    def to_line(self) -> str:
        members = " ".join(poly_to_hex(_poly_of(self.q, self.N, x), self.q) for x in self.best_set)
        line = (f"{self.q} {self.N} {self.coeffs} {self.best_size} {self.method} "
                f"{int(self.certified)}")
        return line + (" " + members if members else "")


def _poly_of(q: int, N: int, idx: int) -> Poly:
    return group_for_q(q, N).poly_of(int(idx))


class _Supports:
    """Distinct-element supports of all non-trivial solutions in G_N, as bitmasks."""

    def __init__(self, eq: EquationSpec, group: PolyGroup, strict: bool = False):
        tup = _Solver(eq, group).tuples(np.arange(group.size))
        bad = tup[~trivial_flags(eq, tup, strict)]
        masks = set()
        for row in bad:
            m = 0
            for v in set(int(x) for x in row):
                m |= 1 << v
            masks.add(m)
        self.by_elem: dict[int, list[int]] = {x: [] for x in range(group.size)}
        self.by_max: dict[int, list[int]] = {x: [] for x in range(group.size)}
        for m in masks:
            self.by_max[m.bit_length() - 1].append(m)
            for v in range(group.size):
                if m >> v & 1:
                    self.by_elem[v].append(m)
        self.count = len(masks)

    def can_add_max(self, cur: int, y: int) -> bool:
        """Adding y (larger than every member) keeps the set solution-free."""
        new = cur | (1 << y)
        return all(m & new != m for m in self.by_max[y])

    def can_add(self, cur: int, y: int) -> bool:
        new = cur | (1 << y)
        return all(m & new != m for m in self.by_elem[y])


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def max_solution_free_exhaustive(N: int, eq: EquationSpec, limit: int = EXHAUSTIVE_LIMIT,
                                 strict: bool = False) -> SearchRecord:
    """Largest solution-free subset of G_N by branch and bound, with 0 fixed by translation."""
    group = group_for_q(eq.q, N)
    if group.size > limit:
        raise TooLarge(f"|G_N| = {group.size} exceeds exhaustive limit {limit}")
    if not eq.translation_invariant:
        raise NotTranslationInvariant("translation pruning needs coefficients summing to zero")
    sup = _Supports(eq, group, strict)
    n = group.size
    best = [0]
    best_mask = [0]

    def dfs(cur: int, size: int, nxt: int):
        if size > best[0]:
            best[0], best_mask[0] = size, cur
        if size + (n - nxt) <= best[0]:
            return
        for y in range(nxt, n):
            if size + (n - y) <= best[0]:
                return
            if sup.can_add_max(cur, y):
                dfs(cur | (1 << y), size + 1, y + 1)

    if n and sup.can_add_max(0, 0):
        dfs(1, 1, 1)
    members = _bits(best_mask[0])
    rec = SearchRecord(eq.q, N, eq.to_hex(), members, len(members), "exhaustive", True,
                       {"supports": sup.count})
    ok, _ = is_solution_free(np.array(members, dtype=np.int64), eq, group, strict)
    if not ok:
        raise InvariantViolation("exhaustive search produced a set with a non-trivial solution")
    return rec


def max_solution_free_heuristic(N: int, eq: EquationSpec, budget: int, seed: int,
                                strict: bool = False) -> SearchRecord:
    """Greedy maximal sets over `budget` random orders (the first order is the natural one)."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    group = group_for_q(eq.q, N)
    sup = _Supports(eq, group, strict)
    rng = np.random.default_rng(seed)
    best_mask, best_size = 0, -1
    for r in range(budget):
        order = np.arange(group.size) if r == 0 else rng.permutation(group.size)
        cur = 0
        for y in order:
            if sup.can_add(cur, int(y)):
                cur |= 1 << int(y)
        size = bin(cur).count("1")
        if size > best_size:
            best_mask, best_size = cur, size
    members = _bits(best_mask)
    method = "greedy" if budget == 1 else "random-restart"
    ok, _ = is_solution_free(np.array(members, dtype=np.int64), eq, group, strict)
    if not ok:
        raise InvariantViolation("heuristic search produced a set with a non-trivial solution")
    return SearchRecord(eq.q, N, eq.to_hex(), members, len(members), method, False,
                        {"budget": budget, "seed": seed})


def bound_evaluate(N: float, s: int, ell: int, q: int, C: float = 1.0) -> float:
    """C q^N ((log N)^4 / N)^(s-2); ell is carried for bookkeeping only."""
    if N <= 1:
        raise ValueError("N must exceed 1")
    return C * q**N * (math.log(N) ** 4 / N) ** (s - 2)


# -- record store -----------------------------------------------------------------


def parse_record(line: str) -> SearchRecord:
    parts = line.split()
    if len(parts) < 6:
        raise ValueError(f"malformed record: {line!r}")
    q, N = int(parts[0]), int(parts[1])
    group = group_for_q(q, N)
    members = sorted(group.index_of(hex_to_poly(h, q)) for h in parts[6:])
    return SearchRecord(q, N, parts[2], members, int(parts[3]), parts[4], parts[5] == "1")


def verify_record(rec: SearchRecord) -> None:
    eq = EquationSpec.parse(rec.q, rec.coeffs)
    group = group_for_q(rec.q, rec.N)
    if rec.best_size != len(rec.best_set) or len(set(rec.best_set)) != len(rec.best_set):
        raise InvariantViolation("record size does not match its members")
    ok, wit = is_solution_free(np.array(rec.best_set, dtype=np.int64), eq, group)
    if not ok:
        raise InvariantViolation(f"stored set has non-trivial solution {wit}")


class RecordStore:
    """Append-only text file of search records; every record is re-verified on load."""

    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)

    def append(self, rec: SearchRecord) -> None:
        verify_record(rec)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(rec.to_line() + "\n")

    def load(self) -> list[SearchRecord]:
        if not os.path.exists(self.path):
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = parse_record(line)
                    verify_record(rec)
                    out.append(rec)
        return out

    def best(self, q: int, N: int, coeffs: str) -> SearchRecord | None:
        cands = [r for r in self.load() if (r.q, r.N, r.coeffs) == (q, N, coeffs)]
        return max(cands, key=lambda r: (r.certified, r.best_size), default=None)
