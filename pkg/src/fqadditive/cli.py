"""Command-line experiment runner.

Every run writes line-delimited JSON: one header line carrying the wall-clock
timestamp and the resolved configuration, then result records that each embed
the configuration hash.  Result records depend only on the configuration, so
two runs with the same config and seed agree byte for byte after the header.

Exit status: 0 on success, 1 when a verification check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from . import __version__
from .bohr import bohr_build, bohr_dilate, bohr_member_direct, dilate_set
from .engine import TuningConstants, run_density_iteration
from .equations import (EquationSpec, RecordStore, bound_evaluate, count_solutions, hex_to_poly,
                        is_solution_free, max_solution_free_exhaustive,
                        max_solution_free_heuristic, poly_to_hex)
from .errors import FqAdditiveError, InvariantViolation
from .fourier import convolve_direct, fourier_values, inverse_values, naive_fourier_values
from .group import PolyGroup, group_for_q
from .poly import LaurentTail
from .spectral import chang_dissect, spectrum, verify_chang
from .znz import (znz_approx_identity_check, znz_bohr_build, znz_find_regular_width,
                  znz_is_regular)

OUTPUT_DIR_ENV = "FQADDITIVE_OUTPUT_DIR"
SUBCOMMANDS = ("transform", "bohr", "count", "search", "increment", "znz", "verify")
SUITES = ("parseval", "naive", "convolution", "dilation", "chang", "counting")
LEVELS = ("fast", "oracle")


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


# -- configuration ----------------------------------------------------------------


@dataclass
class ExperimentConfig:
    subcommand: str
    q: int | None = None
    N: int | None = None
    eq: str | None = None
    tuning: dict = field(default_factory=dict)
    seed: int = 0
    budget: int = 1
    out: str | None = None
    level: str = "fast"
    params: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        """Everything that determines the results (the output path does not)."""
        d = dataclasses.asdict(self)
        d.pop("out")
        return d

    def digest(self) -> str:
        blob = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def to_text(self) -> str:
        lines = [f"subcommand = {self.subcommand}"]
        for key in ("q", "N", "eq", "seed", "budget", "out", "level"):
            val = getattr(self, key)
            if val is not None:
                lines.append(f"{key} = {val}")
        for key, val in sorted(self.tuning.items()):
            lines.append(f"tuning.{key} = {val}")
        for key, val in sorted(self.params.items()):
            if val is not None:
                lines.append(f"{key} = {json.dumps(val)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        kv = parse_config_text(text)
        if "subcommand" not in kv:
            raise UsageError("config file has no subcommand")
        cfg = cls(kv.pop("subcommand"))
        for key in ("q", "N", "seed", "budget"):
            if key in kv:
                setattr(cfg, key, int(kv.pop(key)))
        for key in ("eq", "out", "level"):
            if key in kv:
                setattr(cfg, key, kv.pop(key))
        cfg.tuning = {k[7:]: v for k, v in kv.items() if k.startswith("tuning.")}
        cfg.tuning = TuningConstants.from_dict(cfg.tuning).to_dict() if cfg.tuning else {}
        cfg.params = {k: json.loads(v) for k, v in kv.items() if not k.startswith("tuning.")}
        return cfg


def parse_config_text(text: str) -> dict:
    """Plain ``key = value`` lines; blank lines and lines starting with # are skipped."""
    out = {}
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = val
    return out


# -- argument parsing ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, q=True, N=True, eq=False):
    if q:
        p.add_argument("--q", type=int, help="field size")
    if N:
        p.add_argument("--N", type=int, help="degree bound of G_N")
    if eq:
        p.add_argument("--eq", help="coefficients, comma separated hex digit strings")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout, or $%s/<subcommand>.jsonl)"
                   % OUTPUT_DIR_ENV)
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--level", choices=LEVELS, default="fast",
                   help="oracle adds slow independent cross-checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fqadditive", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)

    p = sub.add_parser("transform", help="Fourier transform and spectrum of a set")
    _common(p)
    p.add_argument("--set", help="members, comma separated hex (default: random set)")
    p.add_argument("--density", type=float, default=0.5, help="density of the random set")
    p.add_argument("--eta", type=float, default=0.25, help="spectrum threshold")

    p = sub.add_parser("bohr", help="build a Bohr set, optionally dilated")
    _common(p)
    p.add_argument("--gamma", action="append", default=[],
                   help="frequency: tail digits b_1b_2... or num/den in hex; repeatable")
    p.add_argument("--kappa", default="1", help="width, or comma separated widths")
    p.add_argument("--dilate", help="dilate by this polynomial (hex)")
    p.add_argument("--list", action="store_true", help="emit the members")

    p = sub.add_parser("count", help="count solutions inside a set")
    _common(p, eq=True)
    p.add_argument("--set", required=False, help="members, comma separated hex")

    p = sub.add_parser("search", help="largest set without non-trivial solutions")
    _common(p, eq=True)
    p.add_argument("--mode", choices=("exhaustive", "heuristic"), default="heuristic")
    p.add_argument("--budget", type=int, default=1)
    p.add_argument("--strict", action="store_true", help="strict notion of trivial solution")
    p.add_argument("--store", help="append the result to this record file")

    p = sub.add_parser("increment", help="run the density-increment iteration")
    _common(p, eq=True)
    p.add_argument("--set", help="members (default: heuristic search result)")
    p.add_argument("--budget", type=int, default=4, help="search budget when --set is absent")
    p.add_argument("--tune", action="append", default=[], metavar="KEY=VALUE",
                   help="override a tuning constant; repeatable")

    p = sub.add_parser("znz", help="Bohr sets in Z/NZ")
    _common(p, q=False)
    p.add_argument("--gammas", default="1", help="comma separated frequencies")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--metric", choices=("exp", "norm"), default="exp")
    p.add_argument("--action", choices=("build", "regular", "find-width", "identity"),
                   default="find-width")
    p.add_argument("--kappa", type=float, default=None,
                   help="inner width factor for the identity check (default 1/(200k))")

    p = sub.add_parser("verify", help="randomized self-checks against slow oracles")
    _common(p)
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


PARAM_KEYS = {
    "transform": ("set", "density", "eta"),
    "bohr": ("gamma", "kappa", "dilate", "list"),
    "count": ("set",),
    "search": ("mode", "strict", "store"),
    "increment": ("set", "tune"),
    "znz": ("gammas", "rho", "metric", "action", "kappa"),
    "verify": ("suite", "trials", "tol"),
}


def parse_args(argv) -> ExperimentConfig:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand is None:
        raise UsageError("a subcommand is required: " + ", ".join(SUBCOMMANDS))
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_cfg = ExperimentConfig.from_text(fh.read())
        except OSError as exc:
            raise UsageError(f"--config: {exc}") from exc
        if file_cfg.subcommand != args.subcommand:
            raise UsageError(f"--config: file is for {file_cfg.subcommand!r}")
        # flags given explicitly win; re-parse with the file's values as defaults
        sp = parser._subparsers._group_actions[0].choices[args.subcommand]
        defaults = {k: getattr(file_cfg, k) for k in ("q", "N", "eq", "seed", "budget", "out", "level")
                    if getattr(file_cfg, k) is not None and k in vars(args)}
        defaults.update({k: v for k, v in file_cfg.params.items() if k in vars(args)})
        unknown = set(file_cfg.params) - set(vars(args))
        if unknown:
            raise UsageError(f"--config: unknown keys {sorted(unknown)}")
        sp.set_defaults(**defaults)
        args = parser.parse_args(argv)
        tuning = dict(file_cfg.tuning)
    else:
        tuning = {}
    for item in getattr(args, "tune", []) or []:
        if "=" not in item:
            raise UsageError(f"--tune: expected KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        tuning[k.strip()] = v.strip()
    if tuning:
        try:
            tuning = TuningConstants.from_dict(tuning).to_dict()
        except (TypeError, ValueError) as exc:
            raise UsageError(f"--tune: {exc}") from exc
    cfg = ExperimentConfig(args.subcommand, getattr(args, "q", None), getattr(args, "N", None),
                           getattr(args, "eq", None), tuning, args.seed,
                           getattr(args, "budget", 1), args.out, args.level)
    cfg.params = {k: getattr(args, k) for k in PARAM_KEYS[args.subcommand]
                  if k != "tune" and getattr(args, k) is not None}
    return cfg


# -- helpers --------------------------------------------------------------------------


def _need(cfg: ExperimentConfig, *keys):
    for k in keys:
        if getattr(cfg, k) is None:
            raise UsageError(f"{cfg.subcommand}: --{k} is required")


def _group(cfg: ExperimentConfig) -> PolyGroup:
    _need(cfg, "q", "N")
    try:
        return group_for_q(cfg.q, cfg.N)
    except ValueError as exc:
        raise UsageError(f"--q/--N: {exc}") from exc


def _equation(cfg: ExperimentConfig) -> EquationSpec:
    _need(cfg, "eq")
    try:
        return EquationSpec.parse(cfg.q, cfg.eq)
    except ValueError as exc:
        raise UsageError(f"--eq: {exc}") from exc


def parse_set(group: PolyGroup, text: str, flag: str = "--set") -> np.ndarray:
    if text is None or not text.strip():
        return np.zeros(0, dtype=np.int64)
    try:
        idx = [group.index_of(hex_to_poly(t, group.q)) for t in text.split(",")]
    except (ValueError, IndexError) as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    return np.array(sorted(set(idx)), dtype=np.int64)


def format_set(group: PolyGroup, members) -> list[str]:
    return [poly_to_hex(group.poly_of(int(i)), group.q) for i in members]


def parse_frequency(group: PolyGroup, text: str) -> LaurentTail:
    ctx = group.ctx
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return LaurentTail.rational(ctx, hex_to_poly(num, ctx.q), hex_to_poly(den, ctx.q))
        digits = [int("0123456789abcdef".index(ch)) for ch in text.strip().lower()]
        if any(d >= ctx.q for d in digits):
            raise ValueError(f"digit out of range for q={ctx.q}")
        return LaurentTail(ctx, digits, exact=True)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--gamma {text!r}: {exc}") from exc


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _float(x: float, digits: int = 12) -> float:
    return float(round(float(x), digits))


# -- subcommands ------------------------------------------------------------------------


def run_transform(cfg: ExperimentConfig):
    group = _group(cfg)
    if cfg.params.get("set"):
        A = group.mask(parse_set(group, cfg.params["set"]))
    else:
        rng = np.random.default_rng(cfg.seed)
        A = rng.random(group.size) < cfg.params.get("density", 0.5)
    f = A.astype(float)
    fh = fourier_values(group, f)
    parseval_err = abs(np.sum(np.abs(fh) ** 2) - np.mean(f * f))
    spec = spectrum(f, cfg.params.get("eta", 0.25), group)
    rec = {"type": "transform", "size": int(A.sum()), "density": _float(A.mean()),
           "parseval_error": _float(parseval_err, 15), "l1": _float(spec.norm1),
           "spectrum": [[poly_to_hex(_dual_digits(group, int(i)), group.q), _float(m)]
                        for i, m in zip(spec.indices, spec.magnitudes)]}
    ok = parseval_err <= 1e-9
    if cfg.level == "oracle":
        if group.size > 4096:
            raise UsageError("--level oracle: the naive transform needs |G| <= 4096")
        err = float(np.max(np.abs(naive_fourier_values(group, f) - fh)))
        rec["naive_max_error"] = _float(err, 15)
        ok = ok and err <= 1e-12
    yield rec
    if not ok:
        raise VerificationFailure("transform checks failed")


def _dual_digits(group: PolyGroup, idx: int):
    return group.poly_of(idx)  # dual index digits b_1 b_2 ... share the group's encoding


def run_bohr(cfg: ExperimentConfig):
    group = _group(cfg)
    gammas = [parse_frequency(group, g) for g in cfg.params.get("gamma") or []]
    try:
        kappa = [int(k) for k in str(cfg.params.get("kappa", "1")).split(",")]
    except ValueError as exc:
        raise UsageError(f"--kappa: {exc}") from exc
    if len(kappa) == 1:
        kappa = kappa * len(gammas)
    if len(kappa) != len(gammas):
        raise UsageError("--kappa: give one width or one per --gamma")
    B = bohr_build(gammas, kappa, group)
    floor = group.q ** max(0, group.N - sum(kappa))
    rec = {"type": "bohr", "rank": B.rank, "width": B.width, "dim": B.dim, "size": B.size,
           "size_floor": floor, "basis": format_set(group, B.basis_indices)}
    ok = B.size >= floor
    if cfg.params.get("list"):
        rec["members"] = format_set(group, B.indices)
    if cfg.level == "oracle":
        direct = np.array([bohr_member_direct(B, x) for x in range(group.size)])
        rec["direct_agrees"] = bool(np.array_equal(direct, B.mask()))
        ok = ok and rec["direct_agrees"]
    yield rec
    if cfg.params.get("dilate"):
        c = hex_to_poly(cfg.params["dilate"], group.q)
        D = bohr_dilate(B, c)
        image = group.mask(dilate_set(group, B.indices, c))
        drec = {"type": "dilation", "c": poly_to_hex(c, group.q), "rank": D.rank, "size": D.size,
                "rank_bound": B.rank + group.q ** (len(c) - 1),
                "matches_image": bool(np.array_equal(image, D.mask()))}
        ok = ok and drec["matches_image"] and D.rank <= drec["rank_bound"]
        if cfg.params.get("list"):
            drec["members"] = format_set(group, D.indices)
        yield drec
    if not ok:
        raise VerificationFailure("Bohr set checks failed")


def run_count(cfg: ExperimentConfig):
    group = _group(cfg)
    eq = _equation(cfg)
    A = parse_set(group, cfg.params.get("set"))
    try:
        res = count_solutions(A, eq, group, check=True)
    except InvariantViolation as exc:
        raise VerificationFailure(str(exc)) from exc
    rec = {"type": "count", "size": len(A), **res.as_dict()}
    if rec["fourier_residual"] is not None:
        rec["fourier_residual"] = _float(rec["fourier_residual"], 15)
    free, witness = is_solution_free(A, eq, group)
    rec["solution_free"] = free
    rec["witness"] = None if witness is None else format_set(group, witness)
    yield rec


def run_search(cfg: ExperimentConfig):
    group = _group(cfg)
    eq = _equation(cfg)
    strict = bool(cfg.params.get("strict"))
    if cfg.params.get("mode") == "exhaustive":
        rec = max_solution_free_exhaustive(cfg.N, eq, strict=strict)
    else:
        rec = max_solution_free_heuristic(cfg.N, eq, cfg.budget, cfg.seed, strict=strict)
    free, _ = is_solution_free(np.array(rec.best_set, dtype=np.int64), eq, group, strict)
    out = {"type": "search", "method": rec.method, "certified": rec.certified,
           "size": rec.best_size, "members": format_set(group, rec.best_set),
           "solution_free": free}
    if cfg.N > 1:
        out["bound"] = _float(bound_evaluate(cfg.N, eq.s, eq.ell, cfg.q))
    if cfg.params.get("store"):
        RecordStore(cfg.params["store"]).append(rec)
    yield out
    if not free:
        raise VerificationFailure("search result has a non-trivial solution")


def run_increment(cfg: ExperimentConfig):
    group = _group(cfg)
    eq = _equation(cfg)
    tuning = TuningConstants.from_dict(cfg.tuning) if cfg.tuning else TuningConstants()
    if cfg.params.get("set"):
        A = parse_set(group, cfg.params["set"])
    else:
        A = np.array(max_solution_free_heuristic(cfg.N, eq, cfg.budget, cfg.seed).best_set,
                     dtype=np.int64)
    traj = run_density_iteration(group.mask(A), eq, group, tuning,
                                 exact_lambda=cfg.level == "oracle" or group.size <= 4096)
    yield {"type": "start", **traj.config}
    yield from traj.to_records()
    if not traj.invariants["ok"]:
        raise VerificationFailure("; ".join(traj.invariants["violations"]) or "step cap exceeded")


def run_znz(cfg: ExperimentConfig):
    _need(cfg, "N")
    try:
        gammas = [int(g) for g in str(cfg.params["gammas"]).split(",") if g.strip()]
    except ValueError as exc:
        raise UsageError(f"--gammas: {exc}") from exc
    rho, metric = cfg.params["rho"], cfg.params["metric"]
    action = cfg.params["action"]
    B = znz_bohr_build(cfg.N, gammas, rho, metric)
    if action == "build":
        yield {"type": "znz-bohr", "size": B.size, "rank": B.rank, "members": B.members.tolist(),
               "size_floor_ratio": _float(B.size_floor_ratio)}
        return
    if action == "regular":
        r = znz_is_regular(B)
        yield {"type": "znz-regular", "size": B.size, "regular": r.regular,
               "worst_eta": r.worst_eta, "worst_excess": _float(r.worst_excess)}
        return
    eps, Br = znz_find_regular_width(cfg.N, gammas, rho, metric=metric)
    recheck = znz_is_regular(Br).regular
    rec = {"type": "znz-width", "eps": eps, "width": _float(Br.rho), "size": Br.size,
           "regular": recheck}
    yield rec
    if not recheck:
        raise VerificationFailure("regular width fails its re-check")
    if action == "identity":
        k = max(Br.rank, 1)
        kap = cfg.params.get("kappa") or 1.0 / (200 * k)
        Bp = Br.with_width(kap * Br.rho)
        rng = np.random.default_rng(cfg.seed)
        f = rng.choice([-1.0, 1.0], size=cfg.N)
        r = znz_approx_identity_check(f, Br, Bp, kap)
        yield {"type": "znz-identity", "eps": kap, "inner_size": Bp.size,
               "error": _float(r.error, 15), "ratio": _float(r.ratio)}


def run_verify(cfg: ExperimentConfig):
    group = _group(cfg)
    rng = np.random.default_rng(cfg.seed)
    suite, trials, tol = cfg.params["suite"], cfg.params["trials"], cfg.params["tol"]
    worst = 0.0
    for _ in range(trials):
        f = rng.normal(size=group.size) + 1j * rng.normal(size=group.size)
        g = rng.normal(size=group.size) + 1j * rng.normal(size=group.size)
        if suite == "parseval":
            fh, gh = fourier_values(group, f), fourier_values(group, g)
            lhs, rhs = np.sum(fh * np.conj(gh)), np.mean(f * np.conj(g))
            err = abs(lhs - rhs) / max(abs(rhs), np.mean(np.abs(f) * np.abs(g)))
            err = max(err, float(np.max(np.abs(inverse_values(group, fh) - f))))
        elif suite == "naive":
            if group.size > 4096:
                raise UsageError("--suite naive needs |G| <= 4096")
            err = float(np.max(np.abs(naive_fourier_values(group, f) - fourier_values(group, f))))
        elif suite == "convolution":
            if group.size > 4096:
                raise UsageError("--suite convolution needs |G| <= 4096")
            conv = convolve_direct(group, f, g) / group.size  # B = G, so mu_G(B) = 1
            err = float(np.max(np.abs(fourier_values(group, conv)
                                      - fourier_values(group, f) * fourier_values(group, g))))
        elif suite == "dilation":
            err = _verify_dilation(group, rng)
        elif suite == "chang":
            err = _verify_chang(group, rng)
        else:
            err = _verify_counting(group, rng)
        worst = max(worst, err)
    yield {"type": "verify", "suite": suite, "trials": trials, "max_error": _float(worst, 15),
           "tol": tol, "ok": worst <= tol}
    if worst > tol:
        raise VerificationFailure(f"{suite}: max error {worst:.3e} above {tol:.1e}")


def _verify_dilation(group: PolyGroup, rng) -> float:
    q, N = group.q, group.N
    d = int(rng.integers(0, min(2, N - 1) + 1))
    c = tuple(int(v) for v in rng.integers(0, q, size=d)) + (int(rng.integers(1, q)),)
    xi = LaurentTail(group.ctx, [int(v) for v in rng.integers(0, q, size=N + 2)], exact=True)
    B = bohr_build([xi], int(rng.integers(1, 3)) + d, group)
    if B.dim and np.any(B.basis[:, N - d:] != 0):
        return 0.0
    image = group.mask(dilate_set(group, B.indices, c))
    return 0.0 if np.array_equal(image, bohr_dilate(B, c).mask()) else 1.0


def _verify_chang(group: PolyGroup, rng) -> float:
    D = rng.random(group.size) < rng.uniform(0.05, 0.5)
    D[0] = True
    try:
        res = chang_dissect(D, float(rng.uniform(0.2, 0.6)), group)
        dis, cov = verify_chang(res)
    except FqAdditiveError:
        return 0.0
    return 0.0 if dis and cov else 1.0


def _verify_counting(group: PolyGroup, rng) -> float:
    q = group.q
    s = int(rng.integers(3, 5))
    vals = [int(v) for v in rng.integers(1, q, size=s)] if q > 2 else [1] * s
    eq = EquationSpec.from_ints(group.ctx, vals)
    A = np.flatnonzero(rng.random(group.size) < 0.3)
    try:
        res = count_solutions(A, eq, group, check=True)
    except InvariantViolation:
        return 1.0
    return 0.0 if res.fourier_residual is None else float(res.fourier_residual)


RUNNERS = {"transform": run_transform, "bohr": run_bohr, "count": run_count,
           "search": run_search, "increment": run_increment, "znz": run_znz,
           "verify": run_verify}


# -- dispatch ---------------------------------------------------------------------------


def _open_output(cfg: ExperimentConfig):
    path = cfg.out
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{cfg.subcommand}.jsonl")
    if path is None:
        return sys.stdout, False
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    return open(path, "w", encoding="utf-8"), True


def _dumps(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, default=_json_default)


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, Fraction):
        return _frac(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def cmd_dispatch(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    digest = cfg.digest()
    try:
        fh, close = _open_output(cfg)
    except OSError as exc:
        print(f"usage error: --out: {exc}", file=sys.stderr)
        return 2
    status = 0
    try:
        header = {"type": "header", "timestamp": datetime.now(timezone.utc).isoformat(),
                  "config": cfg.resolved(), "config_hash": digest}
        fh.write(_dumps(header) + "\n")
        try:
            for rec in RUNNERS[cfg.subcommand](cfg):
                fh.write(_dumps({**rec, "config_hash": digest}) + "\n")
        except UsageError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            status = 2
        except (VerificationFailure, InvariantViolation) as exc:
            print(f"verification failed: {exc}", file=sys.stderr)
            status = 1
        except (FqAdditiveError, ValueError) as exc:
            print(f"usage error: {type(exc).__name__}: {exc}", file=sys.stderr)
            status = 2
    finally:
        fh.flush()
        if close:
            fh.close()
    return status


def main() -> None:
    sys.exit(cmd_dispatch())


if __name__ == "__main__":
    main()
