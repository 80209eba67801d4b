"""Command-line entry point: ``nbodystab {check-paper,scan,analyze,threshold}``.

Exit codes: 0 success, 1 analysis failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .central import (
    GASCHEAU_THRESHOLD,
    OMEGA,
    CentralConfiguration,
    central_configuration,
    central_residual,
    closed_form_AD,
    closed_form_det,
    closed_form_trace,
    collinear_seed,
    equilateral,
    find_central,
    gascheau,
    lagrange,
    lagrange_hessian_closed_form,
    masses_for_mu,
    orthogonal_triangle_S,
    restricted_AD,
    scaled_hessian_T,
)
from .core import Configuration, MassSystem, build_subspaces, center, complex_mass_inner
from .exceptions import NBodyError, NotFoundError, SearchFailureError
from .linstab import classify_motion, monodromy
from .orbits import homographic_motion
from .potential import Potential, hessian, value

log = logging.getLogger("nbodystab")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SCAN_COLUMNS = (
    ["mu", "e", "m1", "m2", "m3", "detAD", "trAD"]
    + [f"mult_re_{i}" for i in range(1, 5)]
    + [f"mult_im_{i}" for i in range(1, 5)]
    + ["class", "min_margin"]
)


class UsageError(Exception):
    """Bad arguments or malformed input; maps to exit code 2."""


# ---------------------------------------------------------------- formatting


def fmt(x) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- check-paper


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(float(np.max(np.abs(b))), np.finfo(float).tiny)
    return float(np.max(np.abs(a - b))) / scale


def closed_form_checks(rng_seed: int = 0, n_random: int = 100) -> list[CheckResult]:
    """Regression battery for the Lagrange-triangle closed forms."""
    rng = np.random.default_rng(rng_seed)
    triples = [(1.0, 2.0, 3.0), (1.0, 1.0, 1.0)] + [tuple(rng.uniform(0.05, 5.0, 3)) for _ in range(n_random)]
    out = []

    err = _rel(scaled_hessian_T((1, 2, 3)), lagrange_hessian_closed_form((1, 2, 3)))
    out.append(CheckResult("A-matrix (1,2,3)", err <= 1e-12, f"max rel err {err:.2e}"))

    worst_orth = 0.0
    worst_dist = 0.0
    for m in triples:
        S = orthogonal_triangle_S(m)
        T = Configuration.from_complex([1, OMEGA, OMEGA**2], S.system)
        one = Configuration.from_complex([1, 1, 1], S.system)
        scale = S.norm() * max(T.norm(), one.norm())
        worst_orth = max(worst_orth, abs(complex_mass_inner(S, T)) / scale, abs(complex_mass_inner(S, one)) / scale)
        m1, m2, m3 = m
        z = S.as_complex()
        expect = {
            (0, 1): m3**2 * (m2**2 + m1 * m2 + m1**2),
            (0, 2): m2**2 * (m3**2 + m1 * m3 + m1**2),
            (1, 2): m1**2 * (m3**2 + m2 * m3 + m2**2),
        }
        for (i, j), val in expect.items():
            worst_dist = max(worst_dist, abs(abs(z[i] - z[j]) ** 2 - val) / val)
    out.append(CheckResult("S orthogonal to T and 1", worst_orth <= 1e-12, f"max rel {worst_orth:.2e}"))
    out.append(CheckResult("S distance formulas", worst_dist <= 1e-12, f"max rel {worst_dist:.2e}"))
    z123 = orthogonal_triangle_S((1, 2, 3)).as_complex()
    r12 = abs(z123[0] - z123[1]) ** 2
    out.append(CheckResult("S r12^2 = 63 at (1,2,3)", abs(r12 - 63) <= 1e-12 * 63, f"r12^2 = {float(r12)!r}"))

    worst_abcd = 0.0
    worst_tr = 0.0
    worst_det = 0.0
    for m in triples:
        num = restricted_AD(m)
        ref = closed_form_AD(m)
        worst_abcd = max(worst_abcd, _rel(num.matrix(), ref.matrix()))
        worst_tr = max(worst_tr, abs(num.trace - closed_form_trace(m)) / abs(closed_form_trace(m)))
        det_scale = max(abs(num.a * num.d), abs(num.b * num.c))
        worst_det = max(worst_det, abs(num.det - closed_form_det(m)) / det_scale)
    out.append(CheckResult("a/b/c/d closed forms", worst_abcd <= 1e-10, f"max rel {worst_abcd:.2e}"))
    out.append(CheckResult("trace identity", worst_tr <= 1e-10, f"max rel {worst_tr:.2e}"))
    out.append(CheckResult("det identity", worst_det <= 1e-10, f"max rel (to |ad|) {worst_det:.2e}"))

    det111 = restricted_AD((1, 1, 1)).det
    out.append(CheckResult("det A_D (1,1,1) = 5184", abs(det111 - 5184) <= 1e-9 * 5184, f"det = {float(det111)!r}"))

    g = gascheau((1, 2, 3))
    cc = lagrange((1, 2, 3))
    ok = abs(g.mu - 36 / 11) <= 1e-14 and g.below_threshold and cc.strongly_nondegenerate
    out.append(CheckResult("mu(1,2,3) = 36/11, strongly ND", ok,
                           f"mu = {g.mu!r}, strongly_nondegenerate = {cc.strongly_nondegenerate}"))

    bad = 0
    grid = triples + [masses_for_mu(mu) for mu in np.linspace(3.0, 4.0, 41) if abs(mu - GASCHEAU_THRESHOLD) > 1e-9]
    for m in grid:
        g = gascheau(m)
        det = restricted_AD(m).det
        nd = lagrange(m).strongly_nondegenerate
        if not (g.below_threshold == g.ratio_above == (det > 0) == nd):
            bad += 1
    out.append(CheckResult("threshold equivalence", bad == 0, f"{bad} disagreements over {len(grid)} triples"))
    return out


def cmd_check_paper(args) -> int:
    if args.kappa not in (None, 1.0):
        raise UsageError("the closed forms are Newtonian; kappa must be 1")
    results = closed_form_checks()
    if args.format == "json":
        text = json.dumps(_jsonable([r.__dict__ for r in results]), indent=2) + "\n"
    else:
        text = "".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}\n" for r in results)
    _emit(text, args.out)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"nbodystab: failed identities: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


# ---------------------------------------------------------------- scan


@dataclass(frozen=True)
class ScanSpec:
    """A grid of Lagrange motions: mass triples (or ``mu`` values) times eccentricities."""

    e_values: tuple
    mu_values: tuple = ()
    masses: tuple = ()
    kappa: float = 1.0
    tol: float = 1e-12

    def __post_init__(self):
        if bool(self.mu_values) == bool(self.masses):
            raise UsageError("give exactly one of --mu or --masses")
        if not self.e_values:
            raise UsageError("need at least one eccentricity")
        for e in self.e_values:
            if not 0 <= e < 1:
                raise UsageError(f"eccentricity must be in [0, 1), got {e}")
        for mu in self.mu_values:
            if not mu >= 3:
                raise UsageError(f"mu must be >= 3, got {mu}")
        for m in self.masses:
            if len(m) != 3 or not all(x > 0 for x in m):
                raise UsageError(f"mass triples need three positive entries, got {m}")
        if self.kappa != 1.0:
            raise UsageError("scans use the Newtonian closed forms; kappa must be 1")
        if not self.tol > 0:
            raise UsageError("tolerance must be positive")

    def cells(self) -> list[tuple[tuple[float, float, float], float, float]]:
        """``(masses, e, mu)`` in mu-major order; ``mu`` is the requested value when scanning in ``mu``."""
        if self.mu_values:
            triples = [(masses_for_mu(mu), float(mu)) for mu in self.mu_values]
        else:
            triples = [(tuple(map(float, m)), gascheau(m).mu) for m in self.masses]
        return [(m, float(e), mu) for m, mu in triples for e in self.e_values]


@dataclass
class ScanRow:
    mu: float
    e: float
    masses: tuple
    det_AD: float
    trace_AD: float
    multipliers: list = field(default_factory=list)
    classification: str = ""
    min_margin: float = float("nan")

    @property
    def det_AD_sign(self) -> int:
        return int(np.sign(self.det_AD))

    def as_record(self) -> dict:
        rec = {"mu": self.mu, "e": self.e, "m1": self.masses[0], "m2": self.masses[1], "m3": self.masses[2],
               "detAD": self.det_AD, "trAD": self.trace_AD}
        for i, z in enumerate(self.multipliers, 1):
            rec[f"mult_re_{i}"] = z.real
        for i, z in enumerate(self.multipliers, 1):
            rec[f"mult_im_{i}"] = z.imag
        rec["class"] = self.classification
        rec["min_margin"] = self.min_margin
        return rec


def scan_cell(masses, e: float, tol: float = 1e-12, mu: float | None = None) -> ScanRow:
    ad = restricted_AD(masses)
    motion = homographic_motion(lagrange(masses), e)
    rep = monodromy(motion, "D", tol)
    return ScanRow(gascheau(masses).mu if mu is None else mu, e, tuple(masses), ad.det, ad.trace,
                   [complex(z) for z in rep.multipliers], rep.classification, rep.min_margin)


def _scan_cell_args(args):
    return scan_cell(*args)


def run_scan(spec: ScanSpec, jobs: int = 1) -> list[ScanRow]:
    """All cells of ``spec`` in mu-major order (worker completion order does not matter)."""
    work = [(m, e, spec.tol, mu) for m, e, mu in spec.cells()]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
            return list(pool.map(_scan_cell_args, work))
    return [scan_cell(*w) for w in work]


def rows_to_csv(rows: list[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        rec = row.as_record()
        writer.writerow([v if isinstance(v, str) else fmt(v) for v in (rec[c] for c in SCAN_COLUMNS)])
    return buf.getvalue()


def rows_to_json(rows: list[ScanRow]) -> str:
    return json.dumps([_jsonable(r.as_record()) for r in rows], indent=2) + "\n"


def _float_list(text: str, name: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None


def cmd_scan(args) -> int:
    masses = ()
    if args.masses:
        masses = tuple(_float_list(m, "--masses") for m in args.masses)
    spec = ScanSpec(
        e_values=_float_list(args.e, "--e"),
        mu_values=_float_list(args.mu, "--mu") if args.mu else (),
        masses=masses,
        kappa=1.0 if args.kappa is None else args.kappa,
        tol=args.tol,
    )
    rows = run_scan(spec, args.jobs)
    _emit(rows_to_json(rows) if args.format == "json" else rows_to_csv(rows), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- analyze


def _field(cfg: dict, name: str, kind, required: bool = False, default=None):
    if name not in cfg:
        if required:
            raise UsageError(f"missing required field {name!r}")
        return default
    val = cfg[name]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise UsageError(f"field {name!r} has the wrong type ({type(val).__name__})")
    return val


def load_config(text: str, source: str = "<config>") -> dict:
    """Parse and validate an analysis config; errors name the line or field."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"{source}: top level must be an object")
    masses = _field(cfg, "masses", list, required=True)
    if len(masses) < 2 or not all(isinstance(m, (int, float)) and not isinstance(m, bool) and m > 0 for m in masses):
        raise UsageError("field 'masses' must list at least two positive numbers")
    kappa = float(_field(cfg, "kappa", (int, float), default=1.0))
    if not kappa > 0:
        raise UsageError("field 'kappa' must be positive")
    named = _field(cfg, "named", str)
    positions = _field(cfg, "positions", list)
    if (named is None) == (positions is None):
        raise UsageError("give exactly one of 'positions' or 'named'")
    if named is not None and named not in ("equilateral", "collinear", "isosceles"):
        raise UsageError(f"field 'named' must be equilateral, collinear or isosceles, got {named!r}")
    if named in ("equilateral", "isosceles") and len(masses) != 3:
        raise UsageError(f"field 'named': {named} needs three masses")
    if positions is not None:
        ok = len(positions) == len(masses) and all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
            for p in positions
        )
        if not ok:
            raise UsageError("field 'positions' must hold one [x, y] pair per mass")
    height = float(_field(cfg, "height", (int, float), default=np.sqrt(3.0)))
    orbit = _field(cfg, "orbit", dict)
    if orbit is not None:
        e = _field(orbit, "e", (int, float), default=0.0)
        a = _field(orbit, "a", (int, float), default=1.0)
        if not 0 <= e < 1:
            raise UsageError("field 'orbit.e' must be in [0, 1)")
        if not a > 0:
            raise UsageError("field 'orbit.a' must be positive")
        orbit = {"e": float(e), "a": float(a)}
    return {"masses": [float(m) for m in masses], "kappa": kappa, "named": named,
            "positions": positions, "height": height, "orbit": orbit}


def _initial_configuration(cfg: dict, system: MassSystem, U: Potential) -> Configuration:
    named = cfg["named"]
    if named is None:
        return center(Configuration.from_positions(np.asarray(cfg["positions"], dtype=float), system))
    if named == "equilateral":
        return equilateral(system)
    if named == "isosceles":
        h = cfg["height"]
        return center(Configuration.from_complex([-1.0, 1.0, 1j * h], system))
    seed = collinear_seed(system)
    res, _ = central_residual(U, seed)
    if res <= 1e-12:
        return seed
    log.info("collinear seed is not central (residual %.2e); refining", res)
    found = find_central(U, seed)
    return found.config.scale(seed.norm())


def analyze(cfg: dict, tol: float = 1e-12) -> dict:
    system = MassSystem(tuple(cfg["masses"]), 2)
    U = Potential(system, cfg["kappa"])
    x = _initial_configuration(cfg, system, U)
    value(U, x)
    residual, lam = central_residual(U, x)
    delta, K, D = build_subspaces(x)
    h = hessian(U, x)
    report = {
        "masses": cfg["masses"],
        "kappa": cfg["kappa"],
        "positions": x.positions.tolist(),
        "central_residual": residual,
        "lambda": lam,
        "potential": value(U, x),
        "moment_of_inertia": x.norm() ** 2,
        "is_central": residual <= 1e-10,
        "spectra": {"Delta": h.spectrum(delta), "K": h.spectrum(K), "D": h.spectrum(D)},
        "strongly_nondegenerate": None,
        "strong_minimizer": None,
        "gascheau_mu": gascheau(cfg["masses"]).mu if system.n_bodies == 3 else None,
    }
    cc: CentralConfiguration | None = None
    if report["is_central"]:
        cc = central_configuration(U, x)
        report["strongly_nondegenerate"] = cc.strongly_nondegenerate
        report["strong_minimizer"] = cc.strong_minimizer
    if cfg["orbit"] is not None:
        if cc is None:
            raise SearchFailureError("an orbit needs a central configuration; this one is not central")
        motion = homographic_motion(cc, cfg["orbit"]["e"], cfg["orbit"]["a"])
        report["orbit"] = {**cfg["orbit"], "period": motion.period, **classify_motion(motion, tol).to_dict()}
    return _jsonable(report)


def cmd_analyze(args) -> int:
    try:
        text = sys.stdin.read() if args.config == "-" else open(args.config).read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror}") from None
    cfg = load_config(text, args.config)
    if args.kappa is not None:
        cfg["kappa"] = args.kappa
    report = analyze(cfg, args.tol)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK


# ---------------------------------------------------------------- threshold

_ALLOWED = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Add, ast.Sub,
            ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd, ast.Load)


def parse_family(text: str):
    """Turn ``"1,m,2m"`` into a callable ``m -> (m1, m2, m3)``.

    Each entry is an arithmetic expression in ``m``; ``2m`` means ``2*m``.
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or not all(parts):
        raise UsageError(f"family needs three comma-separated entries, got {text!r}")
    trees = []
    for p in parts:
        src = re.sub(r"(\d|\))\s*(m\b|\()", r"\1*\2", p)
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError:
            raise UsageError(f"cannot parse family entry {p!r}") from None
        for node in ast.walk(tree):
            if not isinstance(node, _ALLOWED) or (isinstance(node, ast.Name) and node.id != "m"):
                raise UsageError(f"family entry {p!r} may only use numbers, m and + - * / **")
        trees.append(compile(tree, "<family>", "eval"))

    def family(m: float) -> tuple[float, float, float]:
        return tuple(float(eval(code, {"__builtins__": {}}, {"m": m})) for code in trees)

    return family


@dataclass(frozen=True)
class ThresholdResult:
    family: str
    m_lo: float
    m_hi: float
    mu_lo: float
    mu_hi: float
    iterations: int

    @property
    def mu(self) -> float:
        return 0.5 * (self.mu_lo + self.mu_hi)

    @property
    def width(self) -> float:
        return abs(self.mu_hi - self.mu_lo)

    def to_dict(self) -> dict:
        return {"family": self.family, "m_bracket": [self.m_lo, self.m_hi], "mu_bracket": [self.mu_lo, self.mu_hi],
                "mu": self.mu, "width": self.width, "offset_from_27_8": self.mu - GASCHEAU_THRESHOLD,
                "iterations": self.iterations}


def threshold_search(family, lo: float, hi: float, width: float = 1e-10, label: str = "", max_iter: int = 200) -> ThresholdResult:
    """Bisect the sign change of ``det A_D`` along ``family`` on ``[lo, hi]``."""

    def det(m):
        masses = family(m)
        if not all(x > 0 for x in masses):
            raise UsageError(f"family gives non-positive masses {masses} at m={m}")
        return restricted_AD(masses).det

    def mu(m):
        return gascheau(family(m)).mu

    f_lo, f_hi = det(lo), det(hi)
    if f_lo == 0:
        return ThresholdResult(label, lo, lo, mu(lo), mu(lo), 0)
    if f_hi == 0:
        return ThresholdResult(label, hi, hi, mu(hi), mu(hi), 0)
    if np.sign(f_lo) == np.sign(f_hi):
        raise NotFoundError(f"det A_D does not change sign on [{lo}, {hi}] (mu from {mu(lo):.6g} to {mu(hi):.6g})")
    it = 0
    while abs(mu(hi) - mu(lo)) > width and it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = det(mid)
        if f_mid == 0:
            lo = hi = mid
            break
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        it += 1
    return ThresholdResult(label, lo, hi, mu(lo), mu(hi), it)


def cmd_threshold(args) -> int:
    if args.kappa not in (None, 1.0):
        raise UsageError("the det A_D threshold is Newtonian; kappa must be 1")
    family = parse_family(args.family)
    res = threshold_search(family, args.lo, args.hi, label=args.family)
    if args.format == "json":
        text = json.dumps(_jsonable(res.to_dict()), indent=2) + "\n"
    else:
        text = (f"family {args.family}: mu* = {fmt(res.mu)} in [{fmt(min(res.mu_lo, res.mu_hi))}, "
                f"{fmt(max(res.mu_lo, res.mu_hi))}] (width {res.width:.2e}, mu* - 27/8 = {res.mu - GASCHEAU_THRESHOLD:.2e})\n")
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--tol", type=float, default=1e-12, help="integrator tolerance (default 1e-12)")
    common.add_argument("--kappa", type=float, help="potential exponent (default 1, or the config value)")

    p = _Parser(prog="nbodystab", description="Linear stability of homographic N-body motions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check-paper", parents=[common], help="closed-form regression battery for the Lagrange triangle")
    s.set_defaults(func=cmd_check_paper)

    s = sub.add_parser("scan", parents=[common], help="D-block monodromy over a (mu, e) grid")
    s.add_argument("--mu", help="comma-separated Gascheau values; masses (1, m, m)")
    s.add_argument("--masses", action="append", metavar="M1,M2,M3", help="explicit triple (repeatable)")
    s.add_argument("--e", default="0", help="comma-separated eccentricities (default 0)")
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("analyze", parents=[common], help="report on a configuration given as JSON")
    s.add_argument("config", help="JSON file ('-' for stdin)")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("threshold", parents=[common], help="bisect det A_D along a one-parameter mass family")
    s.add_argument("--family", default="1,m,m", help="three expressions in m (default '1,m,m')")
    s.add_argument("--lo", type=float, default=0.05)
    s.add_argument("--hi", type=float, default=1.0)
    s.set_defaults(func=cmd_threshold)
    return p


def _configure_logging():
    """Level from ``NBODY_LOG`` (name or number); unknown values fall back to WARNING."""
    raw = os.environ.get("NBODY_LOG", "WARNING").strip().upper()
    level = int(raw) if raw.isdigit() else getattr(logging, raw, None)
    if not isinstance(level, int):
        level = logging.WARNING
    log.setLevel(level)
    if not logging.getLogger().handlers:
        logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"nbodystab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NBodyError, NotFoundError, SearchFailureError, ArithmeticError, ValueError, OSError) as exc:
        print(f"nbodystab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
