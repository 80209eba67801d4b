"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line with its runtime.

Run under pytest (lines are repeated in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from _support import FAMILIES, random_subspace_containing, unit_scale_config  # noqa: E402
from nbodystab.central import (  # noqa: E402
    SQRT3,
    closed_form_AD,
    closed_form_trace,
    lagrange,
    restricted_AD,
    scaled_hessian_T,
    strong_minimizer,
)
from nbodystab.cli import ScanSpec, parse_family, run_scan, threshold_search  # noqa: E402
from nbodystab.core import Configuration, MassSystem  # noqa: E402
from nbodystab.linstab import (  # noqa: E402
    LinearizedSystem,
    comparison_theorem_check,
    keplerian_lower_bound,
    lagrange_motion,
    monodromy,
    motion_blocks,
    multiplier_distance,
    splitting_verify,
    stability_transition,
)
from nbodystab.orbits import homographic_motion  # noqa: E402
from nbodystab.potential import Potential, gradient, hessian, value  # noqa: E402

RESULTS: list[str] = []

MU_GRID = (3.0, 3.2, 3.37)
E_GRID = (0.0, 0.2, 0.5, 0.8)
TOL = 1e-12


def record(number: int, title: str, passed: bool, detail: str, elapsed: float) -> bool:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} - {detail} ({elapsed:.2f} s)"
    RESULTS.append(line)
    print(line)
    return passed


@lru_cache(maxsize=None)
def d_report(mu: float, e: float, tol: float = TOL, block: str = "D"):
    return monodromy(lagrange_motion(mu, e), block, tol)


def test_criterion_1_lagrange_matrix():
    t0 = time.perf_counter()
    s = SQRT3
    expected = np.array([
        [25, 3 * s, -10, 6 * s, -15, -9 * s],
        [3 * s, -5, 6 * s, 2, -9 * s, 3],
        [-5, 3 * s, -7, -3 * s, 12, 0],
        [3 * s, 1, -3 * s, 23, 0, -24],
        [-5, -3 * s, 8, 0, -3, 3 * s],
        [-3 * s, 1, 0, -16, 3 * s, 15],
    ])
    A = scaled_hessian_T((1, 2, 3))
    mask = expected != 0
    rel = float(np.max(np.abs(A[mask] - expected[mask]) / np.abs(expected[mask])))
    zeros = float(np.max(np.abs(A[~mask])))
    elapsed = time.perf_counter() - t0
    ok = rel <= 1e-12 and zeros <= 1e-12 * np.max(np.abs(expected)) and elapsed < 1.0
    assert record(1, "12 sqrt3 HU_T at (1,2,3)", ok,
                  f"max entry rel err {rel:.2e}, max |zero entry| {zeros:.2e}", elapsed)


def test_criterion_2_closed_form_AD():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst = worst_tr = 0.0
    for _ in range(100):
        m = tuple(rng.uniform(0.01, 10.0, 3))
        num, ref = restricted_AD(m), closed_form_AD(m)
        for x, y in zip((num.a, num.b, num.c, num.d), (ref.a, ref.b, ref.c, ref.d)):
            worst = max(worst, abs(x - y) / abs(y))
        worst_tr = max(worst_tr, abs(num.trace - closed_form_trace(m)) / closed_form_trace(m))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and worst_tr <= 1e-10 and elapsed < 5.0
    assert record(2, "A_D closed forms on 100 random triples", ok,
                  f"a,b,c,d max rel {worst:.2e}, trace max rel {worst_tr:.2e}", elapsed)


def test_criterion_3_threshold_exactness():
    t0 = time.perf_counter()
    details = []
    ok = True
    for fam, lo, hi in (("1,m,m", 0.05, 1.0), ("1,m,2m", 0.05, 1.0)):
        res = threshold_search(parse_family(fam), lo, hi, label=fam)
        a, b = sorted((res.mu_lo, res.mu_hi))
        inside = a - 1e-8 <= 27 / 8 <= b + 1e-8
        ok &= inside and res.width <= 1e-8 and abs(res.mu - 27 / 8) <= 1e-8
        details.append(f"({fam}) mu*-27/8 = {res.mu - 27 / 8:.1e}, width {res.width:.1e}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5.0
    assert record(3, "det A_D sign change at mu = 27/8", ok, "; ".join(details), elapsed)


def test_criterion_4_hyperbolic_below_threshold():
    t0 = time.perf_counter()
    rows = run_scan(ScanSpec(e_values=E_GRID, mu_values=MU_GRID, tol=TOL), jobs=1)
    margins = []
    for row in rows:
        d_report(row.mu, row.e)  # warm the cache for criterion 9 with the same data
        margins.append(min(abs(abs(z) - 1) for z in row.multipliers))
    classes = {row.classification for row in rows}
    elapsed = time.perf_counter() - t0
    ok = len(rows) == 12 and classes == {"hyperbolic"} and min(margins) > 1e-4 and elapsed < 120
    assert record(4, "D-block hyperbolic for mu in {3, 3.2, 3.37} x e in {0, .2, .5, .8}", ok,
                  f"classes {sorted(classes)}, smallest | |lam|-1 | = {min(margins):.3e}", elapsed)


def test_criterion_5_gascheau_transition():
    t0 = time.perf_counter()
    stable = d_report(30.0, 0.0)
    unstable = d_report(20.0, 0.0)
    on_circle = float(np.max(np.abs(np.abs(stable.multipliers) - 1)))
    off_circle = float(np.max(np.abs(np.abs(unstable.multipliers) - 1)))
    lo, hi = stability_transition(26.5, 27.5, 0.0, xtol=0.01, tol=TOL)
    elapsed = time.perf_counter() - t0
    ok = (on_circle <= 1e-6 and off_circle > 1e-3 and 27 - 0.01 <= lo <= hi <= 27 + 0.01
          and elapsed < 120)
    assert record(5, "e = 0 stability transition at mu = 27", ok,
                  f"mu=30 max | |lam|-1 | {on_circle:.1e}; mu=20 margin {off_circle:.3f}; "
                  f"bracket [{lo:.4f}, {hi:.4f}]", elapsed)


def test_criterion_6_splitting_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    details = []
    ok = True
    for name, sampler in FAMILIES.items():
        worst = 0.0
        for _ in range(100):
            s, x, V = sampler(rng)
            worst = max(worst, splitting_verify(Potential(s), x, V))
        s, x, V = sampler(rng)
        control = splitting_verify(Potential(s), x, random_subspace_containing(rng, x, V.dim))
        ok &= worst <= 1e-10 and control > 1e-3
        details.append(f"{name} {worst:.1e}/ctl {control:.2f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    assert record(6, "splitting over invariant families", ok, ", ".join(details), elapsed)


def test_criterion_7_strong_minimizer_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    agree = 0
    worst = 0.0
    for _ in range(50):
        cc = lagrange(tuple(rng.uniform(0.01, 10.0, 3)))
        flag, spec = strong_minimizer(cc)
        agree += flag == cc.strongly_nondegenerate
        U_a = value(cc.potential, cc.config)
        worst = max(worst, float(np.max(np.abs(spec - cc.spectrum_D - U_a))))
    elapsed = time.perf_counter() - t0
    ok = agree == 50 and worst <= 1e-10
    assert record(7, "strong minimizer <=> strongly non-degenerate", ok,
                  f"{agree}/50 flags agree, max |shift - U(a)| {worst:.1e}", elapsed)


def test_criterion_8_comparison_theorem():
    t0 = time.perf_counter()
    motion = homographic_motion(lagrange((1, 1, 1)), 0.3)
    alpha = keplerian_lower_bound(motion)
    lin = LinearizedSystem(motion, motion_blocks(motion)["D"])
    rep = comparison_theorem_check(lin.B, alpha, (0.0, motion.period), trials=20, rng=8)
    ctl = comparison_theorem_check(lambda t: alpha * np.eye(2), alpha, (0.0, motion.period), trials=20, rng=9)
    elapsed = time.perf_counter() - t0
    ok = rep.passed and rep.trials == 20 and ctl.max_equality_error <= 1e-10 and elapsed < 30
    assert record(8, "||J(t)|| >= sinh(sqrt(a) t)/sqrt(a) on the D-block, e = 0.3", ok,
                  f"alpha {alpha:.4f}, worst gap {rep.worst_gap:.3e}, hypothesis margin "
                  f"{rep.min_hypothesis_margin:.3e}, control equality err {ctl.max_equality_error:.1e}", elapsed)


def test_criterion_9_numerical_hygiene():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    h = 1e-5
    g_err = h_err = 0.0
    for _ in range(100):
        s = MassSystem(tuple(rng.uniform(0.5, 2.0, int(rng.integers(2, 6)))), int(rng.integers(2, 4)))
        U = Potential(s, float(rng.choice([1.0, 2.0])))
        x = unit_scale_config(rng, s)
        g = gradient(U, x).coords * s.metric
        fd = np.empty(s.size)
        for k in range(s.size):
            e = np.zeros(s.size)
            e[k] = h
            step = Configuration(e, s)
            fd[k] = (value(U, x + step) - value(U, x - step)) / (2 * h)
        g_err = max(g_err, float(np.max(np.abs(g - fd))))
        u = Configuration(rng.normal(size=s.size), s)
        u = u / u.norm()
        fdh = (gradient(U, x + u.scale(h)) - gradient(U, x - u.scale(h))) / (2 * h)
        h_err = max(h_err, float(np.max(np.abs(hessian(U, x)(u).coords - fdh.coords))))

    cases = [(mu, e) for mu in MU_GRID for e in E_GRID] + [(30.0, 0.0), (20.0, 0.0)]
    halving = 0.0
    for mu, e in cases:
        a = d_report(mu, e).multipliers
        b = d_report(mu, e, TOL / 2).multipliers
        halving = max(halving, multiplier_distance(a, b) / max(1.0, float(np.max(np.abs(a)))))

    reports = [d_report(mu, e) for mu, e in cases]
    reports += [d_report(mu, e, TOL, blk) for mu, e in [(3.2, 0.5), (30.0, 0.0)] for blk in ("Delta", "K")]
    reports += [d_report(mu, e, TOL / 2) for mu, e in cases]
    prod = max(abs(r.product - 1) for r in reports)
    pair = max(r.pairing_error for r in reports)
    elapsed = time.perf_counter() - t0
    ok = g_err <= 1e-5 and h_err <= 1e-5 and halving < 1e-7 and prod <= 1e-8 and pair <= 1e-8
    assert record(9, "finite differences, tolerance halving, multiplier pairing", ok,
                  f"grad FD {g_err:.1e}, Hessian FD {h_err:.1e}, halving {halving:.1e}, "
                  f"|prod-1| {prod:.1e}, pairing {pair:.1e} over {len(reports)} reports", elapsed)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
