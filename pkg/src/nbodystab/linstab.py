"""Jacobi fields, block monodromy matrices and Floquet classification.

Along a motion ``x(t)`` the linearized flow is ``J'' = HU_{x(t)} J``. On a
block ``V`` with mass-orthonormal basis ``b_1..b_k`` that is invariant for
every ``HU_{x(t)}``, coordinates ``c`` with ``J = sum c_i b_i`` obey
``c'' = B(t) c`` with ``B_ij(t) = <HU_{x(t)} b_j, b_i>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import linear_sum_assignment

from .central import lagrange, masses_for_mu
from .core import Configuration, Subspace, as_configuration, build_subspaces, full_space
from .exceptions import HypothesisError, InvalidInputError
from .orbits import HomographicMotion, Trajectory, homographic_motion, kepler_state
from .potential import Potential, hessian

#: Distance from the unit circle below which a multiplier counts as "on" it.
UNIT_CIRCLE_TOL = 1e-6
#: Eigenvector-matrix condition number above which a monodromy is not treated as semisimple.
SEMISIMPLE_COND = 1e8
SPAN_TOL = 1e-10

CLASSIFICATIONS = ("hyperbolic", "elliptic", "mixed", "degenerate")
#: Multipliers forced to +1 by free translation (Delta) and by the Kepler
#: symmetries of the similarity plane (time shift/energy, rotation/angular momentum).
FORCED_UNIT_MULTIPLIERS = {"Delta": None, "K": 4, "D": 0}


def motion_blocks(motion: HomographicMotion) -> dict[str, Subspace]:
    delta, K, D = build_subspaces(motion.cc.config)
    return {"Delta": delta, "K": K, "D": D}


def _potential(motion) -> Potential:
    if isinstance(motion, (HomographicMotion, Trajectory)):
        return motion.potential
    raise InvalidInputError(f"unsupported motion type {type(motion).__name__}")


def motion_position(motion, t: float) -> Configuration:
    if isinstance(motion, HomographicMotion):
        z, _ = kepler_state(motion.orbit, float(t))
        return motion.cc.config.scale(complex(z))
    if isinstance(motion, Trajectory):
        return motion.state(t)[0]
    raise InvalidInputError(f"unsupported motion type {type(motion).__name__}")


@dataclass(frozen=True, eq=False)
class LinearizedSystem:
    """The Jacobi equation restricted to one block along a motion."""

    motion: object
    block: Subspace

    @property
    def k(self) -> int:
        return self.block.dim

    @property
    def dimension(self) -> int:
        """Phase-space dimension ``2k``."""
        return 2 * self.block.dim

    def B(self, t: float) -> np.ndarray:
        h = hessian(_potential(self.motion), motion_position(self.motion, t))
        return h.restrict(self.block)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        """``X' = [[0, I], [B(t), 0]] X`` for ``y`` holding ``2k`` rows of ``X`` (any number of columns)."""
        k = self.k
        Y = y.reshape(2 * k, -1)
        return np.vstack([Y[k:], self.B(t) @ Y[:k]]).reshape(-1)


def _as_block(motion, block) -> Subspace:
    if isinstance(block, Subspace):
        return block
    if block in (None, "full", "Full"):
        pot = _potential(motion)
        return full_space(pot.system)
    if isinstance(motion, HomographicMotion) and block in ("Delta", "K", "D"):
        return motion_blocks(motion)[block]
    raise InvalidInputError(f"unknown block {block!r}")


@dataclass(frozen=True, eq=False)
class JacobiField:
    """Samples of a Jacobi field: block coordinates and the fields in E^N."""

    t: np.ndarray
    coords: np.ndarray
    velocity_coords: np.ndarray
    block: Subspace = field(repr=False)

    @property
    def J(self) -> np.ndarray:
        """Field values as flat canonical-coordinate arrays, shape ``(n_t, N*d)``."""
        return self.coords @ self.block.vectors

    @property
    def Jdot(self) -> np.ndarray:
        return self.velocity_coords @ self.block.vectors

    def norms(self) -> np.ndarray:
        """Mass-metric norms ``||J(t)||`` (equal to Euclidean norms of the block coordinates)."""
        return np.linalg.norm(self.coords, axis=1)


def jacobi_integrate(motion, block, J0, Jdot0, t_span, tol: float = 1e-12, t_eval=None) -> JacobiField:
    """Integrate ``J'' = HU_{x(t)} J`` inside ``block`` from ``(J0, Jdot0)``."""
    V = _as_block(motion, block)
    J0 = as_configuration(J0, V.system)
    Jdot0 = as_configuration(Jdot0, V.system)
    for name, vec in (("J0", J0), ("Jdot0", Jdot0)):
        if vec.norm() > 0 and not V.contains(vec, SPAN_TOL):
            raise InvalidInputError(f"{name} is not in the span of the {V.label} block")
    lin = LinearizedSystem(motion, V)
    y0 = np.concatenate([V.coordinates(J0), V.coordinates(Jdot0)])
    sol = solve_ivp(lin.rhs, t_span, y0, method="DOP853", rtol=tol, atol=tol, t_eval=t_eval)
    if sol.status != 0:
        raise ArithmeticError(f"Jacobi integration failed: {sol.message}")
    k = V.dim
    return JacobiField(sol.t, sol.y[:k].T.copy(), sol.y[k:].T.copy(), V)


def reciprocal_pair_error(multipliers) -> float:
    """Largest ``min_j |lam_i lam_j - 1|`` over the multipliers (pairing by reciprocals)."""
    lam = np.asarray(multipliers, dtype=complex)
    if lam.size == 0:
        return 0.0
    prod = np.abs(lam[:, None] * lam[None, :] - 1.0)
    return float(np.max(np.min(prod, axis=1)))


def _sort_multipliers(lam: np.ndarray) -> np.ndarray:
    """Descending modulus, then descending argument (rounded so conjugates order stably)."""
    order = np.lexsort((-np.round(np.angle(lam), 8), -np.round(np.abs(lam), 8)))
    return lam[order]


def multiplier_distance(a, b) -> float:
    """Largest gap between two multiplier sets under the best one-to-one matching."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(np.max(cost[rows, cols])) if rows.size else 0.0


@dataclass(frozen=True, eq=False)
class MonodromyReport:
    """Period map of one block and its Floquet data."""

    block: str
    period: float
    matrix: np.ndarray
    multipliers: np.ndarray
    margins: np.ndarray
    classification: str
    forced: int
    semisimple: bool
    tol: float = UNIT_CIRCLE_TOL

    @property
    def free_multipliers(self) -> np.ndarray:
        return _free(self.multipliers, self.forced)

    @property
    def min_margin(self) -> float:
        free = self.free_multipliers
        return float(np.min(np.abs(np.abs(free) - 1))) if free.size else float("nan")

    @property
    def dim_stable(self) -> int:
        return int(np.sum(np.abs(self.multipliers) < 1 - self.tol))

    @property
    def dim_unstable(self) -> int:
        return int(np.sum(np.abs(self.multipliers) > 1 + self.tol))

    @property
    def product(self) -> complex:
        return complex(np.prod(self.multipliers))

    @property
    def pairing_error(self) -> float:
        return reciprocal_pair_error(self.multipliers)

    def to_dict(self) -> dict:
        return {
            "block": self.block,
            "period": self.period,
            "multipliers": [[float(z.real), float(z.imag)] for z in self.multipliers],
            "margins": [float(x) for x in self.margins],
            "classification": self.classification,
            "forced_unit_multipliers": self.forced,
            "dim_stable": self.dim_stable,
            "dim_unstable": self.dim_unstable,
            "min_margin": self.min_margin,
        }


def _free(lam: np.ndarray, forced: int) -> np.ndarray:
    """Drop the ``forced`` multipliers closest to ``+1``."""
    if forced <= 0:
        return lam
    order = np.argsort(np.abs(lam - 1.0), kind="stable")
    keep = np.sort(order[forced:])
    return lam[keep]


def classify_multipliers(lam, forced: int = 0, semisimple: bool = True, tol: float = UNIT_CIRCLE_TOL) -> str:
    """Floquet type of a multiplier set after removing ``forced`` unit multipliers.

    ``degenerate`` flags remaining multipliers within ``tol`` of ``+1``; a set
    with nothing left to classify counts as ``elliptic``.
    """
    free = _free(np.asarray(lam, dtype=complex), forced)
    if free.size == 0:
        return "elliptic"
    if np.any(np.abs(free - 1.0) <= tol):
        return "degenerate"
    off = np.abs(np.abs(free) - 1.0) > tol
    if np.all(off):
        return "hyperbolic"
    if not np.any(off) and semisimple:
        return "elliptic"
    return "mixed"


def fundamental_matrix(lin: LinearizedSystem, t_span, tol: float = 1e-12) -> np.ndarray:
    n = lin.dimension
    sol = solve_ivp(lin.rhs, t_span, np.eye(n).reshape(-1), method="DOP853", rtol=tol, atol=tol)
    if sol.status != 0:
        raise ArithmeticError(f"fundamental-matrix integration failed: {sol.message}")
    return sol.y[:, -1].reshape(n, n)


def monodromy(motion, block, tol: float = 1e-12, forced: int | None = None) -> MonodromyReport:
    """Monodromy of the linearized flow on ``block`` over one period, with Floquet data."""
    if not isinstance(motion, HomographicMotion):
        raise InvalidInputError("monodromy needs a periodic (elliptic homographic) motion")
    V = _as_block(motion, block)
    if forced is None:
        forced = FORCED_UNIT_MULTIPLIERS.get(V.label, 0)
        if forced is None:
            forced = 2 * V.dim
        if V.label == "Full":
            forced = 8
    lin = LinearizedSystem(motion, V)
    T = motion.period
    mat = fundamental_matrix(lin, (0.0, T), tol)
    lam, vecs = np.linalg.eig(mat)
    lam = _sort_multipliers(lam)
    semisimple = bool(np.linalg.cond(vecs) < SEMISIMPLE_COND)
    margins = np.abs(np.abs(lam) - 1.0)
    cls = classify_multipliers(lam, forced, semisimple)
    return MonodromyReport(V.label, T, mat, lam, margins, cls, forced, semisimple)


@dataclass(frozen=True, eq=False)
class MotionClassification:
    reports: dict
    verdict: str

    @property
    def dim_stable(self) -> int:
        return self.reports["D"].dim_stable

    @property
    def dim_unstable(self) -> int:
        return self.reports["D"].dim_unstable

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "dim_stable": self.dim_stable,
            "dim_unstable": self.dim_unstable,
            "blocks": {k: r.to_dict() for k, r in self.reports.items()},
        }


def classify_motion(motion: HomographicMotion, tol: float = 1e-12) -> MotionClassification:
    """Monodromy on the Delta, K and D blocks and an overall linear-stability verdict."""
    reports = {name: monodromy(motion, V, tol) for name, V in motion_blocks(motion).items()}
    free = np.concatenate([r.free_multipliers for r in reports.values()])
    off = np.abs(np.abs(free) - 1.0) > UNIT_CIRCLE_TOL
    if reports["D"].classification == "hyperbolic" or np.any(off):
        verdict = "linearly unstable"
    elif any(r.classification in ("degenerate", "mixed") for r in reports.values()):
        verdict = "degenerate - refine"
    else:
        verdict = "spectrally stable"
    return MotionClassification(reports, verdict)


def splitting_verify(U: Potential, x, V: Subspace) -> float:
    """Relative coupling ``max(||P_W HU P_V||, ||P_V HU P_W||) / ||HU||`` with ``W = V^perp``."""
    x = as_configuration(x, U.system)
    if not V.contains(x, SPAN_TOL):
        raise InvalidInputError("x does not lie in V")
    h = hessian(U, x)
    S = h.symmetric_form()
    sq = np.sqrt(U.system.metric)
    vh = V.vectors * sq
    P = vh.T @ vh
    Q = np.eye(P.shape[0]) - P
    hn = np.linalg.norm(S, 2)
    return max(np.linalg.norm(Q @ S @ P, 2), np.linalg.norm(P @ S @ Q, 2)) / hn


def keplerian_lower_bound(motion: HomographicMotion) -> float:
    """``alpha = k^-3 mu`` bounding ``B(t)`` on D from below along the motion.

    ``k`` is the apocenter of the scalar orbit and ``mu`` the smallest
    eigenvalue of ``HU_{x0}`` on D (``||x0|| = 1``).
    """
    mu = float(motion.cc.spectrum_D[0])
    return motion.orbit.apocenter ** (-3) * mu


@dataclass(frozen=True)
class ComparisonReport:
    passed: bool
    trials: int
    worst_gap: float
    max_equality_error: float
    min_hypothesis_margin: float


def comparison_theorem_check(B: Callable[[float], np.ndarray], alpha: float, t_span, trials: int = 20,
                             rng=None, n_samples: int = 200, tol: float = 1e-12,
                             velocities=None, slack: float = 1e-8) -> ComparisonReport:
    """Check ``||x(t)|| >= ||z(t)||`` for ``x'' = B(t) x`` against ``z'' = alpha z``.

    Both start at the origin with the same unit velocity, so
    ``||z(t)|| = sinh(sqrt(alpha) t) / sqrt(alpha)``. Raises
    :class:`HypothesisError` if some sampled ``B(t)`` has an eigenvalue
    below ``alpha``.
    """
    if not alpha > 0:
        raise InvalidInputError("alpha must be positive")
    t0, t1 = map(float, t_span)
    ts = np.linspace(t0, t1, n_samples + 1)[1:]
    mins = np.array([np.linalg.eigvalsh(0.5 * (B(t) + B(t).T))[0] for t in ts])
    margin = float(np.min(mins - alpha))
    if margin < -1e-10 * max(abs(alpha), 1.0):
        raise HypothesisError(f"B(t) drops below alpha by {-margin:.3e}")
    n = np.asarray(B(t0)).shape[0]
    if velocities is None:
        rng = np.random.default_rng(rng)
        velocities = rng.normal(size=(trials, n))
    velocities = np.atleast_2d(np.asarray(velocities, dtype=float))
    velocities = velocities / np.linalg.norm(velocities, axis=1, keepdims=True)
    sa = np.sqrt(alpha)
    z_norm = np.sinh(sa * (ts - t0)) / sa

    def rhs(t, y):
        return np.concatenate([y[n:], B(t) @ y[:n]])

    worst_gap = np.inf
    worst_eq = 0.0
    for v in velocities:
        sol = solve_ivp(rhs, (t0, t1), np.concatenate([np.zeros(n), v]), method="DOP853",
                        rtol=tol, atol=tol, t_eval=ts)
        x_norm = np.linalg.norm(sol.y[:n], axis=0)
        gap = x_norm - z_norm
        worst_gap = min(worst_gap, float(np.min(gap)))
        worst_eq = max(worst_eq, float(np.max(np.abs(gap) / np.maximum(1.0, z_norm))))
    return ComparisonReport(bool(worst_gap >= -slack), len(velocities), worst_gap, worst_eq, margin)


def lagrange_motion(mu: float, eccentricity: float = 0.0, semi_major_axis: float = 1.0) -> HomographicMotion:
    """Elliptic Lagrange motion for the masses ``(1, m, m)`` with Gascheau constant ``mu``."""
    return homographic_motion(lagrange(masses_for_mu(mu)), eccentricity, semi_major_axis)


def d_block_elliptic(mu: float, eccentricity: float = 0.0, tol: float = 1e-12) -> bool:
    return monodromy(lagrange_motion(mu, eccentricity), "D", tol).classification == "elliptic"


def stability_transition(mu_lo: float, mu_hi: float, eccentricity: float = 0.0, xtol: float = 1e-2,
                         tol: float = 1e-12) -> tuple[float, float]:
    """Bracket in ``mu`` where the D-block of the Lagrange motion turns elliptic.

    Needs the block non-elliptic at ``mu_lo`` and elliptic at ``mu_hi``.
    """
    lo_ok = d_block_elliptic(mu_lo, eccentricity, tol)
    hi_ok = d_block_elliptic(mu_hi, eccentricity, tol)
    if lo_ok or not hi_ok:
        raise InvalidInputError(
            f"no stability change between mu={mu_lo} (elliptic={lo_ok}) and mu={mu_hi} (elliptic={hi_ok})"
        )
    lo, hi = float(mu_lo), float(mu_hi)
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if d_block_elliptic(mid, eccentricity, tol):
            hi = mid
        else:
            lo = mid
    return lo, hi
