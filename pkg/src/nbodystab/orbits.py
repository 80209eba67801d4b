"""Keplerian and homographic motions, plus direct integration of Newton's equations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .central import CentralConfiguration
from .core import Configuration, as_configuration, center_of_mass
from .exceptions import CollisionApproachError, CollisionError, InvalidInputError
from .potential import Potential, gradient, value

KEPLER_TOL = 1e-14


@dataclass(frozen=True)
class KeplerOrbit:
    """Elliptic solution of ``z'' = -gm z |z|^-3`` with perihelion on the positive real axis at ``t = 0``."""

    gravitational_parameter: float
    eccentricity: float = 0.0
    semi_major_axis: float = 1.0

    def __post_init__(self):
        if not self.gravitational_parameter > 0:
            raise InvalidInputError("gravitational parameter must be positive")
        if not 0 <= self.eccentricity < 1:
            raise InvalidInputError(
                f"only elliptic orbits (0 <= e < 1) are supported, got e={self.eccentricity}"
            )
        if not self.semi_major_axis > 0:
            raise InvalidInputError("semi-major axis must be positive")

    @property
    def period(self) -> float:
        return 2 * np.pi * self.semi_major_axis**1.5 / np.sqrt(self.gravitational_parameter)

    @property
    def mean_motion(self) -> float:
        return 2 * np.pi / self.period

    @property
    def pericenter(self) -> float:
        return self.semi_major_axis * (1 - self.eccentricity)

    @property
    def apocenter(self) -> float:
        """``k = max |z(t)|``."""
        return self.semi_major_axis * (1 + self.eccentricity)

    @property
    def energy(self) -> float:
        return -self.gravitational_parameter / (2 * self.semi_major_axis)

    @property
    def angular_momentum(self) -> float:
        return np.sqrt(self.gravitational_parameter * self.semi_major_axis * (1 - self.eccentricity**2))


def solve_kepler(M, e: float, tol: float = KEPLER_TOL, max_iter: int = 100):
    """Eccentric anomaly ``E`` with ``E - e sin E = M`` by Newton's method.

    Works on ``M`` reduced to ``[-pi, pi)`` and restores the whole turns
    afterwards, so the residual stays at rounding level for any ``M``.
    """
    if not 0 <= e < 1:
        raise InvalidInputError(f"eccentricity must be in [0, 1), got {e}")
    M = np.asarray(M, dtype=float)
    turns = np.floor((M + np.pi) / (2 * np.pi))
    Mr = M - 2 * np.pi * turns
    E = np.where(e > 0.8, np.pi * np.sign(Mr), Mr + e * np.sin(Mr))
    for _ in range(max_iter):
        dE = (E - e * np.sin(E) - Mr) / (1 - e * np.cos(E))
        E = E - dE
        if np.all(np.abs(dE) <= tol):
            break
    else:
        raise ArithmeticError("Kepler solver did not converge")
    return E + 2 * np.pi * turns


def kepler_state(orbit: KeplerOrbit, t):
    """Position ``z(t)`` and velocity ``z'(t)`` as complex numbers (arrays if ``t`` is)."""
    a, e = orbit.semi_major_axis, orbit.eccentricity
    n = orbit.mean_motion
    E = solve_kepler(n * np.asarray(t, dtype=float), e)
    cosE, sinE = np.cos(E), np.sin(E)
    b = a * np.sqrt(1 - e * e)
    z = a * (cosE - e) + 1j * b * sinE
    dE = n / (1 - e * cosE)
    zdot = (-a * sinE + 1j * b * cosE) * dE
    return z, zdot


def kepler_position(orbit: KeplerOrbit, t):
    return kepler_state(orbit, t)[0]


@dataclass(frozen=True, eq=False)
class HomographicMotion:
    """``x(t) = z(t) x0`` for a normalized central configuration and an elliptic Kepler orbit."""

    cc: CentralConfiguration
    orbit: KeplerOrbit

    @property
    def period(self) -> float:
        return self.orbit.period

    @property
    def potential(self) -> Potential:
        return self.cc.potential


def homographic_motion(cc: CentralConfiguration, eccentricity: float = 0.0, semi_major_axis: float = 1.0) -> HomographicMotion:
    """Elliptic homographic motion through ``cc`` (Newtonian only).

    With ``||x0|| = 1`` the scalar factor obeys ``z'' = -U(x0) z |z|^-3``.
    """
    if cc.potential.kappa != 1.0:
        raise InvalidInputError("elliptic homographic motions are built for kappa = 1 only")
    x0 = cc.config
    gm = value(cc.potential, x0) / x0.norm() ** 2
    return HomographicMotion(cc, KeplerOrbit(gm, eccentricity, semi_major_axis))


def homographic_state(motion: HomographicMotion, t: float) -> tuple[Configuration, Configuration]:
    z, zdot = kepler_state(motion.orbit, float(t))
    x0 = motion.cc.config
    return x0.scale(complex(z)), x0.scale(complex(zdot))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Output of :func:`integrate_newton`: sample times and flat positions/velocities."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    potential: Potential = field(repr=False)
    sol: object = field(default=None, repr=False)

    def state(self, t) -> tuple[Configuration, Configuration]:
        """Dense-output state at time ``t``."""
        if self.sol is None:
            raise InvalidInputError("trajectory was integrated without dense output")
        y = self.sol(float(t))
        n = self.potential.system.size
        return Configuration(y[:n], self.potential.system), Configuration(y[n:], self.potential.system)

    def energy(self) -> np.ndarray:
        system = self.potential.system
        w = system.metric
        kin = 0.5 * np.einsum("ij,j,ij->i", self.v, w, self.v)
        pot = np.array([value(self.potential, Configuration(xi, system)) for xi in self.x])
        return kin - pot


def integrate_newton(U: Potential, x0, v0, t_span, tol: float = 1e-12, t_eval=None,
                     dense_output: bool = False, collision_radius: float | None = None) -> Trajectory:
    """Integrate ``x'' = grad U(x)`` with an adaptive 8(5,3) Runge-Kutta pair.

    ``collision_radius`` (default ``1e-9`` times the initial configuration
    scale) stops the integration with :class:`CollisionApproachError` once
    two bodies get that close.
    """
    system = U.system
    x0 = as_configuration(x0, system)
    v0 = as_configuration(v0, system)
    n = system.size
    scale = x0.norm() / np.sqrt(system.total_mass)
    if collision_radius is None:
        collision_radius = 1e-9 * scale
    value(U, x0)

    def rhs(t, y):
        acc = gradient(U, Configuration(y[:n], system)).coords
        return np.concatenate([y[n:], acc])

    def close_approach(t, y):
        p = y[:n].reshape(system.n_bodies, system.dim)
        diff = p[:, None, :] - p[None, :, :]
        r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        return np.min(r[np.triu_indices(system.n_bodies, 1)]) - collision_radius

    close_approach.terminal = True

    y0 = np.concatenate([x0.coords, v0.coords])
    try:
        sol = solve_ivp(rhs, t_span, y0, method="DOP853", rtol=tol, atol=tol * max(scale, 1.0),
                        t_eval=t_eval, dense_output=dense_output, events=close_approach)
    except CollisionError as exc:
        raise CollisionApproachError(str(exc)) from exc
    if sol.status == 1 or sol.status < 0:
        last = sol.y[:, -1] if sol.y.size else y0
        t_last = sol.t[-1] if sol.t.size else t_span[0]
        if sol.status == 1 and sol.t_events[0].size:
            t_last = float(sol.t_events[0][0])
            last = sol.y_events[0][0]
        raise CollisionApproachError(
            f"integration stopped near a collision at t={t_last:.6g}: {sol.message}",
            t=t_last, x=last[:n], v=last[n:],
        )
    return Trajectory(sol.t, sol.y[:n].T.copy(), sol.y[n:].T.copy(), U, sol.sol if dense_output else None)


def central_force_orbit(lam: float, kappa: float, z0: complex, zdot0: complex, t_span, tol: float = 1e-12, t_eval=None):
    """Solve ``z'' = lam z |z|^-(kappa+2)`` in the plane.

    For ``lam = -kappa U(x0)/I(x0)`` at a central configuration ``x0``, the
    curve ``z(t) x0`` is a homographic motion; for real initial data it
    reduces to the homothetic equation ``phi'' = lam phi^-(kappa+1)``.
    Returns ``(t, z, zdot)``.
    """

    def rhs(t, y):
        z = y[0] + 1j * y[1]
        acc = lam * z * abs(z) ** (-(kappa + 2))
        return [y[2], y[3], acc.real, acc.imag]

    z0, zdot0 = complex(z0), complex(zdot0)
    y0 = [z0.real, z0.imag, zdot0.real, zdot0.imag]
    sol = solve_ivp(rhs, t_span, y0, method="DOP853", rtol=tol, atol=tol, t_eval=t_eval)
    if sol.status != 0:
        raise CollisionApproachError(f"central-force integration failed: {sol.message}")
    return sol.t, sol.y[0] + 1j * sol.y[1], sol.y[2] + 1j * sol.y[3]


def linear_momentum_drift(traj: Trajectory) -> float:
    """Largest deviation of the center of mass from uniform motion along ``traj``."""
    system = traj.potential.system
    g0 = center_of_mass(Configuration(traj.x[0], system))
    gv = center_of_mass(Configuration(traj.v[0], system))
    worst = 0.0
    for ti, xi in zip(traj.t, traj.x):
        g = center_of_mass(Configuration(xi, system))
        worst = max(worst, float(np.linalg.norm(g - g0 - (ti - traj.t[0]) * gv)))
    return worst
