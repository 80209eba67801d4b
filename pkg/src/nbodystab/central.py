"""Planar central configurations: detection, search and spectral classification.

Also carries the closed-form three-body quantities for the Lagrange
equilateral triangle: the configuration orthogonal to all positively
oriented equilateral triangles, the restricted 2x2 form ``A_D`` and the
Gascheau constant.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import (
    Configuration,
    MassSystem,
    Subspace,
    build_subspaces,
    center,
    center_of_mass,
    is_centered,
    mass_inner,
)
from .exceptions import (
    CollisionError,
    InvalidInputError,
    SearchFailureError,
    UnsupportedDimensionError,
)
from .potential import Potential, gradient, hessian, moment_of_inertia, value

log = logging.getLogger(__name__)

OMEGA = complex(-0.5, np.sqrt(3) / 2)
SQRT3 = np.sqrt(3.0)
GASCHEAU_THRESHOLD = 27 / 8
GASCHEAU_STABILITY = 27.0

CENTRAL_TOL = 1e-10
NEWTON_TOL = 1e-12
SPECTRAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CentralConfiguration:
    """A normalized (``||x|| = 1``) planar central configuration with its spectral data."""

    config: Configuration
    potential: Potential
    lam: float
    residual_norm: float
    spectrum_D: np.ndarray
    strongly_nondegenerate: bool
    strong_minimizer: bool
    iterations: int = 0

    @property
    def system(self) -> MassSystem:
        return self.config.system


@dataclass(frozen=True)
class GascheauParams:
    mu: float
    lambda_ratio: float

    @property
    def below_threshold(self) -> bool:
        """``mu < 27/8``: the equilateral triangle is strongly non-degenerate."""
        return self.mu < GASCHEAU_THRESHOLD

    @property
    def ratio_above(self) -> bool:
        """``lambda_ratio > 8/11``, the determinant-positivity form of the same predicate."""
        return self.lambda_ratio > 8 / 11


@dataclass(frozen=True)
class ADForm:
    """Bilinear form ``<A u, v>`` on the basis ``eta, zeta`` of D, ``A = 12 sqrt(3) HU_T``."""

    a: float
    b: float
    c: float
    d: float

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])


def _require_planar(system: MassSystem):
    if system.dim != 2:
        raise UnsupportedDimensionError("central configuration analysis is planar (d=2)")


def central_residual(U: Potential, x: Configuration) -> tuple[float, float]:
    """Relative residual ``||grad U - lam x|| / ||grad U||`` and ``lam = -kappa U / I``."""
    _require_planar(U.system)
    scale = x.norm() / np.sqrt(U.system.total_mass)
    if np.linalg.norm(center_of_mass(x)) > CENTRAL_TOL * max(scale, np.finfo(float).tiny):
        raise InvalidInputError("configuration is not centered")
    g = gradient(U, x)
    lam = -U.kappa * value(U, x) / moment_of_inertia(x)
    return (g - x.scale(lam)).norm() / g.norm(), lam


def equilateral(system: MassSystem) -> Configuration:
    """Centered positively oriented equilateral triangle ``T - G(T)`` with ``T = (1, w, w^2)``."""
    if system.n_bodies != 3:
        raise InvalidInputError("the equilateral configuration needs N=3")
    _require_planar(system)
    return center(Configuration.from_complex([1, OMEGA, OMEGA**2], system))


def collinear_seed(system: MassSystem) -> Configuration:
    """Centered ``(-1, 0), (0, 0), (1, 0)``; central exactly when ``m1 == m3``."""
    _require_planar(system)
    n = system.n_bodies
    xs = np.linspace(-1.0, 1.0, n)
    return center(Configuration.from_complex(xs, system))


def _d_spectrum(U: Potential, x: Configuration) -> tuple[np.ndarray, float]:
    _, _, D = build_subspaces(x)
    h = hessian(U, x)
    return h.spectrum(D), h.norm()


def _sphere_hessian_D(U: Potential, a: Configuration) -> tuple[np.ndarray, float, float]:
    """Hessian of ``U`` restricted to the unit sphere of E^N_0, on the tangent space at ``a``.

    Second variation along great circles ``cos(s) a + sin(s) v``:
    ``d^2U(v, w) - <grad U(a), a> <v, w>``. Returns the eigenvalues on ``D``,
    the value on the rotation direction ``i a``, and ``||HU||``.
    """
    _, _, D = build_subspaces(a)
    h = hessian(U, a)
    radial = mass_inner(gradient(U, a), a)
    tangent = np.vstack([a.rot90().coords / a.norm(), D.vectors])
    w = U.system.metric
    form = (tangent * w) @ h.matrix @ tangent.T - radial * np.eye(tangent.shape[0])
    form = 0.5 * (form + form.T)
    rot_value = form[0, 0]
    return np.linalg.eigvalsh(form[1:, 1:]), rot_value, h.norm()


def strong_nondegeneracy(cc: CentralConfiguration) -> tuple[bool, np.ndarray]:
    """Positive definiteness of ``HU`` on D; returns the flag and the sorted D-spectrum."""
    spec, hnorm = _d_spectrum(cc.potential, cc.config)
    flag = bool(spec.size and spec[0] > SPECTRAL_TOL * hnorm)
    return flag, spec


def strong_minimizer(cc: CentralConfiguration) -> tuple[bool, np.ndarray]:
    """Whether the nontrivial eigenvalues of ``D^2(U|_S)`` all exceed ``kappa U(a)``.

    Also requires the kernel on the tangent space to be exactly the rotation
    direction. For ``kappa = 1`` the shift is ``U(a)``.
    """
    a = cc.config
    U = cc.potential
    spec, rot_value, hnorm = _sphere_hessian_D(U, a)
    shift = U.kappa * value(U, a)
    tol = SPECTRAL_TOL * hnorm
    nondegenerate = abs(rot_value) <= tol and bool(np.all(np.abs(spec) > tol))
    flag = nondegenerate and bool(spec.size and spec[0] > shift + tol)
    return flag, spec


def central_configuration(U: Potential, x: Configuration, iterations: int = 0) -> CentralConfiguration:
    """Validate ``x`` as central, normalize it to ``||x|| = 1`` and classify it."""
    _require_planar(U.system)
    x = x.scale(1 / x.norm())
    residual, lam = central_residual(U, x)
    if residual > CENTRAL_TOL:
        raise InvalidInputError(f"configuration is not central (residual {residual:.3e})")
    cc = CentralConfiguration(x, U, lam, residual, np.zeros(0), False, False, iterations)
    nd, spec = strong_nondegeneracy(cc)
    sm, _ = strong_minimizer(cc)
    return CentralConfiguration(x, U, lam, residual, spec, nd, sm, iterations)


def _central_field(U: Potential, x: Configuration) -> Configuration:
    """``F(x) = grad U(x) + kappa (U/I) x``; zero exactly at central configurations."""
    return gradient(U, x) + x.scale(U.kappa * value(U, x) / moment_of_inertia(x))


def _field_jacobian(U: Potential, x: Configuration) -> np.ndarray:
    h = hessian(U, x).matrix
    uval = value(U, x)
    inertia = moment_of_inertia(x)
    g = gradient(U, x).coords
    w = U.system.metric
    k = U.kappa
    jac = h + k * uval / inertia * np.eye(U.system.size)
    jac += k * np.outer(x.coords, w * g) / inertia
    jac -= 2 * k * uval / inertia**2 * np.outer(x.coords, w * x.coords)
    return jac


def find_central(U: Potential, seed: Configuration, max_iter: int = 200, tol: float = NEWTON_TOL) -> CentralConfiguration:
    """Damped Newton search for a central configuration near ``seed``.

    Iterates on the unit sphere of centered configurations. Each step lies
    in the deformation space D of the current iterate, which removes the
    scaling and rotation directions along which the raw Jacobian is singular.
    Steps that collide or do not reduce the residual are halved.
    """
    _require_planar(U.system)
    if not is_centered(seed, rtol=CENTRAL_TOL):
        raise InvalidInputError("seed must be centered")
    x = seed.scale(1 / seed.norm())
    residual, _ = central_residual(U, x)
    for it in range(max_iter + 1):
        if residual <= tol:
            log.debug("central configuration found after %d iterations (residual %.2e)", it, residual)
            return central_configuration(U, x, iterations=it)
        if it == max_iter:
            break
        _, _, D = build_subspaces(x)
        q = D.vectors
        w = U.system.metric
        f = _central_field(U, x)
        jd = (q * w) @ _field_jacobian(U, x) @ q.T
        rhs = -(q * w) @ f.coords
        try:
            step = np.linalg.solve(jd, rhs)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(jd, rhs, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            trial = center(Configuration(x.coords + t * (step @ q), U.system))
            trial = trial.scale(1 / trial.norm())
            try:
                trial_res, _ = central_residual(U, trial)
            except CollisionError:
                t *= 0.5
                continue
            if trial_res < residual or trial_res <= tol:
                x, residual = trial, trial_res
                break
            t *= 0.5
        else:
            raise SearchFailureError(f"line search stalled at residual {residual:.3e}")
    raise SearchFailureError(f"no convergence in {max_iter} iterations (residual {residual:.3e})")


def gascheau(masses) -> GascheauParams:
    m = np.asarray(masses, dtype=float).reshape(-1)
    if m.shape != (3,):
        raise InvalidInputError(f"the Gascheau constant needs three masses, got {m.size}")
    if not np.all(m > 0):
        raise InvalidInputError("masses must be positive")
    pair = m[0] * m[1] + m[1] * m[2] + m[0] * m[2]
    return GascheauParams(float(m.sum() ** 2 / pair), float(pair / np.sum(m**2)))


def masses_for_mu(mu: float) -> tuple[float, float, float]:
    """The triple ``(1, m, m)`` with ``m`` in ``(0, 1]`` whose Gascheau constant is ``mu``.

    ``m`` is the smaller root of ``(1 + 2m)^2 = mu (m^2 + 2m)``.
    """
    if not mu >= 3:
        raise InvalidInputError(f"mu must be >= 3, got {mu}")
    m = 1.0 / ((mu - 2.0) + np.sqrt(mu * (mu - 3.0)))
    return (1.0, float(m), float(m))


def orthogonal_triangle_S(masses) -> Configuration:
    """``S = (m2 m3, m1 m3 w^2, m1 m2 w)``, spanning (over C) the orthogonal of ``C T + C 1``."""
    m1, m2, m3 = _three(masses)
    system = MassSystem((m1, m2, m3), 2)
    return Configuration.from_complex([m2 * m3, m1 * m3 * OMEGA**2, m1 * m2 * OMEGA], system)


def _three(masses) -> tuple[float, float, float]:
    m = np.asarray(masses, dtype=float).reshape(-1)
    if m.shape != (3,):
        raise InvalidInputError(f"need three masses, got {m.size}")
    return float(m[0]), float(m[1]), float(m[2])


def scaled_hessian_T(masses) -> np.ndarray:
    """``12 sqrt(3) HU_T`` for the (uncentered) triangle ``T = (1, w, w^2)``, Newtonian."""
    system = MassSystem(_three(masses), 2)
    T = Configuration.from_complex([1, OMEGA, OMEGA**2], system)
    return 12 * SQRT3 * hessian(Potential(system, 1.0), T).matrix


def lagrange_hessian_closed_form(masses) -> np.ndarray:
    """Closed-form entries of ``12 sqrt(3) HU_T``, written out by hand."""
    m1, m2, m3 = _three(masses)
    s = SQRT3
    return np.array([
        [5 * (m2 + m3), -3 * s * (m2 - m3), -5 * m2, 3 * s * m2, -5 * m3, -3 * s * m3],
        [-3 * s * (m2 - m3), -(m2 + m3), 3 * s * m2, m2, -3 * s * m3, m3],
        [-5 * m1, 3 * s * m1, 5 * m1 - 4 * m3, -3 * s * m1, 4 * m3, 0.0],
        [3 * s * m1, m1, -3 * s * m1, -m1 + 8 * m3, 0.0, -8 * m3],
        [-5 * m1, -3 * s * m1, 4 * m2, 0.0, 5 * m1 - 4 * m2, 3 * s * m1],
        [-3 * s * m1, m1, 0.0, -8 * m2, 3 * s * m1, -m1 + 8 * m2],
    ])


def restricted_AD(masses) -> ADForm:
    """Numerically assembled ``A_D`` on the (unnormalized) basis ``eta = 2S``, ``zeta = i eta``."""
    eta_cfg = orthogonal_triangle_S(masses).scale(2.0)
    system = eta_cfg.system
    A = scaled_hessian_T(masses)
    eta = eta_cfg.coords
    zeta = eta_cfg.rot90().coords
    w = system.metric

    def ip(u, v):
        return float(np.dot(w * u, v))

    return ADForm(ip(eta, A @ eta), ip(eta, A @ zeta), ip(zeta, A @ eta), ip(zeta, A @ zeta))


def closed_form_AD(masses) -> ADForm:
    m1, m2, m3 = _three(masses)
    nu = m1 * m2 * m3 * (m2 * m3 + m1 * m3 + m1 * m2)
    off = nu * 12 * SQRT3 * (m3 - m2)
    return ADForm(nu * (-16 * m1 + 20 * m2 + 20 * m3), off, off, nu * (32 * m1 - 4 * m2 - 4 * m3))


def closed_form_trace(masses) -> float:
    m1, m2, m3 = _three(masses)
    return 16 * m1 * m2 * m3 * (m1 + m2 + m3) * (m2 * m3 + m1 * m3 + m1 * m2)


def closed_form_det(masses) -> float:
    """``nu^2 (-512 sum m_i^2 + 704 sum_{i<j} m_i m_j)``."""
    m1, m2, m3 = _three(masses)
    nu = m1 * m2 * m3 * (m2 * m3 + m1 * m3 + m1 * m2)
    return nu**2 * (-512 * (m1**2 + m2**2 + m3**2) + 704 * (m2 * m3 + m1 * m3 + m1 * m2))


def lagrange(masses, kappa: float = 1.0) -> CentralConfiguration:
    """The equilateral central configuration for three masses, normalized."""
    system = MassSystem(_three(masses), 2)
    U = Potential(system, kappa)
    return central_configuration(U, equilateral(system))


def d_block_basis(cc: CentralConfiguration) -> Subspace:
    return build_subspaces(cc.config)[2]


__all__ = [
    "ADForm",
    "CentralConfiguration",
    "GascheauParams",
    "central_configuration",
    "central_residual",
    "closed_form_AD",
    "closed_form_det",
    "closed_form_trace",
    "collinear_seed",
    "equilateral",
    "find_central",
    "gascheau",
    "lagrange",
    "masses_for_mu",
    "orthogonal_triangle_S",
    "lagrange_hessian_closed_form",
    "restricted_AD",
    "scaled_hessian_T",
    "strong_minimizer",
    "strong_nondegeneracy",
]
