"""Homogeneous pairwise potentials and their mass-metric derivatives.

``U(x) = sum_{i<j} m_i m_j r_ij^(-kappa)``; ``kappa = 1`` is Newtonian gravity.
Gradients and Hessians are taken with respect to the mass inner product, so
Newton's equations read ``x'' = grad U(x)`` and the Hessian endomorphism is
``M^-1 D^2U``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Configuration, MassSystem, Subspace, as_configuration, mass_inner
from .exceptions import CollisionError, InvalidInputError, UnsupportedDimensionError

#: Pair distances at or below this multiple of the configuration norm count as collisions.
COLLISION_TOL = 1e-13


@dataclass(frozen=True)
class Potential:
    system: MassSystem
    kappa: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.kappa) and self.kappa > 0):
            raise InvalidInputError(f"kappa must be positive, got {self.kappa}")
        object.__setattr__(self, "kappa", float(self.kappa))


def _pairs(U: Potential, x: Configuration):
    """Pair differences ``r_j - r_i`` and distances, with the collision check."""
    x = as_configuration(x, U.system)
    pos = x.positions
    diff = pos[None, :, :] - pos[:, None, :]
    r = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    n = U.system.n_bodies
    off = ~np.eye(n, dtype=bool)
    threshold = COLLISION_TOL * x.norm()
    if not np.all(r[off] > threshold):
        i, j = np.argwhere((r <= threshold) & off)[0]
        raise CollisionError(f"bodies {i} and {j} collide (distance {r[i, j]:.3e})")
    np.fill_diagonal(r, np.inf)
    return diff, r


def value(U: Potential, x: Configuration) -> float:
    _, r = _pairs(U, x)
    m = np.asarray(U.system.masses)
    terms = np.outer(m, m) * r ** (-U.kappa)
    return float(np.sum(np.triu(terms, 1)))


def moment_of_inertia(x: Configuration) -> float:
    """``I(x) = ||x||^2`` about the origin."""
    return mass_inner(x, x)


def gradient(U: Potential, x: Configuration) -> Configuration:
    """Mass-metric gradient: ``(grad U)_i = kappa sum_j m_j r_ij^-(kappa+2) (r_j - r_i)``."""
    x = as_configuration(x, U.system)
    diff, r = _pairs(U, x)
    m = np.asarray(U.system.masses)
    w = U.kappa * m[None, :] * r ** (-(U.kappa + 2))
    acc = np.einsum("ij,ijk->ik", w, diff)
    return Configuration(acc.reshape(-1), U.system)


def euler_identity_check(U: Potential, x: Configuration) -> float:
    """``<grad U(x), x> + kappa U(x)``, which vanishes for a degree ``-kappa`` potential."""
    x = as_configuration(x, U.system)
    return mass_inner(gradient(U, x), x) + U.kappa * value(U, x)


def second_derivative(U: Potential, x: Configuration) -> np.ndarray:
    """The ordinary second derivative ``D^2U`` as an ``(N*d, N*d)`` symmetric matrix."""
    diff, r = _pairs(U, x)
    k = U.kappa
    n, d = U.system.n_bodies, U.system.dim
    m = np.asarray(U.system.masses)
    mm = np.outer(m, m)
    c_outer = -k * (k + 2) * mm * r ** (-(k + 4))
    c_iso = k * mm * r ** (-(k + 2))
    blocks = c_outer[:, :, None, None] * diff[:, :, :, None] * diff[:, :, None, :]
    blocks = blocks + c_iso[:, :, None, None] * np.eye(d)
    idx = np.arange(n)
    blocks[idx, idx] = -blocks.sum(axis=1)
    return blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)


@dataclass(frozen=True, eq=False)
class HessianOperator:
    """Self-adjoint endomorphism ``HU_x = M^-1 D^2U_x`` of E^N."""

    matrix: np.ndarray
    at: Configuration = field(repr=False)

    def __post_init__(self):
        a = np.array(self.matrix, dtype=float)
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    @property
    def system(self) -> MassSystem:
        return self.at.system

    def __call__(self, v) -> Configuration:
        v = as_configuration(v, self.system)
        return Configuration(self.matrix @ v.coords, self.system)

    def symmetric_form(self) -> np.ndarray:
        """Matrix of ``HU`` in mass-normalized coordinates ``y = M^(1/2) x`` (symmetric)."""
        s = np.sqrt(self.system.metric)
        return s[:, None] * self.matrix / s[None, :]

    def norm(self) -> float:
        """Operator norm with respect to the mass metric."""
        return float(np.max(np.abs(np.linalg.eigvalsh(_sym(self.symmetric_form())))))

    def restrict(self, V: Subspace) -> np.ndarray:
        """Matrix ``[<HU b_i, b_j>]`` on a mass-orthonormal basis of ``V``."""
        q = V.vectors
        b = (q * self.system.metric) @ self.matrix @ q.T
        return _sym(b)

    def spectrum(self, V: Subspace | None = None) -> np.ndarray:
        if V is None:
            return np.linalg.eigvalsh(_sym(self.symmetric_form()))
        if V.dim == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh(self.restrict(V))


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def hessian(U: Potential, x: Configuration) -> HessianOperator:
    x = as_configuration(x, U.system)
    d2u = second_derivative(U, x)
    return HessianOperator(d2u / U.system.metric[:, None], x)


def hessian_scaling_check(U: Potential, x: Configuration, z: complex) -> float:
    """Largest relative gap in ``HU_{zx}(v) = z |z|^-(kappa+2) HU_x(z^-1 v)`` over a basis.

    At ``kappa = 1`` this is the homogeneity/rotation identity with the
    factor ``z |z|^-3``.
    """
    x = as_configuration(x, U.system)
    if U.system.dim != 2:
        raise UnsupportedDimensionError("complex scaling needs a planar configuration")
    z = complex(z)
    if z == 0:
        raise InvalidInputError("z must be nonzero")
    h_zx = hessian(U, x.scale(z))
    h_x = hessian(U, x)
    factor = z * abs(z) ** (-(U.kappa + 2))
    worst = 0.0
    for e in np.eye(U.system.size):
        v = Configuration(e, U.system)
        lhs = h_zx(v)
        rhs = h_x(v.scale(1 / z)).scale(factor)
        scale = max(lhs.norm(), rhs.norm(), np.finfo(float).tiny)
        worst = max(worst, (lhs - rhs).norm() / scale)
    return worst
