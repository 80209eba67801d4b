"""Mass-metric linear algebra on the configuration space E^N.

Configurations are flat real arrays of length ``N*d`` with body ``i``
occupying ``coords[i*d:(i+1)*d]``. For planar problems (``d == 2``) the
complex structure is the per-body quarter turn ``(a, b) -> (-b, a)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import null_space

from .exceptions import (
    DegenerateInputError,
    InvalidInputError,
    InvalidSubspaceError,
    UnsupportedDimensionError,
)

#: Dependence threshold used when orthonormalizing spanning sets.
DEPENDENCE_TOL = 1e-12
#: Maximum Gram deviation accepted for a "mass-orthonormal" basis.
GRAM_TOL = 1e-10
#: Relative tolerance for "centered" checks.
CENTER_TOL = 1e-12

SUBSPACE_LABELS = ("Delta", "Centered", "K", "D", "Isosceles", "Coplanar", "Full", "Custom")


@dataclass(frozen=True)
class MassSystem:
    """Masses of ``N`` point bodies moving in a ``dim``-dimensional space."""

    masses: tuple[float, ...]
    dim: int = 2

    def __post_init__(self):
        masses = tuple(float(m) for m in np.atleast_1d(np.asarray(self.masses, dtype=float)))
        if len(masses) < 2:
            raise InvalidInputError(f"need at least 2 bodies, got {len(masses)}")
        if not all(np.isfinite(m) and m > 0 for m in masses):
            raise InvalidInputError(f"masses must be finite and strictly positive: {masses}")
        if self.dim not in (2, 3):
            raise UnsupportedDimensionError(f"ambient dimension must be 2 or 3, got {self.dim}")
        object.__setattr__(self, "masses", masses)

    @property
    def n_bodies(self) -> int:
        return len(self.masses)

    @property
    def size(self) -> int:
        """Length of a flat configuration vector, ``N*d``."""
        return self.n_bodies * self.dim

    @property
    def total_mass(self) -> float:
        return float(sum(self.masses))

    @property
    def metric(self) -> np.ndarray:
        """Diagonal of the mass matrix in canonical coordinates (length ``N*d``)."""
        return np.repeat(np.asarray(self.masses), self.dim)

    def configuration(self, coords) -> "Configuration":
        return Configuration(coords, self)

    def zeros(self) -> "Configuration":
        return Configuration(np.zeros(self.size), self)

    def delta(self, point) -> "Configuration":
        """Total-collision configuration with every body at ``point``."""
        point = np.asarray(point, dtype=float).reshape(-1)
        if point.shape != (self.dim,):
            raise InvalidInputError(f"point must have length {self.dim}")
        return Configuration(np.tile(point, self.n_bodies), self)


@dataclass(frozen=True, eq=False)
class Configuration:
    """A point of E^N stored as a flat, read-only array."""

    coords: np.ndarray
    system: MassSystem = field(repr=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=float).reshape(-1)
        if coords.shape != (self.system.size,):
            raise InvalidInputError(
                f"expected {self.system.size} coordinates "
                f"({self.system.n_bodies} bodies x {self.system.dim}), got {coords.size}"
            )
        coords.flags.writeable = False
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_positions(cls, positions, system: MassSystem) -> "Configuration":
        return cls(np.asarray(positions, dtype=float).reshape(-1), system)

    @classmethod
    def from_complex(cls, points, system: MassSystem) -> "Configuration":
        if system.dim != 2:
            raise UnsupportedDimensionError("complex coordinates require d=2")
        z = np.asarray(points, dtype=complex).reshape(-1)
        return cls(np.column_stack([z.real, z.imag]).reshape(-1), system)

    @property
    def positions(self) -> np.ndarray:
        return self.coords.reshape(self.system.n_bodies, self.system.dim)

    def as_complex(self) -> np.ndarray:
        if self.system.dim != 2:
            raise UnsupportedDimensionError("complex coordinates require d=2")
        p = self.positions
        return p[:, 0] + 1j * p[:, 1]

    def norm(self) -> float:
        return float(np.sqrt(mass_inner(self, self)))

    def rot90(self) -> "Configuration":
        """Multiplication by ``i``: each body rotated by a quarter turn."""
        if self.system.dim != 2:
            raise UnsupportedDimensionError("rotation by i requires d=2")
        p = self.positions
        return Configuration(np.column_stack([-p[:, 1], p[:, 0]]).reshape(-1), self.system)

    def scale(self, z) -> "Configuration":
        """Multiply by a real or (for d=2) complex scalar."""
        if isinstance(z, complex) or np.iscomplexobj(z):
            return Configuration.from_complex(complex(z) * self.as_complex(), self.system)
        return Configuration(float(z) * self.coords, self.system)

    def _other(self, other) -> np.ndarray:
        if isinstance(other, Configuration):
            _check_same_system(self, other)
            return other.coords
        return NotImplemented

    def __add__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return Configuration(self.coords + y, self.system)

    def __sub__(self, other):
        y = self._other(other)
        if y is NotImplemented:
            return y
        return Configuration(self.coords - y, self.system)

    def __mul__(self, z):
        if isinstance(z, Number):
            return self.scale(z)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, z):
        if isinstance(z, Number):
            return self.scale(1 / z)
        return NotImplemented

    def __neg__(self):
        return Configuration(-self.coords, self.system)

    def __len__(self):
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)


def _check_same_system(x: Configuration, y: Configuration) -> None:
    if x.system != y.system:
        raise InvalidInputError("configurations belong to different mass systems")


def as_configuration(x, system: MassSystem | None = None) -> Configuration:
    if isinstance(x, Configuration):
        if system is not None and x.system != system:
            raise InvalidInputError("configuration belongs to a different mass system")
        return x
    if system is None:
        raise InvalidInputError("a MassSystem is required to interpret a raw array")
    return Configuration(x, system)


def mass_inner(x: Configuration, y: Configuration) -> float:
    """Mass inner product ``sum_i m_i <r_i, s_i>``."""
    _check_same_system(x, y)
    return float(np.dot(x.system.metric * x.coords, y.coords))


def complex_mass_inner(x: Configuration, y: Configuration) -> complex:
    """Hermitian mass product ``sum_i m_i z_i conj(w_i)`` of planar configurations.

    Its real part is :func:`mass_inner` and its imaginary part is
    ``mass_inner(x, y.rot90())``.
    """
    _check_same_system(x, y)
    if x.system.dim != 2:
        raise UnsupportedDimensionError("the complex mass product requires d=2")
    m = np.asarray(x.system.masses)
    return complex(np.sum(m * x.as_complex() * np.conj(y.as_complex())))


def center_of_mass(x: Configuration) -> np.ndarray:
    m = np.asarray(x.system.masses)
    return m @ x.positions / x.system.total_mass


def center(x: Configuration) -> Configuration:
    """Translate ``x`` so its center of mass sits at the origin."""
    return x - x.system.delta(center_of_mass(x))


def is_centered(x: Configuration, rtol: float = CENTER_TOL) -> bool:
    scale = max(x.norm(), np.finfo(float).tiny) / np.sqrt(x.system.total_mass)
    return bool(np.linalg.norm(center_of_mass(x)) <= rtol * scale)


def orthonormalize(vectors: Iterable, system: MassSystem, tol: float = DEPENDENCE_TOL) -> np.ndarray:
    """Modified Gram-Schmidt in the mass metric with one re-orthogonalization pass.

    Vectors whose residual norm falls below ``tol`` times their original
    norm are treated as dependent and dropped. Returns an array of shape
    ``(k, N*d)`` whose rows are mass-orthonormal.
    """
    w = system.metric
    basis: list[np.ndarray] = []
    for v in vectors:
        v = np.array(v, dtype=float).reshape(-1)
        if v.shape != (system.size,):
            raise InvalidInputError(f"vector of length {v.size}, expected {system.size}")
        n0 = np.sqrt(np.dot(w * v, v))
        if n0 == 0.0:
            continue
        for _ in range(2):
            for b in basis:
                v = v - np.dot(w * v, b) * b
        n1 = np.sqrt(np.dot(w * v, v))
        if n1 <= tol * n0:
            continue
        basis.append(v / n1)
    return np.array(basis).reshape(len(basis), system.size)


def gram_matrix(vectors: np.ndarray, system: MassSystem) -> np.ndarray:
    q = np.asarray(vectors, dtype=float)
    return (q * system.metric) @ q.T


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of E^N given by a mass-orthonormal basis.

    ``vectors`` holds the basis as rows of a ``(k, N*d)`` array; the
    constructor rejects bases whose Gram matrix deviates from the identity
    by more than ``GRAM_TOL``.
    """

    vectors: np.ndarray
    system: MassSystem = field(repr=False)
    label: str = "Custom"

    def __post_init__(self):
        q = np.array(self.vectors, dtype=float).reshape(-1, self.system.size)
        if self.label not in SUBSPACE_LABELS:
            raise InvalidInputError(f"unknown subspace label {self.label!r}")
        if q.shape[0]:
            dev = np.max(np.abs(gram_matrix(q, self.system) - np.eye(q.shape[0])))
            if dev > GRAM_TOL:
                raise InvalidSubspaceError(f"basis is not mass-orthonormal (Gram deviation {dev:.3e})")
        q.flags.writeable = False
        object.__setattr__(self, "vectors", q)

    @classmethod
    def span(cls, vectors, system: MassSystem, label: str = "Custom") -> "Subspace":
        """Subspace spanned by arbitrary vectors (orthonormalized here)."""
        rows = [np.asarray(v, dtype=float).reshape(-1) for v in vectors]
        return cls(orthonormalize(rows, system), system, label)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def basis(self) -> list[Configuration]:
        return [Configuration(v, self.system) for v in self.vectors]

    def coordinates(self, x) -> np.ndarray:
        """Mass-inner products ``<x, b_j>`` of ``x`` with the basis vectors."""
        x = as_configuration(x, self.system)
        return self.vectors @ (self.system.metric * x.coords)

    def from_coordinates(self, c) -> Configuration:
        return Configuration(np.asarray(c, dtype=float) @ self.vectors, self.system)

    def projector(self) -> np.ndarray:
        """Mass-orthogonal projector as an ``(N*d, N*d)`` matrix in canonical coordinates."""
        return self.vectors.T @ (self.vectors * self.system.metric)

    def complement(self, label: str = "Custom") -> "Subspace":
        """Mass-orthogonal complement inside E^N."""
        sq = np.sqrt(self.system.metric)
        if self.dim == 0:
            y = np.eye(self.system.size)
        else:
            y = null_space(self.vectors * sq).T
        return Subspace(y / sq, self.system, label)

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.system != self.system:
            raise InvalidInputError("subspaces belong to different mass systems")
        return Subspace.span(list(self.vectors) + list(other.vectors), self.system)

    def contains(self, x, rtol: float = 1e-10) -> bool:
        x = as_configuration(x, self.system)
        resid = (x - project(x, self)).norm()
        return bool(resid <= rtol * max(x.norm(), np.finfo(float).tiny))


def project(x: Configuration, V: Subspace) -> Configuration:
    """Mass-orthogonal projection ``sum_j <x, b_j> b_j`` onto ``V``."""
    if V.dim == 0:
        raise InvalidSubspaceError("cannot project onto an empty basis")
    x = as_configuration(x, V.system)
    dev = np.max(np.abs(gram_matrix(V.vectors, V.system) - np.eye(V.dim)))
    if dev > GRAM_TOL:
        raise InvalidSubspaceError(f"basis is not mass-orthonormal (Gram deviation {dev:.3e})")
    return V.from_coordinates(V.coordinates(x))


def delta_subspace(system: MassSystem) -> Subspace:
    """Total-collision configurations, the image of ``r -> (r, ..., r)``."""
    rows = np.array([system.delta(e).coords for e in np.eye(system.dim)])
    return Subspace(rows / np.sqrt(system.total_mass), system, "Delta")


def full_space(system: MassSystem) -> Subspace:
    """All of E^N, with the canonical basis rescaled to be mass-orthonormal."""
    return Subspace(np.diag(1 / np.sqrt(system.metric)), system, "Full")


def centered_subspace(system: MassSystem) -> Subspace:
    """E^N_0: configurations with center of mass at the origin."""
    return delta_subspace(system).complement("Centered")


def coplanar_subspace(system: MassSystem, plane: Sequence) -> Subspace:
    """``S^N`` for a linear subspace ``S`` of E spanned by the rows of ``plane``."""
    plane = np.atleast_2d(np.asarray(plane, dtype=float))
    if plane.shape[1] != system.dim:
        raise InvalidInputError(f"plane vectors must have length {system.dim}")
    q, _ = np.linalg.qr(plane.T)
    q = q[:, : np.linalg.matrix_rank(plane)]
    rows = []
    for i, m in enumerate(system.masses):
        for k in range(q.shape[1]):
            v = np.zeros(system.size)
            v[i * system.dim:(i + 1) * system.dim] = q[:, k] / np.sqrt(m)
            rows.append(v)
    return Subspace(np.array(rows), system, "Coplanar")


def build_subspaces(x0: Configuration) -> tuple[Subspace, Subspace, Subspace]:
    """The orthogonal splitting ``E^N = Delta + K + D`` at a planar configuration.

    ``K`` is the real span of ``x0`` and ``i x0``; ``D`` is the mass-orthogonal
    complement of ``Delta + K``.
    """
    system = x0.system
    if system.dim != 2:
        raise UnsupportedDimensionError("the Delta/K/D splitting requires d=2")
    nx = x0.norm()
    if nx == 0.0:
        raise DegenerateInputError("x0 is the zero configuration")
    if not is_centered(x0):
        raise InvalidInputError("x0 must be centered (center of mass at the origin)")
    delta = delta_subspace(system)
    u = x0.coords / nx
    k_rows = orthonormalize([u, x0.rot90().coords / nx], system)
    K = Subspace(k_rows, system, "K")
    D = Subspace(np.vstack([delta.vectors, K.vectors]), system).complement("D")
    return delta, K, D


def isosceles_subspace(system: MassSystem, axis) -> Subspace:
    """Isosceles configurations about ``axis`` for three bodies with ``m1 == m2``.

    The space is ``{x centered : r3 on the axis line, r2 - r1 orthogonal to it}``,
    three-dimensional in E^3.
    """
    if system.n_bodies != 3 or system.dim != 3:
        raise UnsupportedDimensionError("isosceles configurations need N=3 and d=3")
    m1, m2, m3 = system.masses
    if abs(m1 - m2) > 1e-12 * max(m1, m2):
        raise InvalidInputError(f"isosceles subspace needs m1 == m2, got {m1} and {m2}")
    e = np.asarray(axis, dtype=float).reshape(-1)
    if e.shape != (3,) or not np.isclose(np.linalg.norm(e), 1.0, rtol=0, atol=1e-12):
        raise InvalidInputError("axis must be a unit vector in E")
    perp = null_space(e[None, :]).T
    c = -m3 / (2 * m1)
    rows = [np.concatenate([c * e, c * e, e])]
    rows += [np.concatenate([-w / 2, w / 2, np.zeros(3)]) for w in perp]
    return Subspace.span(rows, system, "Isosceles")
