"""Rank-one perturbations of finite unitary matrices.

For a unitary ``U``, a unit vector ``φ`` and a unimodular ``λ``::

    V = U + (λ − 1) ⟨φ, ·⟩ Uφ        so that   Vφ = λ Uφ.

The module also computes the finite atomic spectral measure of ``(A, φ)`` and
the associated Carathéodory and Schur functions

    F(z) = Σ_k w_k (z_k + z)/(z_k − z),    F = (1 + z f)/(1 − z f).

The Schur function is defined through the second relation (eigenvalues are the
solutions of ``z f(z) = 1`` on the circle). The sign-flipped variant
``f = z⁻¹ (1 − F)/(1 + F)`` is available as :attr:`SchurConvention.PRINTED`
because it appears in the literature, but it places the solutions of
``z f(z) = 1`` away from the eigenvalues.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as sla

from .circle import TAU_MATCH, CirclePoint, CyclicSet, OpenArc, as_point, closed_arc_contains, cyclic_order
from .errors import NotUnitaryError, PreconditionError, RankError

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
RANK_TOL = 1e-10
UNIT_VECTOR_TOL = 1e-12
# spectral weights below this are numerical noise, not atoms
ATOM_TOL = 1e-13

# Radial-limit radii for boundary evaluation of f.
RADIAL_STEP = 1e-7
RADIAL_AGREEMENT = 1e-4

MatrixLike = Union["UnitaryMatrix", np.ndarray, Sequence[Sequence[complex]]]


def unitarity_defect(a: np.ndarray) -> float:
    """``max |A*A − I|``."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise NotUnitaryError(f"expected a non-empty square matrix, got shape {arr.shape}")
        defect = unitarity_defect(arr)
        if defect > UNITARY_TOL:
            raise NotUnitaryError(f"‖U*U − I‖_max = {defect:.3e} exceeds {UNITARY_TOL:g}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_unitary(u: MatrixLike) -> UnitaryMatrix:
    return u if isinstance(u, UnitaryMatrix) else UnitaryMatrix(np.asarray(u, dtype=complex))


def _unit_vector(phi, size: int, tol: float = UNIT_VECTOR_TOL) -> np.ndarray:
    v = np.array(phi, dtype=complex).reshape(-1)
    if v.size != size:
        raise PreconditionError(f"vector of length {v.size} for a {size}×{size} matrix")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise PreconditionError(f"‖φ‖ = {norm:.15g} is not 1")
    return v


@dataclass(frozen=True, eq=False)
class RankOnePair:
    """Base unitary ``U``, unit direction ``φ`` and multiplier ``λ``."""

    base: UnitaryMatrix
    direction: np.ndarray
    multiplier: CirclePoint

    def __post_init__(self) -> None:
        base = as_unitary(self.base)
        object.__setattr__(self, "base", base)
        v = _unit_vector(self.direction, base.size)
        v.setflags(write=False)
        object.__setattr__(self, "direction", v)
        object.__setattr__(self, "multiplier", as_point(self.multiplier))
        # validates unitarity of V
        perturb(self)


def perturb(pair: RankOnePair) -> UnitaryMatrix:
    """``V = U + (λ − 1) (Uφ) φ*``."""
    u = pair.base.entries
    phi = pair.direction
    v = u + (pair.multiplier.value - 1.0) * np.outer(u @ phi, phi.conj())
    return UnitaryMatrix(v)


class RankOneData(NamedTuple):
    direction: np.ndarray
    multiplier: CirclePoint


def recover(u: MatrixLike, v: MatrixLike) -> RankOneData:
    """Recover ``(φ, λ)`` with ``V = U + (λ − 1)⟨φ, ·⟩Uφ``.

    ``φ`` is the top right-singular vector of ``V − U``, with its phase fixed
    so the largest-modulus entry is real and positive.

    Raises
    ------
    RankError
        If ``V − U`` is zero or its second singular value exceeds ``RANK_TOL``.
    """
    u = as_unitary(u).entries
    v = as_unitary(v).entries
    if u.shape != v.shape:
        raise RankError(f"shape mismatch {u.shape} vs {v.shape}")
    _, s, vh = np.linalg.svd(v - u)
    if s[0] <= RANK_TOL:
        raise RankError("V − U vanishes; there is no perturbation to recover")
    if s.size > 1 and s[1] > RANK_TOL:
        raise RankError(f"V − U has second singular value {s[1]:.3e}; not rank one")
    phi = vh[0].conj()
    k = int(np.argmax(np.abs(phi)))
    phi = phi * (np.conj(phi[k]) / abs(phi[k]))
    lam = complex(np.vdot(u @ phi, v @ phi))
    return RankOneData(phi, CirclePoint(lam / abs(lam)))


class UnitaryEigen(NamedTuple):
    """Eigenvalues in cyclic order (with multiplicity) and matching eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray
    residual: float
    modulus: float = 0.0

    @property
    def defect(self) -> float:
        """Worse of ``max ‖A v − z v‖`` and ``max ||z| − 1|``."""
        return max(self.residual, self.modulus)

    def points(self) -> CyclicSet:
        """The eigenvalues as a :class:`CyclicSet` (simple spectrum only)."""
        return cyclic_order(self.values)


def unitary_eigs(u: MatrixLike) -> UnitaryEigen:
    """Eigen-decomposition of a unitary via the complex Schur form.

    For a normal matrix the Schur factor is diagonal, so the Schur vectors are
    an orthonormal eigenbasis even for degenerate eigenvalues.
    """
    a = as_unitary(u).entries
    t, z = sla.schur(a, output="complex")
    values = np.diag(t).copy()
    args = np.mod(np.angle(values), 2 * np.pi)
    order = np.argsort(args, kind="stable")
    values, z = values[order], z[:, order]
    residual = float(np.max(np.linalg.norm(a @ z - z * values, axis=0)))
    modulus = float(np.max(np.abs(np.abs(values) - 1.0)))
    if residual > UNITARY_TOL or modulus > UNITARY_TOL:
        logger.warning("eigen-decomposition residual %.2e, modulus defect %.2e", residual, modulus)
    return UnitaryEigen(values, z, residual, modulus)


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Atoms ``(z_k, w_k)`` at distinct eigenvalues, weights summing to one."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=complex).reshape(-1)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if pts.size != w.size or pts.size == 0:
            raise PreconditionError("a measure needs matching, non-empty points and weights")
        if np.any(w < 0):
            raise PreconditionError("negative spectral weight")
        if abs(float(w.sum()) - 1.0) > UNITARY_TOL:
            raise PreconditionError(f"weights sum to {w.sum():.15g}, not 1")
        for p in pts:
            CirclePoint(p)
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def atoms(self) -> List[Tuple[CirclePoint, float]]:
        return [(CirclePoint(p), float(w)) for p, w in zip(self.points, self.weights)]

    def __len__(self) -> int:
        return int(self.points.size)


def _cluster(values: np.ndarray) -> List[List[int]]:
    """Group cyclically ordered values that coincide within ``TAU_MATCH``."""
    groups: List[List[int]] = []
    for idx, val in enumerate(values):
        if groups and abs(val - values[groups[-1][-1]]) <= TAU_MATCH:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    if len(groups) > 1 and abs(values[groups[0][0]] - values[groups[-1][-1]]) <= TAU_MATCH:
        groups[0] = groups.pop() + groups[0]
    return groups


def spectral_measure(a: MatrixLike, phi) -> SpectralMeasure:
    """Finite spectral measure of ``(A, φ)``.

    The weight at an eigenvalue is the squared norm of the projection of ``φ``
    onto its eigenspace; eigenvalues carrying no weight are not atoms.
    """
    a = as_unitary(a)
    phi = _unit_vector(phi, a.size, tol=UNITARY_TOL)
    eig = unitary_eigs(a)
    overlaps = np.abs(eig.vectors.conj().T @ phi) ** 2
    points, weights = [], []
    for group in _cluster(eig.values):
        w = float(overlaps[group].sum())
        if w > ATOM_TOL:
            z = complex(np.mean(eig.values[group]))
            points.append(z / abs(z))
            weights.append(w)
    weights_arr = np.array(weights)
    return SpectralMeasure(np.array(points), weights_arr / weights_arr.sum())


def _check_disk(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise PreconditionError("F and f are only defined on the open unit disk")
    return z


def _caratheodory(m: SpectralMeasure, z: np.ndarray) -> np.ndarray:
    zk = m.points.reshape((-1,) + (1,) * z.ndim)
    wk = m.weights.reshape(zk.shape)
    return np.sum(wk * (zk + z) / (zk - z), axis=0)


def caratheodory_F(m: SpectralMeasure, z):
    """``F(z) = Σ w_k (z_k + z)/(z_k − z)`` on the open disk (scalar or array)."""
    z = _check_disk(z)
    out = _caratheodory(m, z)
    return complex(out) if out.ndim == 0 else out


def resolvent_caratheodory(a: MatrixLike, phi, z: complex) -> complex:
    """``⟨φ, (A + z)(A − z)⁻¹ φ⟩`` by a direct linear solve."""
    a = as_unitary(a)
    phi = _unit_vector(phi, a.size, tol=UNITARY_TOL)
    z = complex(_check_disk(z))
    eye = np.eye(a.size)
    return complex(np.vdot(phi, (a.entries + z * eye) @ sla.solve(a.entries - z * eye, phi)))


class SchurConvention(str, Enum):
    POLE = "pole"  # F = (1 + z f)/(1 − z f)
    PRINTED = "printed"  # f = z⁻¹ (1 − F)/(1 + F)


def _schur(m: SpectralMeasure, z: np.ndarray, convention: SchurConvention) -> np.ndarray:
    zk = m.points.reshape((-1,) + (1,) * z.ndim)
    wk = m.weights.reshape(zk.shape)
    # (F − 1)/z = Σ 2 w_k/(z_k − z): no cancellation near 0, limit F'(0)/2 at 0
    f = np.sum(2.0 * wk / (zk - z), axis=0) / (_caratheodory(m, z) + 1.0)
    return -f if SchurConvention(convention) is SchurConvention.PRINTED else f


def schur_f(m: SpectralMeasure, z, convention: SchurConvention = SchurConvention.POLE):
    """Schur function of the measure on the open disk (scalar or array)."""
    z = _check_disk(z)
    out = _schur(m, z, convention)
    return complex(out) if out.ndim == 0 else out


def radial_limit(m: SpectralMeasure, zeta, convention: SchurConvention = SchurConvention.POLE):
    """Boundary value of ``f`` at circle point(s) *zeta*.

    Evaluates at radii ``1 − h`` and ``1 − 2h`` and extrapolates linearly to
    ``r = 1``; the two radii must agree within ``RADIAL_AGREEMENT``.
    """
    zeta = np.asarray(zeta, dtype=complex)
    near = _schur(m, (1.0 - RADIAL_STEP) * zeta, convention)
    far = _schur(m, (1.0 - 2.0 * RADIAL_STEP) * zeta, convention)
    spread = float(np.max(np.abs(near - far)))
    if spread > RADIAL_AGREEMENT:
        raise PreconditionError(f"radial limit unstable (radii disagree by {spread:.2e})")
    out = 2.0 * near - far
    return complex(out) if out.ndim == 0 else out


def eigenvalue_condition_residuals(m: SpectralMeasure) -> np.ndarray:
    """``|z_k f(z_k) − 1|`` at every atom, using radial limits."""
    return np.abs(m.points * radial_limit(m, m.points) - 1.0)


def spiral_grid(count: int, radius: float) -> np.ndarray:
    """``count`` points on a golden-angle spiral from 0 out to *radius* (< 1)."""
    if not 0.0 <= radius < 1.0:
        raise PreconditionError(f"grid radius {radius} must lie in [0, 1)")
    if count <= 0:
        return np.zeros(0, dtype=complex)
    j = np.arange(count)
    r = radius * (j / (count - 1) if count > 1 else j)
    theta = j * np.pi * (3.0 - np.sqrt(5.0))
    return r * np.exp(1j * theta)


def schur_shift_check(pair: RankOnePair, grid) -> float:
    """``max |f_{V,φ}(z) − λ⁻¹ f_{U,φ}(z)|`` over the grid."""
    grid = _check_disk(grid)
    if grid.size == 0:
        return 0.0
    v = perturb(pair)
    f_u = _schur(spectral_measure(pair.base, pair.direction), grid, SchurConvention.POLE)
    f_v = _schur(spectral_measure(v, pair.direction), grid, SchurConvention.POLE)
    return float(np.max(np.abs(f_v - np.conj(pair.multiplier.value) * f_u)))


@dataclass(frozen=True)
class MonotoneVerdict:
    holds: bool
    min_step: float
    modulus_defect: float

    def __bool__(self) -> bool:
        return self.holds


# Minimum increase of Arg f between consecutive samples.
MONOTONE_MARGIN = 1e-9
MODULUS_TOL = 1e-5


def arg_monotone_check(m: SpectralMeasure, arc: OpenArc, samples: int) -> MonotoneVerdict:
    """Check ``Arg f`` is strictly increasing and ``|f| = 1`` along an atom-free arc.

    Raises
    ------
    PreconditionError
        If the measure has fewer than two atoms (``f`` is then a constant) or
        an atom lies in the closed arc.
    """
    if len(m) < 2:
        raise PreconditionError("monotonicity needs at least two atoms (size ≥ 2, cyclic φ)")
    for p in m.points:
        if closed_arc_contains(arc, p):
            raise PreconditionError(f"atom {p!r} lies on the arc")
    if samples < 2:
        raise PreconditionError("need at least two samples")
    zeta = np.array([p.value for p in arc.sample(samples)])
    f = radial_limit(m, zeta)
    steps = np.diff(np.unwrap(np.angle(f)))
    defect = float(np.max(np.abs(np.abs(f) - 1.0)))
    min_step = float(np.min(steps))
    return MonotoneVerdict(min_step > MONOTONE_MARGIN and defect <= MODULUS_TOL, min_step, defect)


__all__ = [
    "UNITARY_TOL",
    "RANK_TOL",
    "UnitaryMatrix",
    "RankOnePair",
    "RankOneData",
    "UnitaryEigen",
    "SpectralMeasure",
    "SchurConvention",
    "MonotoneVerdict",
    "unitarity_defect",
    "as_unitary",
    "perturb",
    "recover",
    "unitary_eigs",
    "spectral_measure",
    "caratheodory_F",
    "resolvent_caratheodory",
    "schur_f",
    "radial_limit",
    "eigenvalue_condition_residuals",
    "spiral_grid",
    "schur_shift_check",
    "arg_monotone_check",
]
