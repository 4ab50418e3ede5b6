"""Finite CMV matrices and the rank-one splitting between consecutive sizes.

``C = L M`` where ``L = Θ(γ_0) ⊕ Θ(γ_2) ⊕ …`` and
``M = 1 ⊕ Θ(γ_1) ⊕ Θ(γ_3) ⊕ …`` with ``Θ(γ) = [[conj(γ), τ], [τ, −γ]]``,
``τ = sqrt(1 − |γ|²)``. The block ``Θ(γ_j)`` occupies rows/columns ``j, j+1``
of ``L`` for even ``j`` and of ``M`` for odd ``j``. When the last coefficient
``γ_{n−1}`` is unimodular its block is diagonal and the matrix decouples, so
only the ``conj(γ_{n−1})`` corner is kept: that n×n piece is the finite CMV
matrix, whose characteristic polynomial is the paraorthogonal polynomial with
``β = γ_{n−1}``.

Splitting ``C_{n+1}`` into ``C_n ⊕ [λ_n]`` replaces ``Θ(α_{n−1})`` by
``diag(conj(β_n), x)`` with ``x`` from :func:`rank_one_completion`; ``λ_n`` is
read off the perturbed product rather than taken from a closed form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from .circle import CirclePoint, as_point
from .errors import NotUnitaryError, OutsideDiskError, PreconditionError, SizeMismatchError
from .rankone import RANK_TOL, UNITARY_TOL, RankOneData, recover, unitarity_defect, unitary_eigs
from .szego import MonicPoly, VerblunskyWord, WordLike, as_word

logger = logging.getLogger(__name__)

# |γ| may exceed 1 by rounding up to this much
OVERSHOOT_TOL = 1e-10
# |γ| above 1 − UNIMODULAR_GAP is a boundary value (τ = 0); word entries stay below 1 − 1e−12
UNIMODULAR_GAP = 1e-13


@dataclass(frozen=True, eq=False)
class ThetaBlock:
    gamma: complex
    tau: float
    entries: np.ndarray


def theta(gamma: complex) -> ThetaBlock:
    """``Θ(γ)`` for ``|γ| ≤ 1``; ``τ`` is exactly 0 for unimodular ``γ``."""
    gamma = complex(gamma)
    modulus = abs(gamma)
    if modulus > 1.0 + OVERSHOOT_TOL:
        raise OutsideDiskError(f"|γ| = {modulus:.15g} exceeds 1")
    tau = 0.0 if modulus > 1.0 - UNIMODULAR_GAP else float(np.sqrt(1.0 - modulus * modulus))
    entries = np.array([[gamma.conjugate(), tau], [tau, -gamma]], dtype=complex)
    entries.setflags(write=False)
    return ThetaBlock(gamma, tau, entries)


@dataclass(frozen=True, eq=False)
class CMVFactorization:
    L: np.ndarray
    M: np.ndarray
    sign_corner: int = 1


@dataclass(frozen=True, eq=False)
class FiniteCMV:
    word: VerblunskyWord
    boundary: CirclePoint
    dense: np.ndarray
    factors: CMVFactorization

    @property
    def size(self) -> int:
        return self.dense.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return unitary_eigs(self.dense).values


def _host_is_L(j: int) -> bool:
    return j % 2 == 0


def _factors(gammas: np.ndarray, sign_corner: int = 1) -> CMVFactorization:
    n = gammas.size
    L = np.zeros((n, n), dtype=complex)
    M = np.zeros((n, n), dtype=complex)
    M[0, 0] = sign_corner
    for j, g in enumerate(gammas):
        host = L if _host_is_L(j) else M
        blk = theta(g).entries
        if j + 1 < n:
            host[j:j + 2, j:j + 2] = blk
        else:
            host[j, j] = blk[0, 0]
    return CMVFactorization(L, M, sign_corner)


def _assemble(word: VerblunskyWord, beta: CirclePoint, sign_corner: int) -> FiniteCMV:
    gammas = np.append(word.coefficients, beta.value)
    factors = _factors(gammas, sign_corner)
    dense = factors.L @ factors.M
    for name, mat in (("L", factors.L), ("M", factors.M), ("C", dense)):
        defect = unitarity_defect(mat)
        if defect > UNITARY_TOL:
            raise NotUnitaryError(f"{name} has unitarity defect {defect:.3e}")
    for mat in (factors.L, factors.M, dense):
        mat.setflags(write=False)
    return FiniteCMV(word, beta, dense, factors)


def build(word: WordLike, beta: "CirclePoint | complex") -> FiniteCMV:
    """``C_n(α_0, …, α_{n−2}, β)`` of size ``len(word) + 1``."""
    return _assemble(as_word(word), as_point(beta), 1)


def build_m_tilde(word: WordLike, beta: "CirclePoint | complex") -> FiniteCMV:
    """``L M̃`` where ``M̃`` carries ``−1`` in place of the leading ``1``."""
    return _assemble(as_word(word), as_point(beta), -1)


def truncated(word: WordLike, n: int) -> np.ndarray:
    """Top-left n×n block of the CMV matrix of *word* (not unitary).

    Its characteristic polynomial is ``Φ_n``, so its eigenvalues are the
    zeros of the orthogonal polynomial.
    """
    word = as_word(word)
    if n < 1 or n > len(word):
        raise SizeMismatchError(f"truncation to {n} needs that many coefficients (have {len(word)})")
    factors = _factors(word.coefficients[:n])
    return factors.L @ factors.M


def is_five_diagonal(mat: np.ndarray) -> bool:
    rows, cols = np.indices(mat.shape)
    return bool(np.all(mat[np.abs(rows - cols) > 2] == 0))


def char_poly(c: "FiniteCMV | np.ndarray") -> MonicPoly:
    """``det(z − C)`` by evaluation at the (n+1)-th roots of unity and interpolation."""
    dense = c.dense if isinstance(c, FiniteCMV) else np.asarray(c, dtype=complex)
    n = dense.shape[0]
    nodes = np.exp(2j * np.pi * np.arange(n + 1) / (n + 1))
    eye = np.eye(n)
    values = np.array([sla.det(z * eye - dense) for z in nodes])
    coeffs = np.fft.fft(values) / (n + 1)
    coeffs[-1] = 1.0
    return MonicPoly(coeffs)


def rank_one_completion(alpha: complex, beta: "CirclePoint | complex") -> CirclePoint:
    """The ``x`` making ``Θ(α) − diag(β, x)`` rank one: ``conj(β)(βα − 1)/(conj(β)conj(α) − 1)``."""
    alpha = complex(alpha)
    if abs(alpha) >= 1.0:
        raise OutsideDiskError(f"|α| = {abs(alpha):.15g} is not inside the disk")
    b = as_point(beta).value
    x = b.conjugate() * (b * alpha - 1.0) / (b.conjugate() * alpha.conjugate() - 1.0)
    return CirclePoint(x / abs(x))


def completion_det(alpha: complex, beta: complex, x: complex) -> complex:
    """``det(Θ(α) − diag(β, x)) = (conj(α) − β)(−α − x) − (1 − |α|²)``."""
    alpha = complex(alpha)
    return (alpha.conjugate() - beta) * (-alpha - x) - (1.0 - abs(alpha) ** 2)


def decoupling_value(alpha: complex, beta_n: "CirclePoint | complex", beta_next: "CirclePoint | complex") -> CirclePoint:
    """Closed form of the split's decoupled eigenvalue.

    ``λ_n = conj(β_{n+1}) β_n (conj(β_n) α_{n−1} − 1)/(β_n conj(α_{n−1}) − 1)``;
    :func:`split` computes the same number from the block replacement.
    """
    alpha = complex(alpha)
    b, b1 = as_point(beta_n).value, as_point(beta_next).value
    lam = b1.conjugate() * b * (b.conjugate() * alpha - 1.0) / (b * alpha.conjugate() - 1.0)
    return CirclePoint(lam / abs(lam))


def printed_lambda(alpha: complex, beta_n: "CirclePoint | complex", beta_next: "CirclePoint | complex") -> CirclePoint:
    """The decoupling value as commonly printed, ``conj(β_{n+1}) conj(β_n)(β_n α − 1)/(conj(β_n) conj(α) − 1)``.

    Kept only to demonstrate that the theorem harness rejects it: for α ≡ 0 and
    ``β_j = conj(λ)^j`` it yields ``λ^{2n+1}`` instead of the common zero ``λ``.
    """
    alpha = complex(alpha)
    b, b1 = as_point(beta_n).value, as_point(beta_next).value
    lam = b1.conjugate() * b.conjugate() * (b * alpha - 1.0) / (b.conjugate() * alpha.conjugate() - 1.0)
    return CirclePoint(lam / abs(lam))


@dataclass(frozen=True, eq=False)
class SplitResult:
    inner: FiniteCMV
    decoupled: CirclePoint
    perturbation: RankOneData
    replaced_block: np.ndarray
    perturbed: np.ndarray
    reconstruction_error: float
    second_singular_value: float

    @property
    def replaced_in_L(self) -> bool:
        return _host_is_L(self.inner.size - 1)


def split(c_next: FiniteCMV, beta_n: "CirclePoint | complex") -> SplitResult:
    """Rank-one perturbation of ``C_{n+1}`` into ``C_n ⊕ [λ_n]``.

    ``C_n`` keeps ``α_0 … α_{n−2}`` and takes ``β_n`` as its boundary.

    Raises
    ------
    SizeMismatchError
        If *c_next* has size 1 (there is nothing to split off).
    """
    beta_n = as_point(beta_n)
    n = c_next.size - 1
    if n < 1 or len(c_next.word) != n:
        raise SizeMismatchError(f"cannot split a CMV matrix of size {c_next.size}")
    alpha = c_next.word[n - 1]
    corner = beta_n.value.conjugate()
    x = rank_one_completion(alpha, corner)
    block = np.diag([corner, x.value])

    L = np.array(c_next.factors.L)
    M = np.array(c_next.factors.M)
    host = L if _host_is_L(n - 1) else M
    host[n - 1:n + 1, n - 1:n + 1] = block
    perturbed = L @ M

    inner = build(c_next.word.prefix(n - 1), beta_n)
    lam = complex(perturbed[n, n])
    expected = np.zeros_like(perturbed)
    expected[:n, :n] = inner.dense
    expected[n, n] = lam
    reconstruction = float(np.max(np.abs(perturbed - expected)))

    sv = np.linalg.svd(c_next.dense - perturbed, compute_uv=False)
    second = float(sv[1]) if sv.size > 1 else 0.0
    data = recover(c_next.dense, perturbed)
    logger.debug("split n=%d: λ_n=%s, reconstruction %.2e, σ₂ %.2e", n, lam, reconstruction, second)
    block.setflags(write=False)
    perturbed.setflags(write=False)
    return SplitResult(
        inner=inner,
        decoupled=CirclePoint(lam / abs(lam)),
        perturbation=data,
        replaced_block=block,
        perturbed=perturbed,
        reconstruction_error=reconstruction,
        second_singular_value=second,
    )


class KrylovRank(NamedTuple):
    is_cyclic: bool
    rank: int


def krylov_cyclic(c, phi, tol: float = RANK_TOL) -> KrylovRank:
    """Dimension of ``span{φ, Cφ, C²φ, …}`` via Arnoldi with re-orthogonalization."""
    a = c.dense if isinstance(c, FiniteCMV) else np.asarray(c, dtype=complex)
    v = np.array(phi, dtype=complex).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise PreconditionError("the zero vector generates no Krylov space")
    dim = a.shape[0]
    basis = np.zeros((dim, dim), dtype=complex)
    basis[:, 0] = v / norm
    rank = 1
    while rank < dim:
        w = a @ basis[:, rank - 1]
        for _ in range(2):
            w = w - basis[:, :rank] @ (basis[:, :rank].conj().T @ w)
        h = float(np.linalg.norm(w))
        if h <= tol:
            break
        basis[:, rank] = w / h
        rank += 1
    return KrylovRank(rank == dim, rank)


def delta(size: int, k: int) -> np.ndarray:
    """Standard basis vector ``δ_k``."""
    e = np.zeros(size, dtype=complex)
    e[k] = 1.0
    return e


__all__ = [
    "ThetaBlock",
    "CMVFactorization",
    "FiniteCMV",
    "SplitResult",
    "KrylovRank",
    "theta",
    "build",
    "build_m_tilde",
    "truncated",
    "is_five_diagonal",
    "char_poly",
    "rank_one_completion",
    "completion_det",
    "decoupling_value",
    "printed_lambda",
    "split",
    "krylov_cyclic",
    "delta",
]
