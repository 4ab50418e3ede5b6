"""Monic OPUC, reversed and second-kind polynomials, and POPUC.

All polynomials are dense coefficient arrays ``c_0, …, c_n`` (lowest degree
first), built by the Szegő recursion

    Φ_{k+1}(z) = z Φ_k(z) − conj(α_k) Φ_k*(z),    Φ_0 = 1,

where ``Φ_k*`` is the reversed polynomial of :func:`star`. Paraorthogonal
polynomials replace the last step's coefficient by a unimodular ``β``::

    Φ_n(z; β) = z Φ_{n−1}(z) − conj(β) Φ_{n−1}*(z)

Convention note: some references write ``β`` where the formula above has
``−conj(β)``; this module implements the formula exactly as displayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .circle import CirclePoint, as_point
from .errors import DegreeError, OutsideDiskError, PreconditionError

# Verblunsky coefficients must stay this far inside the unit disk.
TAU_DISK = 1e-12

# A boundary coefficient β is just a validated unimodular point.
BoundaryCoefficient = CirclePoint


@dataclass(frozen=True, eq=False)
class VerblunskyWord:
    """Finite sequence ``α_0, …, α_{m−1}`` strictly inside the unit disk."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coefficients, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise OutsideDiskError("Verblunsky coefficients must be finite")
        bad = np.flatnonzero(np.abs(arr) >= 1.0 - TAU_DISK)
        if bad.size:
            j = int(bad[0])
            raise OutsideDiskError(f"|α_{j}| = {abs(arr[j]):.15g} is not inside the disk (margin {TAU_DISK:g})")
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    @classmethod
    def constant(cls, alpha: complex, length: int) -> "VerblunskyWord":
        return cls(np.full(length, complex(alpha)))

    def __len__(self) -> int:
        return int(self.coefficients.size)

    def __getitem__(self, j: int) -> complex:
        return complex(self.coefficients[j])

    def negate(self) -> "VerblunskyWord":
        return VerblunskyWord(-self.coefficients)

    def prefix(self, k: int) -> "VerblunskyWord":
        if k > len(self):
            raise DegreeError(f"need {k} coefficients, word has {len(self)}")
        return VerblunskyWord(self.coefficients[:k])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VerblunskyWord):
            return NotImplemented
        return np.array_equal(self.coefficients, other.coefficients)

    def __hash__(self) -> int:
        return hash(self.coefficients.tobytes())

    def __repr__(self) -> str:
        return f"VerblunskyWord({self.coefficients.tolist()!r})"


WordLike = Union[VerblunskyWord, Sequence[complex], np.ndarray]


def as_word(word: WordLike) -> VerblunskyWord:
    return word if isinstance(word, VerblunskyWord) else VerblunskyWord(np.asarray(word, dtype=complex))


@dataclass(frozen=True, eq=False)
class MonicPoly:
    """Coefficients ``c_0 … c_n`` of a degree-``n`` polynomial.

    ``monic=False`` marks reversed polynomials such as ``Φ_n*``, which share
    the representation but not the leading-one invariant.
    """

    coefficients: np.ndarray
    degree: int = field(default=-1)
    monic: bool = True

    def __post_init__(self) -> None:
        arr = np.array(self.coefficients, dtype=complex).reshape(-1)
        degree = arr.size - 1 if self.degree < 0 else self.degree
        if arr.size != degree + 1:
            raise PreconditionError(f"degree {degree} needs {degree + 1} coefficients, got {arr.size}")
        if self.monic and arr[-1] != 1:
            raise PreconditionError(f"leading coefficient {arr[-1]!r} is not 1")
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)
        object.__setattr__(self, "degree", degree)

    def __call__(self, z):
        return evaluate(self, z)

    def allclose(self, other: "MonicPoly | Sequence[complex]", atol: float) -> bool:
        theirs = other.coefficients if isinstance(other, MonicPoly) else np.asarray(other, dtype=complex)
        return theirs.shape == self.coefficients.shape and bool(np.max(np.abs(theirs - self.coefficients)) <= atol)

    def __repr__(self) -> str:
        tag = "" if self.monic else ", monic=False"
        return f"MonicPoly({self.coefficients.tolist()!r}{tag})"


def _coeffs(p: "MonicPoly | Sequence[complex] | np.ndarray") -> np.ndarray:
    return p.coefficients if isinstance(p, MonicPoly) else np.asarray(p, dtype=complex).reshape(-1)


def _reverse_conj(c: np.ndarray, n: int) -> np.ndarray:
    if c.size > n + 1:
        if np.any(c[n + 1:] != 0):
            raise DegreeError(f"polynomial has degree above the declared {n}")
        c = c[: n + 1]
    padded = np.zeros(n + 1, dtype=complex)
    padded[: c.size] = c
    return np.conj(padded[::-1])


def _szego_step(c: np.ndarray, alpha: complex) -> np.ndarray:
    k = c.size - 1
    out = np.zeros(k + 2, dtype=complex)
    out[1:] = c
    out[: k + 1] -= np.conj(alpha) * _reverse_conj(c, k)
    return out


def _phi_coeffs(word: VerblunskyWord, n: int) -> np.ndarray:
    if n < 0 or n > len(word):
        raise DegreeError(f"Φ_{n} needs {n} Verblunsky coefficients, word has {len(word)}")
    c = np.ones(1, dtype=complex)
    for alpha in word.coefficients[:n]:
        c = _szego_step(c, alpha)
    return c


def phi(word: WordLike, n: int) -> MonicPoly:
    """Monic orthogonal polynomial ``Φ_n`` from ``α_0, …, α_{n−1}``."""
    return MonicPoly(_phi_coeffs(as_word(word), n))


def star(p: "MonicPoly | Sequence[complex]", n: int) -> MonicPoly:
    """Reversed polynomial ``z^n conj(p(1/conj(z)))`` relative to the declared degree *n*."""
    return MonicPoly(_reverse_conj(_coeffs(p), n), degree=n, monic=False)


def psi(word: WordLike, n: int) -> MonicPoly:
    """Second-kind polynomial: ``Φ_n`` of the negated word."""
    return phi(as_word(word).negate(), n)


def popuc_first(word: WordLike, beta: "CirclePoint | complex", n: int) -> MonicPoly:
    """Paraorthogonal ``Φ_n(z; β) = z Φ_{n−1} − conj(β) Φ_{n−1}*``."""
    if n < 1:
        raise DegreeError("paraorthogonal polynomials start at degree 1")
    beta = as_point(beta)
    return MonicPoly(_szego_step(_phi_coeffs(as_word(word), n - 1), beta.value))


def popuc_second(word: WordLike, beta: "CirclePoint | complex", n: int) -> MonicPoly:
    """Second-kind paraorthogonal ``Ψ_n(z; β)``."""
    return popuc_first(as_word(word).negate(), beta, n)


def evaluate(p: "MonicPoly | Sequence[complex]", z):
    """Horner evaluation of *p* at scalar or array *z*."""
    return P.polyval(z, _coeffs(p))


def roots(p: "MonicPoly | Sequence[complex]") -> np.ndarray:
    """Companion-matrix roots; diagnostics only (theorem checks use CMV eigenvalues)."""
    return P.polyroots(_coeffs(p))


__all__ = [
    "TAU_DISK",
    "BoundaryCoefficient",
    "VerblunskyWord",
    "MonicPoly",
    "as_word",
    "phi",
    "star",
    "psi",
    "popuc_first",
    "popuc_second",
    "evaluate",
    "roots",
]
