"""Geometry of the unit circle: points, open arcs, cyclic order, interlacing.

Every theorem checker in :mod:`harness` ultimately reduces to the predicates in
this module, so they are deliberately strict:

* a point within ``TAU_MATCH`` of an arc endpoint is *ambiguous* and raises
  :class:`BoundaryAmbiguousError` instead of being classified;
* arguments are computed once (``np.angle`` mapped into ``[0, 2π)``) when a
  :class:`CirclePoint` is built and all ordering decisions compare those
  stored floats.

Arc ``(start, end)`` means the open counterclockwise arc from ``start`` to
``end``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BoundaryAmbiguousError,
    DuplicatePointError,
    NotOnCircleError,
    PreconditionError,
    SharedPointError,
    SizeMismatchError,
)

# Unit-modulus validation and point-identity tolerances.
TAU_CIRCLE = 1e-10
TAU_MATCH = 1e-8

TWO_PI = 2.0 * math.pi


def principal_arg(z: complex) -> float:
    """Argument of *z* in ``[0, 2π)``."""
    theta = math.atan2(z.imag, z.real) % TWO_PI
    # a tiny negative angle can round up to exactly 2π
    return 0.0 if theta >= TWO_PI else theta


@dataclass(frozen=True)
class CirclePoint:
    """A unimodular complex number with its principal argument cached."""

    value: complex
    arg: float = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        value = complex(self.value)
        if not math.isfinite(value.real) or not math.isfinite(value.imag):
            raise NotOnCircleError(f"non-finite point {value!r}")
        if abs(abs(value) - 1.0) > TAU_CIRCLE:
            raise NotOnCircleError(f"|{value!r}| = {abs(value):.3e} is not 1 within {TAU_CIRCLE:g}")
        # stored with modulus 1 to rounding
        value = value / abs(value)
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "arg", principal_arg(value))

    @classmethod
    def from_angle(cls, theta: float) -> "CirclePoint":
        return cls(complex(math.cos(theta), math.sin(theta)))

    def conj(self) -> "CirclePoint":
        return CirclePoint(self.value.conjugate())

    def near(self, other: "CirclePoint | complex", tol: float = TAU_MATCH) -> bool:
        other_value = other.value if isinstance(other, CirclePoint) else complex(other)
        return abs(self.value - other_value) <= tol

    def __complex__(self) -> complex:
        return self.value


def as_point(z: "CirclePoint | complex") -> CirclePoint:
    return z if isinstance(z, CirclePoint) else CirclePoint(complex(z))


@dataclass(frozen=True)
class OpenArc:
    """Open counterclockwise arc from ``start`` to ``end``."""

    start: CirclePoint
    end: CirclePoint

    def __post_init__(self) -> None:
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if self.start.near(self.end):
            raise PreconditionError("arc endpoints coincide; full-circle arcs are not supported")

    @property
    def length(self) -> float:
        """Angular length in ``(0, 2π)``."""
        return (self.end.arg - self.start.arg) % TWO_PI

    def reverse(self) -> "OpenArc":
        return OpenArc(self.end, self.start)

    def midpoint(self) -> CirclePoint:
        return CirclePoint.from_angle(self.start.arg + 0.5 * self.length)

    def shrink(self, fraction: float) -> "OpenArc":
        """Remove ``fraction`` of the length from each side."""
        if not 0.0 <= fraction < 0.5:
            raise PreconditionError(f"shrink fraction {fraction} outside [0, 0.5)")
        cut = fraction * self.length
        return OpenArc(
            CirclePoint.from_angle(self.start.arg + cut),
            CirclePoint.from_angle(self.end.arg - cut),
        )

    def sample(self, count: int) -> List[CirclePoint]:
        """``count`` interior points, evenly spaced, in counterclockwise order."""
        step = self.length / (count + 1)
        return [CirclePoint.from_angle(self.start.arg + k * step) for k in range(1, count + 1)]

    def to_json(self) -> List[List[float]]:
        return [[self.start.value.real, self.start.value.imag], [self.end.value.real, self.end.value.imag]]


def arc_contains(arc: OpenArc, zeta: "CirclePoint | complex") -> bool:
    """True iff *zeta* lies strictly inside *arc*.

    Raises
    ------
    BoundaryAmbiguousError
        If *zeta* is within ``TAU_MATCH`` of either endpoint.
    """
    zeta = as_point(zeta)
    if zeta.near(arc.start) or zeta.near(arc.end):
        raise BoundaryAmbiguousError(f"{zeta.value!r} is on the boundary of arc {arc.to_json()}")
    offset = (zeta.arg - arc.start.arg) % TWO_PI
    return 0.0 < offset < arc.length


def closed_arc_contains(arc: OpenArc, zeta: "CirclePoint | complex") -> bool:
    """Membership in the closed arc; endpoints match within ``TAU_MATCH``."""
    zeta = as_point(zeta)
    if zeta.near(arc.start) or zeta.near(arc.end):
        return True
    return arc_contains(arc, zeta)


def count_inside(arc: OpenArc, points: Iterable["CirclePoint | complex"], *, closed: bool = False) -> int:
    """Number of *points* in the open (or closed) arc.

    For the open arc, points within ``TAU_MATCH`` of an endpoint are counted as
    outside rather than raising.
    """
    total = 0
    for p in points:
        p = as_point(p)
        if p.near(arc.start) or p.near(arc.end):
            total += int(closed)
        elif arc_contains(arc, p):
            total += 1
    return total


@dataclass(frozen=True)
class CyclicSet:
    """Distinct circle points in counterclockwise order from the smallest argument.

    Build instances with :func:`cyclic_order`; the constructor only validates.
    """

    points: Tuple[CirclePoint, ...]

    def __post_init__(self) -> None:
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        args = [p.arg for p in pts]
        if any(b <= a for a, b in zip(args, args[1:])):
            raise PreconditionError("points are not in cyclic order")
        _check_distinct(pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[CirclePoint]:
        return iter(self.points)

    def __getitem__(self, idx: int) -> CirclePoint:
        return self.points[idx]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points], dtype=complex)

    @property
    def args(self) -> np.ndarray:
        return np.array([p.arg for p in self.points], dtype=float)

    def gaps(self) -> List[OpenArc]:
        """Consecutive arcs ``(p_j, p_{j+1})`` followed by the wrap arc ``(p_ℓ, p_1)``."""
        n = len(self.points)
        if n < 2:
            return []
        return [OpenArc(self.points[j], self.points[(j + 1) % n]) for j in range(n)]

    def largest_gap(self) -> Optional[OpenArc]:
        arcs = self.gaps()
        return max(arcs, key=lambda a: a.length) if arcs else None

    def rotate(self, factor: "CirclePoint | complex") -> "CyclicSet":
        u = as_point(factor).value
        return cyclic_order(p.value * u for p in self.points)

    def union(self, other: Iterable["CirclePoint | complex"]) -> "CyclicSet":
        return cyclic_order(list(self.points) + [as_point(p) for p in other])

    def without(self, point: "CirclePoint | complex") -> "CyclicSet":
        """Drop the member nearest to *point* (which must be within ``TAU_MATCH``)."""
        target = as_point(point)
        idx = int(np.argmin(np.abs(self.values - target.value)))
        if not self.points[idx].near(target):
            raise PreconditionError(f"{target.value!r} is not a member")
        return CyclicSet(self.points[:idx] + self.points[idx + 1:])

    def nearest(self, point: "CirclePoint | complex") -> Tuple[CirclePoint, float]:
        target = as_point(point)
        dist = np.abs(self.values - target.value)
        idx = int(np.argmin(dist))
        return self.points[idx], float(dist[idx])

    def to_json(self) -> List[List[float]]:
        return [[p.value.real, p.value.imag] for p in self.points]


def _check_distinct(ordered: Sequence[CirclePoint]) -> None:
    # in argument order the closest pair is always adjacent (wrap included)
    n = len(ordered)
    if n < 2:
        return
    for j in range(n):
        a, b = ordered[j], ordered[(j + 1) % n]
        if a.near(b):
            raise DuplicatePointError(f"points {a.value!r} and {b.value!r} coincide within {TAU_MATCH:g}")


def cyclic_order(points: Iterable["CirclePoint | complex"]) -> CyclicSet:
    """Sort *points* counterclockwise starting from the smallest argument in ``[0, 2π)``.

    Raises
    ------
    DuplicatePointError
        If two points coincide within ``TAU_MATCH``.
    """
    pts = sorted((as_point(p) for p in points), key=lambda p: p.arg)
    _check_distinct(pts)
    return CyclicSet(tuple(pts))


@dataclass(frozen=True)
class InterlaceVerdict:
    """Outcome of :func:`strictly_interlace`; truthy iff the sets interlace."""

    holds: bool
    counts: Tuple[int, ...]
    witness: Optional[OpenArc] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "counts": list(self.counts),
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def strictly_interlace(a: CyclicSet, b: CyclicSet) -> InterlaceVerdict:
    """Decide whether *a* and *b* strictly interlace.

    ``counts[j]`` is the number of members of *b* in the gap ``(a_j, a_{j+1})``
    (the last entry is the wrap gap). The sets interlace iff every count is 1;
    otherwise the witness is the first gap of *a* containing no member of *b*.

    Raises
    ------
    SizeMismatchError
        If the sets are empty or differ in size.
    SharedPointError
        If a member of *b* is within ``TAU_MATCH`` of a member of *a*.
    """
    if len(a) != len(b) or len(a) == 0:
        raise SizeMismatchError(f"cannot interlace sets of sizes {len(a)} and {len(b)}")
    a_vals = a.values
    for p in b:
        if np.min(np.abs(a_vals - p.value)) <= TAU_MATCH:
            raise SharedPointError(f"{p.value!r} belongs to both sets", point=p.value)

    ell = len(a)
    if ell == 1:
        # the only gap is the punctured circle
        return InterlaceVerdict(True, (1,))

    # b_k lies in gap j where a_j is the last member of a with smaller argument;
    # members before a_1 fall into the wrap gap
    slot = np.searchsorted(a.args, b.args, side="right") - 1
    slot[slot < 0] = ell - 1
    counts = tuple(int(c) for c in np.bincount(slot, minlength=ell))
    if all(c == 1 for c in counts):
        return InterlaceVerdict(True, counts)
    empty = counts.index(0)
    return InterlaceVerdict(False, counts, OpenArc(a[empty], a[(empty + 1) % ell]))


__all__ = [
    "TAU_CIRCLE",
    "TAU_MATCH",
    "CirclePoint",
    "OpenArc",
    "CyclicSet",
    "InterlaceVerdict",
    "principal_arg",
    "as_point",
    "arc_contains",
    "closed_arc_contains",
    "count_inside",
    "cyclic_order",
    "strictly_interlace",
]
