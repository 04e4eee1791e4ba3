"""Convex set representations in R^d.

Four kinds are supported: halfspaces, H-polytopes (finite intersections of
halfspaces), axis-aligned boxes and Euclidean balls. All of them are closed,
so boundary points are members. Values are immutable; coordinates are stored
as tuples of floats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, EmptyInstance, InvalidSet

Row = tuple[tuple[float, ...], float]

#: H-polytopes may carry at most ``MAX_ROWS_PER_DIM * d`` rows.
MAX_ROWS_PER_DIM = 64


def _vec(values, name) -> tuple[float, ...]:
    if isinstance(values, np.ndarray):
        values = values.ravel().tolist()
    out = tuple(map(float, values))
    if not all(map(math.isfinite, out)):
        raise InvalidSet(f"{name} has non-finite entries")
    return out


def _point(p, dim: int) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise DimensionMismatch(f"point of shape {x.shape} in dimension {dim}")
    return x


def _relaxed(b: float, tol: float) -> float:
    return b + tol * (1.0 + abs(b))


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``{x : a.x <= b}``."""

    a: tuple[float, ...]
    b: float

    def __post_init__(self):
        object.__setattr__(self, "a", _vec(self.a, "a"))
        object.__setattr__(self, "b", float(self.b))
        if not self.a:
            raise InvalidSet("halfspace normal is empty")
        if not any(self.a):
            raise InvalidSet("halfspace normal is the zero vector")
        if not math.isfinite(self.b):
            raise InvalidSet("halfspace offset is not finite")

    @property
    def dim(self) -> int:
        return len(self.a)

    def contains(self, p, tol: float = 0.0) -> bool:
        x = _point(p, self.dim)
        return float(np.dot(self.a, x)) <= _relaxed(self.b, tol)

    def project(self, p) -> np.ndarray:
        x = _point(p, self.dim)
        a = np.asarray(self.a)
        excess = float(a @ x) - self.b
        if excess <= 0.0:
            return x.copy()
        return x - (excess / float(a @ a)) * a

    def linear_constraints(self) -> list[Row]:
        return [(self.a, self.b)]


@dataclass(frozen=True)
class HPolytope:
    """Intersection of the halfspaces ``A[j].x <= b[j]``.

    The row count is capped at ``MAX_ROWS_PER_DIM * d`` so that the cost of
    a set depends on the dimension only.
    """

    A: tuple[tuple[float, ...], ...]
    b: tuple[float, ...]

    def __post_init__(self):
        A = tuple(_vec(row, "A row") for row in self.A)
        b = _vec(self.b, "b")
        if not A:
            raise InvalidSet("polytope needs at least one row")
        if len(A) != len(b):
            raise InvalidSet(f"{len(A)} rows but {len(b)} offsets")
        dim = len(A[0])
        if dim == 0 or any(len(row) != dim for row in A):
            raise DimensionMismatch("polytope rows have inconsistent lengths")
        if any(not any(row) for row in A):
            raise InvalidSet("polytope row with zero normal")
        if len(A) > MAX_ROWS_PER_DIM * dim:
            raise InvalidSet(
                f"{len(A)} rows exceeds the cap of {MAX_ROWS_PER_DIM * dim} for d={dim}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_rows(cls, rows: Sequence[Row]) -> "HPolytope":
        return cls(tuple(a for a, _ in rows), tuple(b for _, b in rows))

    @property
    def dim(self) -> int:
        return len(self.A[0])

    def contains(self, p, tol: float = 0.0) -> bool:
        x = _point(p, self.dim)
        lhs = np.asarray(self.A) @ x
        return all(v <= _relaxed(b, tol) for v, b in zip(lhs.tolist(), self.b))

    def project(self, p, tol: float = 1e-12, max_iters: int = 100000) -> np.ndarray:
        """Nearest point, computed with Dykstra's method over the rows."""
        x = _point(p, self.dim).copy()
        if self.contains(x):
            return x
        halfspaces = [Halfspace(a, b) for a, b in zip(self.A, self.b)]
        increments = [np.zeros_like(x) for _ in halfspaces]
        for _ in range(max_iters):
            start = x.copy()
            for i, h in enumerate(halfspaces):
                y = h.project(x + increments[i])
                increments[i] = x + increments[i] - y
                x = y
            if np.linalg.norm(x - start) <= tol * (1.0 + np.linalg.norm(x)):
                break
        return x

    def linear_constraints(self) -> list[Row]:
        return list(zip(self.A, self.b))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod_k [lo_k, hi_k]``."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lo", _vec(self.lo, "lo"))
        object.__setattr__(self, "hi", _vec(self.hi, "hi"))
        if len(self.lo) != len(self.hi) or not self.lo:
            raise DimensionMismatch("box corners differ in length")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise InvalidSet("box has lo > hi")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def midpoint(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lo) + np.asarray(self.hi))

    def contains(self, p, tol: float = 0.0) -> bool:
        # same relative slack as the two rows per axis from linear_constraints
        x = _point(p, self.dim)
        return all(
            -v <= _relaxed(-l, tol) and v <= _relaxed(h, tol)
            for v, l, h in zip(x.tolist(), self.lo, self.hi)
        )

    def project(self, p) -> np.ndarray:
        return np.clip(_point(p, self.dim), self.lo, self.hi)

    def linear_constraints(self) -> list[Row]:
        rows = []
        for k in range(self.dim):
            e = [0.0] * self.dim
            e[k] = -1.0
            rows.append((tuple(e), -self.lo[k]))
            e[k] = 1.0
            rows.append((tuple(e), self.hi[k]))
        return rows


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, "center"))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.center:
            raise InvalidSet("ball center is empty")
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise InvalidSet("ball radius must be finite and >= 0")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, p, tol: float = 0.0) -> bool:
        x = _point(p, self.dim)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def project(self, p) -> np.ndarray:
        x = _point(p, self.dim)
        c = np.asarray(self.center)
        dist = float(np.linalg.norm(x - c))
        if dist <= self.radius:
            return x.copy()
        return c + (self.radius / dist) * (x - c)

    def linear_constraints(self) -> None:
        return None


ConvexSet = Union[Halfspace, HPolytope, Box, Ball]


def contains(s: ConvexSet, p, tol: float = 0.0) -> bool:
    """Membership with slack ``tol``.

    Linear constraints ``a.x <= b`` are relaxed to ``a.x <= b + tol*(1+|b|)``
    (boxes count as two such rows per axis); balls use ``|x-c| <= r + tol``.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return s.contains(p, tol)


def project(s: ConvexSet, p) -> np.ndarray:
    """Euclidean projection of ``p`` onto ``s``."""
    return s.project(p)


def linear_constraints(s: ConvexSet) -> Optional[list[Row]]:
    """Rows ``(a, b)`` describing ``s``, or None for balls."""
    return s.linear_constraints()


def is_linear(s: ConvexSet) -> bool:
    return not isinstance(s, Ball)


@dataclass(frozen=True)
class Instance:
    """A dimension plus an ordered family of convex sets.

    ``sets`` may be any sequence; plain lists are frozen into tuples and
    checked eagerly, other sequences (lazy families) are trusted.
    """

    dimension: int
    sets: Sequence[ConvexSet]

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionMismatch("dimension must be a positive integer")
        sets = self.sets
        if isinstance(sets, list):
            sets = tuple(sets)
            object.__setattr__(self, "sets", sets)
        if len(sets) == 0:
            raise EmptyInstance("instance has no sets")
        if isinstance(sets, tuple):
            for i, s in enumerate(sets):
                if s.dim != self.dimension:
                    raise DimensionMismatch(
                        f"set {i} has dimension {s.dim}, instance has {self.dimension}"
                    )
        if len(sets) <= self.dimension:
            warnings.warn(
                f"n={len(sets)} <= d={self.dimension}; Helly-type guarantees need n > d",
                stacklevel=2,
            )

    @property
    def n(self) -> int:
        return len(self.sets)

    def subfamily(self, indices) -> list[ConvexSet]:
        return [self.sets[i] for i in indices]
