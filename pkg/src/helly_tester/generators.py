"""Seeded instance generators with known ground truth.

All generators are deterministic functions of their arguments.
Coordinates stay inside [-10, 10]^d, except for disjoint lattices with more
than 13 boxes per axis, which keep their unit boxes and 0.5 gaps instead.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ParamOutOfRange
from .feasibility import separation_margin
from .geometry import Ball, Box, ConvexSet, Halfspace, HPolytope, Instance

COMMON_POINT_MARGIN = 0.05
LINEAR_MARGIN = 1e-2
LATTICE_PITCH = 1.5  # unit boxes, gap 0.5


class Kind(enum.Enum):
    COMMON_POINT = "common-point"
    PAIRWISE_DISJOINT = "disjoint"
    CALIBRATED_1D = "calibrated1d"
    RANDOM_LINEAR = "random-linear"


@dataclass(frozen=True)
class GenSpec:
    kind: Kind
    n: int
    d: int
    seed: int
    k: Optional[int] = None

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ParamOutOfRange("n and d must be >= 1")
        if self.kind is Kind.CALIBRATED_1D:
            if self.d != 1:
                raise ParamOutOfRange("calibrated1d requires d = 1")
            if self.k is None or not 0 <= self.k <= self.n:
                raise ParamOutOfRange("calibrated1d requires 0 <= k <= n")


def generate(spec: GenSpec) -> Instance:
    if spec.kind is Kind.COMMON_POINT:
        return gen_common_point(spec.n, spec.d, spec.seed)
    if spec.kind is Kind.PAIRWISE_DISJOINT:
        return gen_pairwise_disjoint(spec.n, spec.d, spec.seed)
    if spec.kind is Kind.CALIBRATED_1D:
        return gen_calibrated_1d(spec.n, spec.k, spec.seed)
    return gen_random_linear(spec.n, spec.d, spec.seed)


def _unit(rng, d):
    while True:
        v = rng.normal(size=d)
        norm = math.sqrt(float(v @ v))
        if norm > 1e-3:
            return v / norm


# ---------------------------------------------------------------------------
# common point
# ---------------------------------------------------------------------------

def _anchor(seed, d):
    return np.random.default_rng(seed).uniform(-5.0, 5.0, size=d)


def _offset(rng, a, anchor, margin):
    # keep |b| <= 10 while leaving the anchor at distance >= margin inside
    base = float(a @ anchor)
    return base + rng.uniform(margin, max(margin, min(3.0, 10.0 - base)))


def _set_around(rng, anchor, margin=COMMON_POINT_MARGIN) -> ConvexSet:
    """A random set of random kind containing ``anchor`` with slack ``margin``."""
    d = anchor.shape[0]
    kind = rng.integers(4)
    if kind == 0:
        below = rng.uniform(margin, 4.0, size=d)
        above = rng.uniform(margin, 4.0, size=d)
        return Box(anchor - below, anchor + above)
    if kind == 1:
        radius = rng.uniform(0.5, 4.0)
        shift = _unit(rng, d) * rng.uniform(0.0, radius - margin)
        return Ball(anchor + shift, radius)
    if kind == 2:
        a = _unit(rng, d)
        return Halfspace(a, _offset(rng, a, anchor, margin))
    m = int(rng.integers(d + 1, 2 * d + 3))
    normals = [_unit(rng, d) for _ in range(m)]
    return HPolytope(tuple(normals), tuple(_offset(rng, a, anchor, margin) for a in normals))


def gen_common_point(n: int, d: int, seed: int) -> Instance:
    """n mixed sets that all contain one random anchor with margin 0.05.

    The anchor is ``common_point_anchor(d, seed)``.
    """
    anchor = _anchor(seed, d)
    rng = np.random.default_rng([seed, 1])
    return Instance(d, [_set_around(rng, anchor) for _ in range(n)])


def common_point_anchor(d: int, seed: int) -> np.ndarray:
    return _anchor(seed, d)


# ---------------------------------------------------------------------------
# pairwise disjoint
# ---------------------------------------------------------------------------

def _lattice_side(n, d):
    side = max(1, round(n ** (1.0 / d)))
    while side**d < n:
        side += 1
    return side


def _lattice_box(cell, side, d, jitter) -> Box:
    coords = []
    for _ in range(d):
        cell, r = divmod(cell, side)
        coords.append(r)
    lo = (np.asarray(coords) - (side - 1) / 2.0) * LATTICE_PITCH - 0.5 + jitter
    return Box(lo, lo + 1.0)


def gen_pairwise_disjoint(n: int, d: int, seed: int) -> Instance:
    """n unit boxes on a lattice of pitch 1.5, so every pair is 0.5 apart."""
    rng = np.random.default_rng(seed)
    side = _lattice_side(n, d)
    jitter = rng.uniform(-0.25, 0.25, size=d)
    cells = rng.permutation(side**d)[:n] if side**d <= 10**6 else range(n)
    return Instance(d, [_lattice_box(int(c), side, d, jitter) for c in cells])


# ---------------------------------------------------------------------------
# calibrated 1D
# ---------------------------------------------------------------------------

def gen_calibrated_1d(n: int, k: int, seed: int) -> Instance:
    """k intervals through 0 plus n-k isolated intervals to the right.

    Exactly C(k, 2) pairs intersect and the depth is max(k, 1), so one
    tester round survives with probability C(k, 2) / C(n, 2).
    """
    if not 0 <= k <= n:
        raise ParamOutOfRange(f"need 0 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    sets = [
        Box((rng.uniform(-5.0, -COMMON_POINT_MARGIN),), (rng.uniform(COMMON_POINT_MARGIN, 5.0),))
        for _ in range(k)
    ]
    m = n - k
    if m:
        pitch = max(min(1.5, 4.5 / m), 2 * LINEAR_MARGIN)
        width = pitch * 2.0 / 3.0
        sets += [Box((5.5 + i * pitch,), (5.5 + i * pitch + width,)) for i in range(m)]
    order = rng.permutation(n)
    return Instance(1, [sets[i] for i in order])


# ---------------------------------------------------------------------------
# random linear
# ---------------------------------------------------------------------------

def _random_linear_set(rng, d) -> ConvexSet:
    kind = rng.integers(3)
    if kind == 0:
        center = rng.uniform(-7.0, 7.0, size=d)
        half = rng.uniform(0.5, 3.0, size=d)
        return Box(center - half, center + half)
    if kind == 1:
        a = _unit(rng, d)
        p = rng.uniform(-6.0, 6.0, size=d)
        return Halfspace(a, float(np.clip(a @ p, -10.0, 10.0)))
    center = rng.uniform(-6.0, 6.0, size=d)
    m = int(rng.integers(d + 1, d + 4))
    normals = [_unit(rng, d) for _ in range(m)]
    return HPolytope(
        tuple(normals),
        tuple(float(a @ center) + rng.uniform(0.5, 3.0) for a in normals),
    )


def _well_separated(sets, d, margin) -> bool:
    rows = [row for s in sets for row in s.linear_constraints()]
    return abs(separation_margin(rows, d)) >= margin


def gen_random_linear(n: int, d: int, seed: int, margin: float = LINEAR_MARGIN, max_tries: int = 200) -> Instance:
    """Random boxes, halfspaces and small H-polytopes.

    Every subset of at most d+1 sets is either empty by a Euclidean gap of
    ``margin`` or contains a ball of radius ``margin``; a set that breaks this
    is redrawn.
    """
    if d not in (1, 2, 3):
        raise ParamOutOfRange("random-linear supports d in {1, 2, 3}")
    rng = np.random.default_rng(seed)
    sets: list[ConvexSet] = []
    for _ in range(n):
        for _ in range(max_tries):
            cand = _random_linear_set(rng, d)
            if not _well_separated([cand], d, margin):
                continue
            if all(
                _well_separated([*combo, cand], d, margin)
                for size in range(1, min(d, len(sets)) + 1)
                for combo in itertools.combinations(sets, size)
            ):
                break
        else:
            raise RuntimeError(f"no well-separated set after {max_tries} draws")
        sets.append(cand)
    return Instance(d, sets)


# ---------------------------------------------------------------------------
# lazy families
# ---------------------------------------------------------------------------

class LazyFamily(Sequence):
    """Read-only sequence that builds set i on access and counts the reads."""

    def __init__(self, n: int, factory: Callable[[int], ConvexSet]):
        self._n = n
        self._factory = factory
        self.reads = 0

    def __len__(self):
        return self._n

    def __getitem__(self, i):
        if isinstance(i, slice):
            raise TypeError("LazyFamily does not support slicing")
        if not 0 <= i < self._n:
            raise IndexError(i)
        self.reads += 1
        return self._factory(i)


def lazy_common_point(n: int, d: int, seed: int) -> Instance:
    """Like gen_common_point, but set i is drawn from its own stream on access."""
    anchor = _anchor(seed, d)
    return Instance(d, LazyFamily(n, lambda i: _set_around(np.random.default_rng([seed, 2, i]), anchor)))


def lazy_pairwise_disjoint(n: int, d: int, seed: int) -> Instance:
    side = _lattice_side(n, d)
    jitter = np.random.default_rng(seed).uniform(-0.25, 0.25, size=d)
    return Instance(d, LazyFamily(n, lambda i: _lattice_box(i, side, d, jitter)))
