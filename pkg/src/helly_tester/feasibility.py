"""Emptiness oracles for the intersection of a small tuple of convex sets.

Linear tuples go through an exact phase-1 linear program solved by a
randomized incremental method in dimension d+1. Tuples containing a ball go
through Dykstra's alternating projections, which only certifies the Feasible
side with a re-checked witness and the Infeasible side with a dual
certificate assembled from its increments. If neither appears within
``proj_max_iters`` cycles the answer is Infeasible without proof, which can
be wrong near tangency.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyTuple, ParamOutOfRange, StrictModeViolation
from .geometry import Ball, Box, ConvexSet, Halfspace, HPolytope, Row, is_linear


class Method(enum.Enum):
    EXACT_LP = "exact_lp"
    PROJECTION = "projection"


@dataclass(frozen=True)
class OracleConfig:
    feas_tol: float = 1e-9
    proj_tol: float = 1e-7
    proj_max_iters: int = 20000
    bound_M: float = 1e6
    rng_seed: int = 0
    # reject tuples containing balls instead of using the heuristic path
    strict: bool = False

    def __post_init__(self):
        if not (self.feas_tol > 0 and self.proj_tol > 0 and self.bound_M > 0):
            raise ParamOutOfRange("oracle tolerances and bound_M must be positive")
        if self.proj_max_iters < 1:
            raise ParamOutOfRange("proj_max_iters must be >= 1")


@dataclass(frozen=True)
class FeasibilityOutcome:
    """Feasible with a witness point, or Infeasible with the residual."""

    feasible: bool
    method: Method
    witness: Optional[np.ndarray] = None
    max_residual: Optional[float] = None
    # False only for a projection-path Infeasible reached by the iteration cap
    certified: bool = True

    def __bool__(self):
        return self.feasible


# ---------------------------------------------------------------------------
# randomized incremental LP
# ---------------------------------------------------------------------------

_VIOLATION_EPS = 1e-12
_CERT_EPS = 1e-9
_ZERO_EPS = 1e-12
_GAP_EPS = 1e-9


def _violates(a, b, y) -> bool:
    total = 0.0
    mag = abs(b)
    for ai, yi in zip(a, y):
        term = ai * yi
        total += term
        mag += abs(term)
    return total - b > _VIOLATION_EPS * (1.0 + mag)


def _solve_1d(c, rows, lo, hi):
    for (a,), b in rows:
        if a > 0.0:
            hi = min(hi, b / a)
        elif a < 0.0:
            lo = max(lo, b / a)
        elif b < -_VIOLATION_EPS * (1.0 + abs(b)):
            return None
    if lo > hi:
        if lo - hi > _GAP_EPS * (1.0 + abs(lo) + abs(hi)):
            return None
        return [0.5 * (lo + hi)]
    # c == 0 takes the lower end: lexicographically smallest optimizer
    return [lo if c >= 0.0 else hi]


def _clean(values, scale):
    cut = _ZERO_EPS * scale
    return [0.0 if abs(v) <= cut else v for v in values]


def _on_hyperplane(rows, a, b, j, lo_j, hi_j):
    """Rewrite ``rows`` and the bounds of y_j on the hyperplane ``a.y = b``.

    y_j is eliminated as ``y_j = (b - sum_{i != j} a_i y_i) / a_j``.
    """
    aj = a[j]
    rest = a[:j] + a[j + 1:]
    ratio = [v / aj for v in rest]
    amax = max((abs(v) for v in a), default=0.0)
    out = []
    for ar, br in rows:
        f = ar[j] / aj
        scale = max((abs(v) for v in ar), default=0.0) + abs(f) * amax
        coeffs = [v - f * w for v, w in zip(ar[:j] + ar[j + 1:], rest)]
        rhs = br - f * b
        if any(coeffs):
            coeffs = _clean(coeffs, scale)
        if abs(rhs) <= _ZERO_EPS * (abs(br) + abs(f * b)):
            rhs = 0.0
        out.append((coeffs, rhs))
    # y_j <= hi_j  and  y_j >= lo_j
    out.append(([-r for r in ratio], hi_j - b / aj))
    out.append((list(ratio), b / aj - lo_j))
    return out


def _seidel(c, rows, lo, hi, rng):
    """Minimize c.y over {a.y <= b for rows} within the box [lo, hi].

    Returns the optimizer as a list, or None if the region is empty.
    Constraints are inserted in random order; when the current optimum
    violates a new row, the problem is re-solved one dimension lower on that
    row's hyperplane. Expected O(k! m) work for k variables and m rows.
    """
    k = len(c)
    if k == 1:
        return _solve_1d(c[0], rows, lo[0], hi[0])
    y = [l if cj >= 0.0 else h for cj, l, h in zip(c, lo, hi)]
    order = list(range(len(rows)))
    rng.shuffle(order)
    for pos, i in enumerate(order):
        a, b = rows[i]
        if not _violates(a, b, y):
            continue
        j = max(range(k), key=lambda t: abs(a[t]))
        aj = a[j]
        if aj == 0.0:
            return None
        sub_rows = _on_hyperplane(
            [rows[t] for t in order[:pos]], a, b, j, lo[j], hi[j]
        )
        f = c[j] / aj
        cscale = max(abs(v) for v in c)
        sub_c = _clean([cv - f * av for cv, av in zip(c[:j] + c[j + 1:], a[:j] + a[j + 1:])], cscale)
        z = _seidel(sub_c, sub_rows, lo[:j] + lo[j + 1:], hi[:j] + hi[j + 1:], rng)
        if z is None:
            return None
        yj = (b - sum(av * zv for av, zv in zip(a[:j] + a[j + 1:], z))) / aj
        y = z[:j] + [yj] + z[j:]
    return y


def _phase1(rows: Sequence[Row], d: int, weights, bound_M: float, seed: int):
    """Minimize s subject to a.x <= b + s*w, |x_k| <= M, s >= -1.

    Returns ``(x, s)`` where s is recomputed as the largest weighted residual
    at x, which is the optimum unless the floor s = -1 is active.
    """
    if d == 0:
        s = max(-b / w for (_, b), w in zip(rows, weights))
        return np.zeros(0), s
    s_hi = 1.0 + max(
        (sum(abs(v) for v in a) * bound_M + abs(b)) / w for (a, b), w in zip(rows, weights)
    )
    lp_rows = [(list(a) + [-w], float(b)) for (a, b), w in zip(rows, weights)]
    c = [0.0] * d + [1.0]
    lo = [-bound_M] * d + [-1.0]
    hi = [bound_M] * d + [s_hi]
    y = _seidel(c, lp_rows, lo, hi, random.Random(seed))
    if y is None:
        # the phase-1 program is feasible by construction
        raise RuntimeError("phase-1 LP lost feasibility to rounding")
    x = np.asarray(y[:d])
    s = max((float(np.dot(a, x)) - b) / w for (a, b), w in zip(rows, weights))
    return x, max(s, -1.0)


def _check_rows(rows, d):
    if not rows:
        raise EmptyTuple("no constraint rows")
    for a, _ in rows:
        if len(a) != d:
            raise DimensionMismatch(f"row of length {len(a)} in dimension {d}")


def lp_feasible(rows: Sequence[Row], d: int, cfg: OracleConfig = OracleConfig()) -> FeasibilityOutcome:
    """Exact feasibility of ``{x : a_j.x <= b_j}`` via a phase-1 LP.

    The slack of row j is scaled by ``1 + |b_j|``; the system is declared
    feasible when the optimal slack is at most ``cfg.feas_tol``.
    """
    _check_rows(rows, d)
    weights = [1.0 + abs(b) for _, b in rows]
    x, s = _phase1(rows, d, weights, cfg.bound_M, cfg.rng_seed)
    if s <= cfg.feas_tol:
        return FeasibilityOutcome(True, Method.EXACT_LP, witness=x)
    return FeasibilityOutcome(False, Method.EXACT_LP, max_residual=s)


def separation_margin(rows: Sequence[Row], d: int, cfg: OracleConfig = OracleConfig()) -> float:
    """Signed Euclidean margin of a linear system.

    Negative values are minus the radius of the largest inscribed ball
    (capped at 1); positive values are the smallest uniform outward shift of
    all rows that makes the system feasible.
    """
    _check_rows(rows, d)
    weights = [math.sqrt(sum(v * v for v in a)) or 1.0 for a, _ in rows]
    _, s = _phase1(rows, d, weights, cfg.bound_M, cfg.rng_seed)
    return s


# ---------------------------------------------------------------------------
# alternating projections
# ---------------------------------------------------------------------------

def _elementary(sets):
    """Split polytopes into their rows; other kinds project in closed form."""
    parts = []
    for s in sets:
        if isinstance(s, HPolytope):
            parts.extend(Halfspace(a, b) for a, b in zip(s.A, s.b))
        else:
            parts.append(s)
    return parts


def _distance_outside(s: ConvexSet, x: np.ndarray) -> float:
    if isinstance(s, Ball):
        return max(0.0, float(np.linalg.norm(x - s.center)) - s.radius)
    if isinstance(s, Box):
        return float(np.linalg.norm(x - s.project(x)))
    A = np.atleast_2d(np.asarray(s.A if isinstance(s, HPolytope) else s.a))
    b = np.atleast_1d(np.asarray(s.b))
    excess = (A @ x - b) / np.linalg.norm(A, axis=1)
    return max(0.0, float(excess.max()))


def _support(part, v) -> float:
    """sup over the part of v.x; halfspace parts need v = lam*a with lam >= 0."""
    if isinstance(part, Ball):
        return float(v @ part.center) + part.radius * float(np.linalg.norm(v))
    if isinstance(part, Box):
        return float(np.maximum(v * part.lo, v * part.hi).sum())
    return float(v @ part.a) / float(np.dot(part.a, part.a)) * part.b


def _dual_value(parts, increments, pivot):
    """Value of the dual certificate built from Dykstra's increments.

    Halfspace increments are nonnegative multiples of their normals. The
    pivot ball absorbs minus their sum, so the multipliers add up to zero and
    a common point z would give ``0 = sum v_i.z <= sum support_i(v_i)``.
    A negative value therefore proves the intersection empty.
    """
    total = 0.0
    balance = np.zeros_like(increments[0])
    scale = 0.0
    for i, (part, v) in enumerate(zip(parts, increments)):
        if i == pivot:
            continue
        if isinstance(part, Halfspace):
            a = np.asarray(part.a)
            v = max(0.0, float(v @ a) / float(a @ a)) * a
        total += _support(part, v)
        balance += v
        scale += float(np.linalg.norm(v))
    total += _support(parts[pivot], -balance)
    return total, scale


def _projection_feasible(sets, d, cfg: OracleConfig) -> FeasibilityOutcome:
    parts = _elementary(sets)
    pivot = next(i for i, p in enumerate(parts) if isinstance(p, Ball))
    anchors = [np.asarray(s.center) for s in sets if isinstance(s, Ball)]
    anchors += [s.midpoint for s in sets if isinstance(s, Box)]
    x = np.mean(anchors, axis=0)
    reach = 1.0 + max(float(np.abs(c).max()) for c in anchors)
    increments = [np.zeros(d) for _ in parts]
    for _ in range(cfg.proj_max_iters):
        for i, part in enumerate(parts):
            y = part.project(x + increments[i])
            increments[i] = x + increments[i] - y
            x = y
        if all(s.contains(x, cfg.proj_tol) for s in sets):
            return FeasibilityOutcome(True, Method.PROJECTION, witness=x)
        value, scale = _dual_value(parts, increments, pivot)
        if value < -_CERT_EPS * scale * reach:
            certified = True
            break
    else:
        certified = False
    residual = max(_distance_outside(s, x) for s in sets)
    return FeasibilityOutcome(False, Method.PROJECTION, max_residual=residual, certified=certified)


def tuple_feasible(sets: Sequence[ConvexSet], d: int, cfg: OracleConfig = OracleConfig()) -> FeasibilityOutcome:
    """Decide whether the sets have a common point."""
    if len(sets) == 0:
        raise EmptyTuple("empty tuple")
    for s in sets:
        if s.dim != d:
            raise DimensionMismatch(f"set of dimension {s.dim} in a dimension-{d} tuple")
    if all(is_linear(s) for s in sets):
        rows = [row for s in sets for row in s.linear_constraints()]
        return lp_feasible(rows, d, cfg)
    if cfg.strict:
        raise StrictModeViolation("ball in tuple while strict=True")
    return _projection_feasible(sets, d, cfg)
