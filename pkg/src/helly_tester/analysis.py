"""Exhaustive ground truth for small families.

Everything here is exponential in n and meant for desk-scale instances:
tuple censuses, the depth (largest number of sets with a common point),
the fractional Helly bound and a check of its (d+1)-tuple corollary.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

from .errors import EnumerationTooLarge, ParamOutOfRange
from .feasibility import OracleConfig, tuple_feasible
from .geometry import Instance

DEFAULT_ENUMERATION_CAP = 10**6
DEFAULT_DEPTH_MAX_N = 20


@dataclass(frozen=True)
class TupleCensus:
    q: int
    total: int
    intersecting: int

    @property
    def fraction(self) -> float:
        return self.intersecting / self.total if self.total else 0.0

    def to_dict(self):
        return {**asdict(self), "fraction": self.fraction}


@dataclass(frozen=True)
class DepthResult:
    depth: int
    witness_subset: tuple[int, ...]

    def to_dict(self):
        return {"depth": self.depth, "witness_subset": list(self.witness_subset)}


@dataclass(frozen=True)
class CorollaryReport:
    n: int
    d: int
    alpha: float
    depth: int
    threshold: float
    census: TupleCensus
    hypothesis: bool  # depth < alpha/(d+1) * n
    conclusion: bool  # intersecting fraction < alpha

    @property
    def holds(self) -> bool:
        return self.conclusion or not self.hypothesis

    def to_dict(self):
        out = asdict(self)
        out["census"] = self.census.to_dict()
        out["holds"] = self.holds
        return out


@dataclass(frozen=True)
class HellyCheck:
    whole_family_feasible: bool
    all_tuples_feasible: bool

    @property
    def consistent(self) -> bool:
        return self.whole_family_feasible == self.all_tuples_feasible


def _feasible(instance, idx, cfg):
    return tuple_feasible(instance.subfamily(idx), instance.dimension, cfg).feasible


def count_intersecting_tuples(
    instance: Instance,
    q: int,
    cfg: OracleConfig = OracleConfig(),
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> TupleCensus:
    """Count q-subsets with a common point, in lexicographic order."""
    n = instance.n
    if not 1 <= q <= n:
        raise ParamOutOfRange(f"q={q} outside [1, {n}]")
    total = math.comb(n, q)
    if total > cap:
        raise EnumerationTooLarge(f"C({n}, {q}) = {total} exceeds cap {cap}")
    hits = sum(
        _feasible(instance, idx, cfg) for idx in itertools.combinations(range(n), q)
    )
    return TupleCensus(q, total, hits)


def depth_bruteforce(
    instance: Instance,
    cfg: OracleConfig = OracleConfig(),
    max_n: int | None = DEFAULT_DEPTH_MAX_N,
    budget: int = DEFAULT_ENUMERATION_CAP,
) -> DepthResult:
    """Largest k such that some k sets share a point.

    The whole family is tried first. Otherwise feasible subsets are grown
    level by level; a candidate k-subset is queried only if all of its
    (k-1)-subsets were feasible, since supersets of empty intersections are
    empty. The search ends at the first level with no feasible subset, so
    every subset one larger than the depth is known to be empty. At most
    ``budget`` oracle calls are made.
    """
    n = instance.n
    if max_n is not None and n > max_n:
        raise EnumerationTooLarge(f"n={n} exceeds the depth enumeration limit {max_n}")
    calls = 0

    def feasible(idx):
        nonlocal calls
        calls += 1
        if calls > budget:
            raise EnumerationTooLarge(f"depth search exceeded {budget} oracle calls")
        return _feasible(instance, idx, cfg)

    everything = tuple(range(n))
    if feasible(everything):
        return DepthResult(n, everything)

    level = [(i,) for i in range(n) if feasible((i,))]
    if not level:
        return DepthResult(0, ())
    while True:
        known = set(level)
        grown = []
        for x, y in itertools.combinations(level, 2):
            if x[:-1] != y[:-1]:
                continue
            cand = x + (y[-1],)
            if all(cand[:i] + cand[i + 1:] in known for i in range(len(cand) - 2)):
                if feasible(cand):
                    grown.append(cand)
        if not grown:
            return DepthResult(len(level[0]), level[0])
        level = grown


def fractional_bound(alpha: float, q: int, d: int) -> float:
    """Guaranteed depth fraction ``(alpha / C(q, d)) ** (1 / (q - d))``."""
    if not (d > 0 and q > d):
        raise ParamOutOfRange(f"need q > d > 0, got q={q}, d={d}")
    if not 0.0 < alpha <= 1.0:
        raise ParamOutOfRange(f"alpha={alpha} outside (0, 1]")
    return (alpha / math.comb(q, d)) ** (1.0 / (q - d))


def verify_corollary(
    instance: Instance,
    alpha: float,
    cfg: OracleConfig = OracleConfig(),
    cap: int = DEFAULT_ENUMERATION_CAP,
    depth: DepthResult | None = None,
) -> CorollaryReport:
    """Check: depth < alpha/(d+1)*n implies fewer than alpha*C(n, d+1) tuples meet."""
    n, d = instance.n, instance.dimension
    if n < d + 1:
        raise ParamOutOfRange(f"need n >= d+1 to census (d+1)-tuples, got n={n}")
    if depth is None:
        depth = depth_bruteforce(instance, cfg)
    census = count_intersecting_tuples(instance, d + 1, cfg, cap)
    threshold = alpha / (d + 1) * n
    return CorollaryReport(
        n=n,
        d=d,
        alpha=alpha,
        depth=depth.depth,
        threshold=threshold,
        census=census,
        hypothesis=depth.depth < threshold,
        conclusion=census.fraction < alpha,
    )


def helly_check(instance: Instance, cfg: OracleConfig = OracleConfig(), cap: int = DEFAULT_ENUMERATION_CAP) -> HellyCheck:
    """Compare whole-family feasibility with feasibility of all (d+1)-tuples."""
    n, d = instance.n, instance.dimension
    whole = _feasible(instance, tuple(range(n)), cfg)
    census = count_intersecting_tuples(instance, min(d + 1, n), cfg, cap)
    return HellyCheck(whole, census.intersecting == census.total)
