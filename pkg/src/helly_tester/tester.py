"""Randomized tester for nonempty intersection of a convex family.

Each round draws a uniformly random (d+1)-subset of the family and asks the
oracle whether it has a common point; one empty subset means FAIL. If the
whole family intersects every round passes (Helly), and if no point lies in
``alpha/(d+1) * n`` of the sets the survival probability per round is below
alpha, so ``t = ceil(log_alpha(epsilon))`` rounds reject with probability at
least ``1 - epsilon``. The work done is independent of n.

Randomness comes from :class:`random.Random` (Mersenne Twister) seeded with
``TesterConfig.rng_seed``; rounds consume one stream in order, so a run is
reproducible from the seed alone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import EmptyInstance, ParamOutOfRange, TupleLargerThanFamily
from .feasibility import OracleConfig, tuple_feasible
from .geometry import Instance

RNG_NAME = "python-random-mt19937"


def _check_open_unit(name, value):
    if not (0.0 < value < 1.0):
        raise ParamOutOfRange(f"{name}={value!r} must lie in the open interval (0, 1)")


def compute_rounds(alpha: float, epsilon: float) -> int:
    """Smallest t >= 1 with ``alpha**t <= epsilon``."""
    _check_open_unit("alpha", alpha)
    _check_open_unit("epsilon", epsilon)
    t = max(1, math.ceil(math.log(epsilon) / math.log(alpha)))
    # the float logarithm can land one off in either direction
    while t > 1 and alpha ** (t - 1) <= epsilon:
        t -= 1
    while alpha**t > epsilon:
        t += 1
    return t


@dataclass(frozen=True)
class TesterConfig:
    alpha: float
    epsilon: float
    rounds_override: Optional[int] = None
    rng_seed: int = 0
    oracle: OracleConfig = field(default_factory=OracleConfig)

    def __post_init__(self):
        _check_open_unit("alpha", self.alpha)
        _check_open_unit("epsilon", self.epsilon)
        if self.rounds_override is not None and self.rounds_override < 1:
            raise ParamOutOfRange("rounds_override must be >= 1")

    @property
    def rounds(self) -> int:
        if self.rounds_override is not None:
            return self.rounds_override
        return compute_rounds(self.alpha, self.epsilon)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one tester run.

    On FAIL, ``round`` is the 1-based round that found the empty tuple and
    ``tuple_indices`` lists its members in ascending order.
    """

    passed: bool
    rounds_run: int
    oracle_calls: int
    index_reads: int
    round: Optional[int] = None
    tuple_indices: Optional[tuple[int, ...]] = None

    @property
    def label(self) -> str:
        return "PASS" if self.passed else "FAIL"


def sample_tuple(n: int, k: int, rng: random.Random) -> list[int]:
    """Uniform random k-subset of ``range(n)``, sorted ascending. O(k) time."""
    if k < 1:
        raise ParamOutOfRange("k must be >= 1")
    if k > n:
        raise TupleLargerThanFamily(f"cannot draw {k} distinct indices from {n}")
    return sorted(rng.sample(range(n), k))


def run_tester(instance: Instance, cfg: TesterConfig) -> Verdict:
    sets = instance.sets
    n, d = len(sets), instance.dimension
    if n == 0:
        raise EmptyInstance("instance has no sets")
    k = d + 1
    if n <= k:
        # sampling degenerates; check the whole family once
        outcome = tuple_feasible([sets[i] for i in range(n)], d, cfg.oracle)
        if outcome.feasible:
            return Verdict(True, rounds_run=1, oracle_calls=1, index_reads=n)
        return Verdict(False, 1, 1, n, round=1, tuple_indices=tuple(range(n)))

    rng = random.Random(cfg.rng_seed)
    reads = 0
    t = cfg.rounds
    for r in range(1, t + 1):
        idx = sample_tuple(n, k, rng)
        members = [sets[i] for i in idx]
        reads += k
        if not tuple_feasible(members, d, cfg.oracle).feasible:
            return Verdict(False, r, r, reads, round=r, tuple_indices=tuple(idx))
    return Verdict(True, t, t, reads)
