"""Monte Carlo harness for the tester's probability and cost guarantees."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .analysis import count_intersecting_tuples, depth_bruteforce
from .errors import EnumerationTooLarge, GroundTruthUnavailable, HypothesisNotMet, ParamOutOfRange
from .feasibility import OracleConfig, tuple_feasible
from .generators import lazy_common_point, lazy_pairwise_disjoint
from .geometry import Instance
from .tester import RNG_NAME, TesterConfig, run_tester

MIN_TRIALS = 1000


def trial_seed(master_seed: int, trial: int) -> int:
    """64-bit seed of one trial, a pure function of (master_seed, trial)."""
    state = np.random.SeedSequence([master_seed, trial]).generate_state(1, np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class CalibrationReport:
    trials: int
    passes: int
    empirical_pass_rate: float
    predicted_pass_rate: float
    binomial_sigma: float
    z_score: float
    t_used: int
    p_used: float
    master_seed: int
    rng: str = RNG_NAME

    def to_dict(self):
        return asdict(self)


def survive_probability(instance: Instance, cfg: OracleConfig = OracleConfig()) -> float:
    """Chance that one round draws an intersecting (d+1)-tuple, by enumeration."""
    n, d = instance.n, instance.dimension
    if n <= d + 1:
        return float(tuple_feasible(list(instance.sets), d, cfg).feasible)
    try:
        return count_intersecting_tuples(instance, d + 1, cfg).fraction
    except EnumerationTooLarge as exc:
        raise GroundTruthUnavailable(str(exc)) from exc


def _z(observed, predicted, sigma):
    if sigma > 0:
        return (observed - predicted) / sigma
    return 0.0 if observed == predicted else math.copysign(math.inf, observed - predicted)


def calibrate(
    instance: Instance,
    cfg: TesterConfig,
    trials: int,
    master_seed: int,
    p: Optional[float] = None,
    min_trials: int = MIN_TRIALS,
) -> CalibrationReport:
    """Run the tester ``trials`` times and compare the PASS rate with p**t.

    ``p`` is the per-round survive probability; it is enumerated when not
    given. Trial i uses seed ``trial_seed(master_seed, i)``, so results do
    not depend on the order in which trials are run.
    """
    if trials < min_trials:
        raise ParamOutOfRange(f"trials={trials} below the minimum of {min_trials}")
    if p is None:
        p = survive_probability(instance, cfg.oracle)
    t = 1 if instance.n <= instance.dimension + 1 else cfg.rounds
    passes = sum(
        run_tester(instance, replace(cfg, rng_seed=trial_seed(master_seed, i))).passed
        for i in range(trials)
    )
    predicted = p**t
    sigma = math.sqrt(predicted * (1.0 - predicted) / trials)
    rate = passes / trials
    return CalibrationReport(
        trials=trials,
        passes=passes,
        empirical_pass_rate=rate,
        predicted_pass_rate=predicted,
        binomial_sigma=sigma,
        z_score=_z(rate, predicted, sigma),
        t_used=t,
        p_used=p,
        master_seed=master_seed,
    )


@dataclass(frozen=True)
class BoundReport:
    """FAIL-rate check against 1 - epsilon for a family far from intersecting.

    ``required`` is ``1 - epsilon - 3*sigma`` with sigma the binomial
    standard deviation of a PASS rate equal to epsilon.
    """

    status: str  # "ok", "violated" or "HypothesisNotMet"
    depth: int
    threshold: float
    alpha: float
    epsilon: float
    fail_rate: Optional[float] = None
    required: Optional[float] = None
    calibration: Optional[CalibrationReport] = None

    @property
    def margin(self) -> Optional[float]:
        if self.fail_rate is None:
            return None
        return self.fail_rate - self.required

    def to_dict(self):
        out = asdict(self)
        out["margin"] = self.margin
        return out


def theorem_bound_check(
    instance: Instance,
    alpha: float,
    epsilon: float,
    oracle: OracleConfig = OracleConfig(),
    trials: int = 20000,
    master_seed: int = 0,
    p: Optional[float] = None,
    depth_max_n: Optional[int] = 64,
) -> BoundReport:
    """Verify the depth hypothesis, then measure the FAIL rate."""
    n, d = instance.n, instance.dimension
    try:
        depth = depth_bruteforce(instance, oracle, max_n=depth_max_n).depth
    except EnumerationTooLarge as exc:
        raise GroundTruthUnavailable(str(exc)) from exc
    threshold = alpha / (d + 1) * n
    if not depth < threshold:
        return BoundReport("HypothesisNotMet", depth, threshold, alpha, epsilon)
    cfg = TesterConfig(alpha, epsilon, oracle=oracle)
    report = calibrate(instance, cfg, trials, master_seed, p=p)
    return bound_from_calibration(report, depth, threshold, alpha, epsilon)


def bound_from_calibration(
    report: CalibrationReport, depth: int, threshold: float, alpha: float, epsilon: float
) -> BoundReport:
    if not depth < threshold:
        return BoundReport("HypothesisNotMet", depth, threshold, alpha, epsilon)
    fail_rate = 1.0 - report.empirical_pass_rate
    sigma = math.sqrt(epsilon * (1.0 - epsilon) / report.trials)
    required = 1.0 - epsilon - 3.0 * sigma
    status = "ok" if fail_rate >= required else "violated"
    return BoundReport(status, depth, threshold, alpha, epsilon, fail_rate, required, report)


def require_bound(report: BoundReport) -> BoundReport:
    """Raise unless the report is ``ok``."""
    if report.status == "HypothesisNotMet":
        raise HypothesisNotMet(f"depth {report.depth} >= threshold {report.threshold:.4g}")
    if report.status != "ok":
        raise AssertionError(f"FAIL rate {report.fail_rate} below {report.required}")
    return report


@dataclass(frozen=True)
class ProbeRow:
    n: int
    family: str
    seed: int
    verdict: str
    rounds_run: int
    oracle_calls: int
    index_reads: int
    seconds: float


@dataclass
class ProbeTable:
    d: int
    t: int
    rows: list[ProbeRow] = field(default_factory=list)

    def profile(self, n: int, family: str) -> Counter:
        """Multiset of (verdict, oracle_calls) for one n and family."""
        return Counter(
            (r.verdict, r.oracle_calls) for r in self.rows if r.n == n and r.family == family
        )

    @property
    def n_independent(self) -> bool:
        ns = sorted({r.n for r in self.rows})
        families = {r.family for r in self.rows}
        return all(
            self.profile(n, fam) == self.profile(ns[0], fam) for fam in families for n in ns
        )

    @property
    def reads_match(self) -> bool:
        return all(r.index_reads == (self.d + 1) * r.rounds_run for r in self.rows)


def query_count_probe(
    d: int,
    alpha: float,
    epsilon: float,
    n_values,
    seed: int = 0,
    runs: int = 10,
    oracle: OracleConfig = OracleConfig(),
) -> ProbeTable:
    """Count oracle calls and set reads of the tester for several family sizes.

    Families are built lazily, so only the sets the tester touches are ever
    constructed and every read is counted.
    """
    if any(n <= d + 1 for n in n_values):
        raise ParamOutOfRange("every n must exceed d+1")
    table = ProbeTable(d, TesterConfig(alpha, epsilon).rounds)
    builders = {"common-point": lazy_common_point, "disjoint": lazy_pairwise_disjoint}
    for n in n_values:
        for family, build in builders.items():
            for r in range(runs):
                instance = build(n, d, seed + r)
                cfg = TesterConfig(alpha, epsilon, rng_seed=seed + r, oracle=oracle)
                start = time.perf_counter()
                verdict = run_tester(instance, cfg)
                elapsed = time.perf_counter() - start
                table.rows.append(
                    ProbeRow(
                        n, family, seed + r, verdict.label, verdict.rounds_run,
                        verdict.oracle_calls, instance.sets.reads, elapsed,
                    )
                )
    return table
