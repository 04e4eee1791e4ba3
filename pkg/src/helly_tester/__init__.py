"""Sublinear-time randomized testing of whether n convex sets in R^d share a point."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DimensionMismatch,
    EmptyInstance,
    EmptyTuple,
    EnumerationTooLarge,
    GroundTruthUnavailable,
    HellyError,
    HypothesisNotMet,
    InvalidSet,
    ParamOutOfRange,
    ParseError,
    StrictModeViolation,
    TupleLargerThanFamily,
)
from .geometry import Ball, Box, ConvexSet, Halfspace, HPolytope, Instance, contains, linear_constraints, project  # noqa: E402
from .feasibility import FeasibilityOutcome, Method, OracleConfig, lp_feasible, tuple_feasible  # noqa: E402
from .tester import TesterConfig, Verdict, compute_rounds, run_tester, sample_tuple  # noqa: E402
from .analysis import (  # noqa: E402
    count_intersecting_tuples,
    depth_bruteforce,
    fractional_bound,
    helly_check,
    verify_corollary,
)
from .generators import gen_calibrated_1d, gen_common_point, gen_pairwise_disjoint, gen_random_linear  # noqa: E402
from .experiment import calibrate, query_count_probe, theorem_bound_check  # noqa: E402
