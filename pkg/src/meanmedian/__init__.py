"""Exact computation and interval certification for mean/median sequences.

The package computes the sequence generated from {0, x, 1} by repeatedly
appending the point that balances the mean of the new multiset against the
median of the old one, certifies maximal intervals on which the sequence's
combinatorial type (and hence its length and affine limit formula) is
constant, and analyses the permutation transitions between adjacent
intervals.  All arithmetic is exact.
"""
from meanmedian._backend import BACKEND
from meanmedian.certify import (
    Atom,
    DiscontinuityDetected,
    EpsTooLarge,
    EpsUnderflow,
    Segment,
    SingletonPiece,
    Subinterval,
    SweepConfig,
    SweepState,
    aggregate,
    certify_atom,
    driving_list_of,
    sweep,
)
from meanmedian.chain import (
    Chain,
    DrivingList,
    EmptyIntervalError,
    InconsistentDrivingList,
    SymbolicRun,
    UnboundedChainError,
    dedupe_chain,
    reduce_chain,
    replay_driving_list,
    symbolic_median,
)
from meanmedian.exact import (
    AffineForm,
    Rational,
    RInterval,
    affine_eval,
    affine_intersection,
    format_rational,
    parse_rational,
)
from meanmedian.perms import (
    CycleForm,
    Permutation,
    cycle_decomposition,
    sigma_between,
    sigma_sequence,
)
from meanmedian.trajectory import (
    DEFAULT_THRESHOLD,
    NotTerminated,
    RunLimit,
    Trajectory,
    median_of,
    normalize_triple,
    run_trajectory,
    verify_stability,
)

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "Atom",
    "BACKEND",
    "Chain",
    "CycleForm",
    "DEFAULT_THRESHOLD",
    "DiscontinuityDetected",
    "DrivingList",
    "EmptyIntervalError",
    "EpsTooLarge",
    "EpsUnderflow",
    "InconsistentDrivingList",
    "NotTerminated",
    "Permutation",
    "RInterval",
    "Rational",
    "RunLimit",
    "Segment",
    "SingletonPiece",
    "Subinterval",
    "SweepConfig",
    "SweepState",
    "SymbolicRun",
    "Trajectory",
    "UnboundedChainError",
    "affine_eval",
    "affine_intersection",
    "aggregate",
    "certify_atom",
    "cycle_decomposition",
    "dedupe_chain",
    "driving_list_of",
    "format_rational",
    "median_of",
    "normalize_triple",
    "parse_rational",
    "reduce_chain",
    "replay_driving_list",
    "run_trajectory",
    "sigma_between",
    "sigma_sequence",
    "sweep",
    "symbolic_median",
    "verify_stability",
]
