"""
Short-cycle statistics of random Tanner graphs: configuration-model and
protograph-lift ensembles, exact cycle census, TBC walk analysis of
protographs and the matching closed-form predictions.
"""

from __future__ import annotations

from .census import CycleCensus, brute_force_census, census_any, count_chordless_cycles, count_cycles, list_cycles
from .ensembles import EnsembleKind, EnsembleSpec, SamplingError, draw
from .experiment import EnsembleReport, ExperimentConfig, replay, run_experiment
from .graph import (
    INF,
    BipartiteMultigraph,
    DegreeSequence,
    EdgeDistribution,
    ExponentMatrix,
    Protograph,
    girth,
    read_alist,
    validate,
    write_alist,
)
from .rng import RngStream
from .stats import factorial_moment, joint_independence_check, poisson_gof
from .tables import reproduce_table
from .theory import (
    MeanBounds,
    closed_walks_complete,
    cyclic_lift_mean_bounds,
    cyclic_lift_variance_bound,
    expected_cycles_biregular,
    expected_cycles_irregular,
    lets_multiplicity_estimate,
    specht_ratio,
    tbc_bound_biregular,
    tbc_count_complete,
)
from .walks import (
    EnumerationCapError,
    TbcWalk,
    enumerate_tbc_classes,
    is_prime_zp,
    is_zp,
    lifted_cycle_count,
    partition_walks,
    rooted_tbc_count,
    shift_signature,
    tbc_count,
    walk_shift_value,
)

__version__ = "0.1.0"
