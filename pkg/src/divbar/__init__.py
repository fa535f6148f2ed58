"""Dividend-barrier estimation for spectrally negative Levy insurance surplus
processes, from one discretely observed sample path, via permutation-resampled
quasi-processes — validated against a closed-form scale-function oracle."""

from .levy_model import (
    IncrementSeries,
    ModelParams,
    SamplingScheme,
    StepPath,
    path_from_increments,
    simulate_increments,
    validate_params,
)
from .quasi_process import (
    Permutation,
    PermutationSet,
    build_quasi_path,
    iter_permutations,
    sample_permutation,
    sample_permutation_set,
)
from .dividend import (
    BarrierParams,
    DividendOutcome,
    ValueCurve,
    barrier_outcome,
    running_presup,
    value_curve,
)
from .estimator import ContrastCurve, Estimate, contrast, estimate_barrier, refine_argmax
from .oracle import (
    LundbergRoots,
    OracleResult,
    ScaleFunction,
    lundberg_roots,
    optimal_barrier,
    oracle_result,
    scale_eval,
    true_value,
)
from .experiment import CellReport, ExperimentConfig, GridSpec, parse_config, rep_seed, run_experiment
from .figures import emit_figures

__version__ = "0.1.0"

__all__ = [
    "ModelParams", "SamplingScheme", "IncrementSeries", "StepPath",
    "validate_params", "simulate_increments", "path_from_increments",
    "Permutation", "PermutationSet", "sample_permutation",
    "sample_permutation_set", "iter_permutations", "build_quasi_path",
    "BarrierParams", "DividendOutcome", "ValueCurve",
    "running_presup", "barrier_outcome", "value_curve",
    "ContrastCurve", "Estimate", "contrast", "estimate_barrier", "refine_argmax",
    "LundbergRoots", "ScaleFunction", "OracleResult",
    "lundberg_roots", "scale_eval", "true_value", "optimal_barrier", "oracle_result",
    "ExperimentConfig", "GridSpec", "CellReport",
    "parse_config", "rep_seed", "run_experiment", "emit_figures",
]
