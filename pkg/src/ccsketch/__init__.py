"""ccsketch: frequency moments of turnstile streams at orders just below 1,
via maximally skewed stable random projections and the sample-minimum
estimator, plus Shannon/Renyi/Tsallis entropy approximation, one-sided tail
bounds with a sample-size planner, and a Monte Carlo harness that verifies
the bounds empirically.

Hot kernels run in a compiled Cython extension when available, with a pure
numpy fallback selected at import (see ``ccsketch.backend``).
"""

from ._backend import BACKEND as backend, available_backends
from .bounds import (BoundQuery, LeftTailBound, SamplePlan, ThetaQuery,
                     crossing_angle, crossing_angle_asymptotic,
                     left_tail_bound, left_tail_log_exponent,
                     log_stable_kernel, max_feasible_gap, right_tail_bound,
                     right_tail_bound_refined, sample_size, stable_cdf)
from .entropy import (EntropyEstimate, renyi_entropy, shannon_exact,
                      shannon_from_sketch, tsallis_entropy)
from .montecarlo import (SimulationSpec, TailCurve, TailPoint,
                         default_epsilon_grid, empirical_cdf_check,
                         figure1_dataset, figure1_panels, simulate_right_tail)
from .sampler import (StableParams, UniformExpPair, derive_pair,
                      projection_weight, skewed_stable)
from .sketch import (CCSketch, MomentEstimate, SketchConfig, StreamUpdate,
                     dense_project, exact_moment, load_sketch, save_sketch,
                     sketch_from_bytes, sketch_to_bytes)

__version__ = "0.1.0"

__all__ = [
    "backend", "available_backends", "__version__",
    # sampler
    "StableParams", "UniformExpPair", "derive_pair", "skewed_stable",
    "projection_weight",
    # sketch
    "StreamUpdate", "SketchConfig", "CCSketch", "MomentEstimate",
    "dense_project", "exact_moment", "save_sketch", "load_sketch",
    "sketch_to_bytes", "sketch_from_bytes",
    # bounds
    "BoundQuery", "ThetaQuery", "SamplePlan", "LeftTailBound",
    "log_stable_kernel", "stable_cdf", "right_tail_bound",
    "right_tail_bound_refined", "left_tail_bound", "left_tail_log_exponent",
    "sample_size", "max_feasible_gap", "crossing_angle",
    "crossing_angle_asymptotic",
    # entropy
    "EntropyEstimate", "renyi_entropy", "tsallis_entropy", "shannon_exact",
    "shannon_from_sketch",
    # montecarlo
    "SimulationSpec", "TailPoint", "TailCurve", "default_epsilon_grid",
    "simulate_right_tail", "empirical_cdf_check", "figure1_panels",
    "figure1_dataset",
]
