"""
Unambiguous delay-Doppler recovery from random phase coded pulse trains.

Encoding every transmitted pulse with an independent random phase makes
echoes from different range-ambiguity orders separable in slow time, so a
single-PRF pulse-Doppler radar can recover targets beyond its nominal
unambiguous range by sparse recovery - jointly over all pulses, at Nyquist
or sub-Nyquist (Fourier subset) sampling rates.
"""

from .signal_model import (
    NoiseSpec,
    PhaseCode,
    RadarParams,
    SpectralFloorError,
    Target,
    TargetScene,
    Waveform,
    lfm_sample,
    observe_time_domain,
    scene_from_grid,
    scene_from_targets,
    synthesize_coefficients,
    synthesize_ongrid,
    synthesize_received,
)
from .measurement import (
    FrequencySubset,
    SparseMap,
    build_A,
    build_B,
    forward_model,
    scene_to_map,
    select_subset,
    vectorize_model,
)
from .recovery import (
    L1Params,
    RecoveryConfig,
    TargetEstimate,
    build_overdiscretized,
    extract_targets,
    l1_vector,
    matrix_omp,
    nyquist_reduce,
    omp_vector,
)
from .analysis import (
    ExperimentConfig,
    ExperimentResult,
    HitCriterion,
    monte_carlo,
    nyquist_condition_check,
    score_hits,
    spark_bruteforce,
    theorem2_max_targets,
    verify_theorem1,
)
from .mprf import MprfConfig, mprf_cluster_resolve, mprf_recover_train, mprf_run

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "FrequencySubset",
    "HitCriterion",
    "L1Params",
    "MprfConfig",
    "NoiseSpec",
    "PhaseCode",
    "RadarParams",
    "RecoveryConfig",
    "SparseMap",
    "SpectralFloorError",
    "Target",
    "TargetEstimate",
    "TargetScene",
    "Waveform",
    "build_A",
    "build_B",
    "build_overdiscretized",
    "extract_targets",
    "forward_model",
    "l1_vector",
    "lfm_sample",
    "matrix_omp",
    "monte_carlo",
    "mprf_cluster_resolve",
    "mprf_recover_train",
    "mprf_run",
    "nyquist_condition_check",
    "nyquist_reduce",
    "observe_time_domain",
    "omp_vector",
    "scene_from_grid",
    "scene_from_targets",
    "scene_to_map",
    "score_hits",
    "select_subset",
    "spark_bruteforce",
    "synthesize_coefficients",
    "synthesize_ongrid",
    "synthesize_received",
    "theorem2_max_targets",
    "vectorize_model",
    "verify_theorem1",
]
