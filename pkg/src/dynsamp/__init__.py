"""dynsamp: recoverability, reconstruction and placement for evolving signals.

Given a known linear evolution operator, the toolkit decides which spatial
sampling sites and time budgets allow stable recovery of any initial
signal, performs the least-squares reconstruction, searches for small
sensor sets, and numerically probes the frame behaviour of the
infinite-dimensional diagonal model at finite truncations.
"""
import os as _os

# Honor the thread cap before numpy initializes its backends (best effort:
# only effective when this package is imported before numpy).
_threads = _os.environ.get("DYNSAMP_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    DegenerateInput,
    DynsampError,
    HypothesisViolated,
    InfeasiblePlacement,
    NotDiagonalizable,
    NotFound,
    SearchSpaceTooLarge,
    UntrustedFactorizationWarning,
)
from .spectral import (  # noqa: E402
    JordanStructure,
    SpectralData,
    annihilator_degree,
    default_rank_tol,
    eigendecompose,
    jordan_structure,
    rank_with_tol,
)
from .feasibility import (  # noqa: E402
    FeasibilityReport,
    SamplingScheme,
    brute_force_feasible,
    check_diagonalizable,
    check_fixed_L,
    check_jordan,
    minimal_uniform_L,
    rational_form_counterexample,
)
from .sampling import (  # noqa: E402
    FrameReport,
    ReconstructionResult,
    TimeSpaceSamples,
    build_sampling_matrix,
    frame_bounds,
    reconstruct,
    simulate_samples,
)
from .placement import (  # noqa: E402
    PlacementResult,
    greedy_placement,
    minimal_placement_exhaustive,
)
from .hardy import (  # noqa: E402
    CarlesonReport,
    CompletenessReport,
    DiskSequence,
    FrameVerdict,
    GramianReport,
    MuntzReport,
    WeightedVector,
    carleson_products,
    circulant_riesz_demo,
    completeness_truncated,
    frame_failure_profile,
    geometric_sequence,
    gramian_matrix,
    muntz_defect,
    one_point_frame_verdict,
    polynomial_sequence,
    reference_weights,
    truncated_gramian,
)
from .estimators import (  # noqa: E402
    RecoverabilityAnalyzer,
    SensorPlacer,
    SpaceTimeSampler,
)
from . import demo  # noqa: E402

__all__ = [
    "CarlesonReport",
    "CompletenessReport",
    "DegenerateInput",
    "DiskSequence",
    "DynsampError",
    "FeasibilityReport",
    "FrameReport",
    "FrameVerdict",
    "GramianReport",
    "HypothesisViolated",
    "InfeasiblePlacement",
    "JordanStructure",
    "MuntzReport",
    "NotDiagonalizable",
    "NotFound",
    "PlacementResult",
    "RecoverabilityAnalyzer",
    "ReconstructionResult",
    "SamplingScheme",
    "SearchSpaceTooLarge",
    "SensorPlacer",
    "SpaceTimeSampler",
    "SpectralData",
    "TimeSpaceSamples",
    "UntrustedFactorizationWarning",
    "WeightedVector",
    "annihilator_degree",
    "brute_force_feasible",
    "build_sampling_matrix",
    "carleson_products",
    "check_diagonalizable",
    "check_fixed_L",
    "check_jordan",
    "circulant_riesz_demo",
    "completeness_truncated",
    "default_rank_tol",
    "demo",
    "eigendecompose",
    "frame_bounds",
    "frame_failure_profile",
    "geometric_sequence",
    "gramian_matrix",
    "greedy_placement",
    "jordan_structure",
    "minimal_placement_exhaustive",
    "minimal_uniform_L",
    "muntz_defect",
    "one_point_frame_verdict",
    "polynomial_sequence",
    "rank_with_tol",
    "rational_form_counterexample",
    "reconstruct",
    "reference_weights",
    "simulate_samples",
    "truncated_gramian",
]
