"""rootflow: executable continuity of polynomial roots.

Truncated infinitesimal series arithmetic with a standard-part map, polynomial
deformation machinery, root alignment by deflation with an optimal-matching
oracle, and an empirical modulus-of-continuity estimator, plus a batch CLI.
"""

from .align import (
    AlignConfig,
    Alignment,
    AlignmentError,
    DeflationStep,
    align_bottleneck,
    align_bottleneck_lists,
    align_by_deflation,
    alignment_distance,
    bottleneck_deviation,
    bottleneck_pairs,
    coefficient_scale,
    deflation_identity_residual,
)
from .continuity import (
    BracketError,
    ModulusConfig,
    ModulusCurve,
    ModulusPoint,
    estimate_delta,
    modulus_curve,
    perturbed,
    soundness_check,
    worst_distance,
)
from .deform import (
    DEFAULT_LADDER,
    DeformConfig,
    Deformation,
    HenselLiftError,
    LemmaReport,
    NotSimpleRootError,
    ReportItem,
    SampleEvaluationError,
    SingularInterpolationError,
    Trajectory,
    TrajectoryBundle,
    TrajectoryError,
    check_lemma1,
    check_lemma2,
    hensel_lift_root,
    is_infinitesimal_deformation,
    lift_paths_reconstruction,
    lift_residual_resolved,
    root_trajectories,
    sample_at,
    theorem1_applicable,
)
from .hyper import (
    DEFAULT_ORDER,
    DEFAULT_ZERO_TOL,
    HyperScalar,
    Magnitude,
    NotFiniteError,
    OrderExhaustedError,
    approx_eq,
    classify,
    div,
    embed,
    eps,
    evaluate_at,
    is_finite,
    mul,
    set_zero_tolerance,
    standard_part,
    valuation,
    zero_tolerance,
)
from .poly import (
    Poly,
    RootFindConfig,
    RootFindingError,
    RootSet,
    cluster_roots,
    find_roots,
    roots_oracle,
    standard_part_poly,
)

__version__ = "0.1.0"
