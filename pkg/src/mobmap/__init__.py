"""Random bipartite planar maps via labeled mobiles.

Sampling, the chord construction from mobiles to maps, distance bounds and
grid metrics on both the discrete and continuum sides, and the Monte Carlo
experiment campaigns that check the scaling-limit predictions.
"""

from ._fit import FitError, bootstrap_slope_interval, loglog_slope
from .bdg import (
    BASE_VERTEX,
    MapValidation,
    PlanarMap,
    PointedMap,
    as_planar,
    build_map,
    build_pointed_map,
    faces,
    map_contour,
    validate_map,
)
from .continuum import (
    BallMassProfile,
    ClusterReport,
    DimensionEstimate,
    GridMetric,
    LabeledExcursion,
    ball_mass_profile,
    equivalence_clusters,
    estimate_dimension,
    grid_dstar,
    occupation_measure,
    reroot_at_min,
    sample_labeled_excursion,
    tree_pseudo_metric,
)
from .experiments import (
    ExperimentConfig,
    PowerLawFit,
    StatReport,
    StatRow,
    exp_ball_volume,
    exp_conjecture_gap,
    exp_invariant_suite,
    exp_ise_tail,
    exp_profile_universality,
    exp_two_point_scaling,
    fit_power_law,
    ks_distance,
)
from .map_metric import (
    DistanceField,
    GridSample,
    Lemma31Report,
    RangeMinTable,
    ball_count,
    bfs,
    cross_distortion,
    d_circ,
    discrete_dstar,
    grid_sample,
    two_point_samples,
    verify_lemma31,
)
from .mobile_core import (
    ContourPair,
    DecodeError,
    Mobile,
    PTree,
    ScalingConstants,
    ValidationError,
    contour,
    enumerate_mobiles,
    mobile_from_contour,
    scaling_constants,
    validate_mobile,
)
from .sampler import (
    RejectionBudgetError,
    RngStream,
    sample_free_mobile,
    sample_ptree,
    sample_rooted_mobile,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
