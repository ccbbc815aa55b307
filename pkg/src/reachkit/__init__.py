"""Reach estimation for point clouds.

Given a finite sample of an unknown low-dimensional set in Euclidean
space, this package estimates its shortest-path metric through an
offset neighborhood graph, the spherical distortion radius of that
metric at a separation scale, the minimal curvature radius through
local polynomial patches, and their minimum, the reach. Synthetic
shapes with closed-form oracles, a benchmark harness with rate fitting,
a CLI, and an HTTP service round out the toolkit.
"""

from .bench import (
    BenchRow,
    ExperimentConfig,
    RateFit,
    fit_rate,
    read_rows,
    rows_to_csv,
    run_experiment,
    write_rows,
    write_svg_plot,
)
from .errors import (
    IllConditionedError,
    InsufficientDataError,
    InvalidInputError,
    NumericError,
    ReachkitError,
    ResolutionError,
)
from .geometry import (
    FiniteMetricSpace,
    ModelParams,
    PointCloud,
    d_max_bound,
    diameter,
    distance_to_set,
    hausdorff_distance,
    jung_bound,
    nearest_points,
    pairwise_distances,
    spherical_chord_distance,
    spherical_distance,
)
from .graphs import (
    NeighborhoodGraph,
    all_pairs_geodesics,
    build_graph,
    geodesics_from,
    graph_geodesic,
)
from .io import (
    read_cloud_csv,
    read_metric_csv,
    write_cloud_csv,
    write_metric_csv,
)
from .localpoly import (
    CurvatureEstimate,
    LocalPatch,
    PatchConfig,
    RecenteredFrame,
    bandwidth,
    curvature_radius_estimate,
    default_tensor_cap,
    fit_patch,
    min_curvature_radius,
    patch_eval,
    recentered_frame,
    tensor_opnorm,
)
from .metricest import (
    LossReport,
    MetricEstimate,
    distortion_sup_loss_bracket,
    mutual_distortion,
    plugin_metric,
    plugin_metric_pairs,
    plugin_metric_table,
    sup_loss,
)
from .reach import (
    ReachConfig,
    ReachReport,
    TuningResult,
    adaptive_tuning,
    oracle_reach_federer,
    reach_estimate,
    sdr_plugin,
)
from .rng import rng_stream
from .sdr import (
    ALPHA_STAR,
    ManifoldConstants,
    SdrResult,
    StabilityBudget,
    check_spreadable,
    check_subeuclidean,
    lip_constant,
    manifold_constants,
    pair_radius,
    phi,
    phi_inverse,
    sdr_delta,
    sdr_value,
    stability_budget,
    wedge_sdr_oracle,
    xi_bound,
)
from .synth import (
    BumpedCylinder,
    Circle,
    Ellipse,
    GapResult,
    OracleSet,
    ParallelCircles,
    Shape,
    Sphere,
    Torus,
    FlatTorus,
    TurnWidget,
    TurnWidgetProfile,
    Wedge,
    bump_geodesic_gap,
    bumped_cylinder_map,
    list_shapes,
    make_shape,
    oracle_metric,
    sample,
    turn_widget,
    wedge_mu_reach,
    widget_circle,
)

__version__ = "0.1.0"
