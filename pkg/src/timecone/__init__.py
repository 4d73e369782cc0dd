"""Time-cone phase-transformation kinetics.

Direct space-time cone integration (the slow, trustworthy oracle) and fast
finite-difference/ADI solvers for the equivalent warped hyperbolic systems
in 1, 2 and 3 space dimensions, with exact integer verification of the
reduction's coefficient recurrences.
"""

from .brackets import (
    AnalyticField,
    BracketSpec,
    check_laplace_identity,
    check_time_identities,
    constant_field,
    eval_bracket,
    perturbed_constant_field,
    plane_wave_field,
    quadratic_field,
    separable_field,
    verify_gov_U1_3d,
)
from .coefficients import (
    CoeffTable,
    PolyInD,
    cmk,
    double_factorial,
    p1_product_check,
    pmk,
    sigma_identity_check,
    sigma_odd,
    source_multiplier,
    verify_cmk_identity,
    verify_pmk_identity,
)
from .fields import (
    AnalyticRate,
    FieldSeries,
    GridSpec,
    SampledRate,
    SampledSpeed,
    eval_rate,
    eval_speed,
    periodic_interp,
    wrap_index,
)
from .oracle import (
    BALL_VOLUME,
    SPHERE_AREA,
    ConeQuadSpec,
    ConeWrapWarning,
    cone_radius,
    direct_u,
    direct_u_lattice,
    jmak_u,
    phase_fraction,
)
from .scenarios import (
    ScenarioSpec,
    hexagon_pattern,
    scenario_1d,
    scenario_2d,
    scenario_bump_3d,
    scenario_constant,
    scenario_invsqrt_speed,
)
from .snapshot import (
    HeaderError,
    ShapeMismatchError,
    SnapshotError,
    TruncatedPayloadError,
    read_field,
    write_csv_1d,
    write_field,
)
from .solvers import (
    CflError,
    CflStatus,
    SchemeParams,
    SolveReport,
    check_cfl,
    cyclic_tridiag_solve,
    lateral_source_2d,
    scheme_residual,
    solve_1d,
    solve_2d,
    solve_3d,
    unwarp,
)
from .timewarp import TimeWarp, build_warp, invert_warp, warped_source

__version__ = "0.1.0"

__all__ = [
    "AnalyticField",
    "AnalyticRate",
    "BALL_VOLUME",
    "BracketSpec",
    "CflError",
    "CflStatus",
    "CoeffTable",
    "ConeQuadSpec",
    "ConeWrapWarning",
    "FieldSeries",
    "GridSpec",
    "HeaderError",
    "PolyInD",
    "SPHERE_AREA",
    "SampledRate",
    "SampledSpeed",
    "ScenarioSpec",
    "SchemeParams",
    "ShapeMismatchError",
    "SnapshotError",
    "SolveReport",
    "TimeWarp",
    "TruncatedPayloadError",
    "build_warp",
    "check_cfl",
    "check_laplace_identity",
    "check_time_identities",
    "cmk",
    "cone_radius",
    "constant_field",
    "cyclic_tridiag_solve",
    "direct_u",
    "direct_u_lattice",
    "double_factorial",
    "eval_bracket",
    "eval_rate",
    "eval_speed",
    "hexagon_pattern",
    "invert_warp",
    "jmak_u",
    "lateral_source_2d",
    "p1_product_check",
    "periodic_interp",
    "perturbed_constant_field",
    "phase_fraction",
    "plane_wave_field",
    "pmk",
    "quadratic_field",
    "read_field",
    "scenario_1d",
    "scenario_2d",
    "scenario_bump_3d",
    "scenario_constant",
    "scenario_invsqrt_speed",
    "scheme_residual",
    "separable_field",
    "sigma_identity_check",
    "sigma_odd",
    "solve_1d",
    "solve_2d",
    "solve_3d",
    "source_multiplier",
    "unwarp",
    "verify_cmk_identity",
    "verify_gov_U1_3d",
    "verify_pmk_identity",
    "warped_source",
    "wrap_index",
    "write_csv_1d",
    "write_field",
]
