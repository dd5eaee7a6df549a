"""Interval exchange transformations, their compositions with rotations,
suspension surfaces over them, and ergodicity diagnostics.

The public surface re-exports the main types and operations of each
submodule; see the module docstrings for details.
"""

from .scalars import (
    BACKENDS,
    DEFAULT_PRECISION,
    FIXED,
    RATIONAL,
    FixedPoint,
    NumericsConfig,
    Scalar,
    Surd,
    as_float,
    backend_of,
    commensurable,
    mod_one,
    parse_height,
    scalar_format,
    scalar_parse,
    to_backend,
    tolerance_of,
)
from .iet import (
    IET,
    CompositionSpec,
    Permutation,
    apply,
    build_composition,
    canonicalize,
    compose,
    identity_iet,
    iet_equal,
    invert,
    is_irreducible,
    make_iet,
    rotation,
)
from .dynamics import (
    BirkhoffLadder,
    DeviationFit,
    IdocVerdict,
    OrbitDiagnostics,
    OrbitResult,
    PropertyPReport,
    TestFunction,
    UEDiagnosticConfig,
    UESummary,
    birkhoff_ladder,
    default_ladder,
    default_starts,
    deviation_exponent_fit,
    idoc_check,
    minimality_heuristic,
    orbit,
    orbit_floats,
    property_p_profile,
    star_discrepancy,
    ue_diagnostic,
)
from .surface import (
    Cylinder,
    DirectionSpec,
    FlowSingularityError,
    FlowState,
    ReturnResult,
    SquareTiledVerdict,
    StackedSurface,
    build_surface,
    first_return,
    flow_trace,
    horizontal_cylinders,
    is_square_tiled,
    return_time,
    return_time_squared,
)
from .experiments import (
    DiagnosticsConfig,
    ExperimentConfig,
    OracleReport,
    SweepReport,
    run_alpha_sweep,
    run_mixed_sign_sweep,
    run_oracle_check,
)

__version__ = "0.1.0"
