"""Functional calculus of positively homogeneous functions on vector lattices.

Sublinear and superlinear maps are carried by their sub/superdifferentials
(polytopes and balls); semicontinuous PH functions by inf/sup families of
such maps; the calculus lifts them to R^m and to step functions on [0, 1],
with saddle representations and an independent verification suite.
"""

from .convexsets import (
    Ball,
    VPolytope,
    contains,
    coordinate_bound,
    feasible_point,
    project,
    set_from_json,
    set_to_json,
    support,
    support_argmax,
    support_batch,
)
from .errors import (
    CalculusError,
    DimensionMismatch,
    EmptyFamily,
    EmptyIntersection,
    EnvelopeViolation,
    IndexOutOfRange,
    LatticeMismatch,
    NoConvergence,
    NotOrdered,
    SaddleGap,
    SchemaError,
    UnknownBuiltin,
)
from .fcalc import (
    SaddleFamily,
    fc_saddle,
    fc_semicontinuous,
    fc_semicontinuous_detailed,
    fc_sublinear,
    fc_superlinear,
    saddle_build,
    saddle_eval,
    saddle_from_json,
    saddle_to_json,
)
from .homog import (
    FiniteFamily,
    GeneratedFamily,
    PHFunction,
    RepresentationWarning,
    SublinearMap,
    SuperlinearMap,
    angle_superlinear_family,
    builtin,
    check_positive_homogeneity,
    circumscribed_polygon_map,
    disk_map,
    domination_envelopes,
    eval_family,
    eval_family_detailed,
    eval_sublinear,
    eval_superlinear,
    function_from_json,
    map_from_json,
    map_to_json,
    sphere_bounds,
    sphere_grid,
)
from .lattice import (
    CoordinateHom,
    PointEvalHom,
    RmElement,
    StepFunction,
    common_refinement,
    element_from_json,
    element_to_json,
    embed_step_to_grid,
    hom_eval,
    join,
    meet,
    refine,
)
from .verify import (
    CheckFailure,
    CheckReport,
    check_continuous_agreement,
    check_engine_vs_oracle,
    check_interchange,
    check_rep_independence,
    check_saddle,
    check_sublattice_invariance,
    default_suite,
    negative_controls,
    oracle_fc,
)

__version__ = "0.1.0"
