"""Exact-arithmetic Minkowski-length invariants of lattice polytopes.

Computes the length profile L_1(P) <= .. <= L_d(P) with witness zonotopes,
rational lengths and diameters, dilation periods, dilation tables, and the
eventual quasi-linear form of t -> L(tP), all in exact rational arithmetic.
"""

from .dilation import (
    DilateTable,
    QuasiLinearFunction,
    dilate_table,
    evaluate,
    fit_quasilinear,
)
from .families import (
    coordinate_box,
    degree_one_pyramid,
    lawrence_prism,
    standard_simplex,
    tilted_triangle,
)
from .lengths import (
    CapExceeded,
    FastpathResult,
    LengthProfile,
    SegmentCatalog,
    brute_force_length,
    fitting_segments,
    length_fastpath,
    length_profile,
    minkowski_length,
    smallest_maximal_decomposition,
)
from .lp import LinearProgram, LpOutcome, feasible, lp, solve
from .polytope import (
    LatticePolytope,
    RationalPolytope,
    Zonotope,
    contains,
    dilate,
    lattice_points,
    lattice_width,
    minkowski_sum,
    normalized_volume,
    primitivize,
    unimodular_image,
    zonotope,
)
from .rational import (
    CertificationError,
    DirectionBudget,
    RationalLengthResult,
    bounded_direction_set,
    direction_completions,
    directional_length,
    period,
    polygon_upper_bound,
    rational_diameter,
    rational_length_profile,
    rational_minkowski_length,
)

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "CertificationError",
    "DilateTable",
    "DirectionBudget",
    "FastpathResult",
    "LatticePolytope",
    "LengthProfile",
    "LinearProgram",
    "LpOutcome",
    "QuasiLinearFunction",
    "RationalLengthResult",
    "RationalPolytope",
    "SegmentCatalog",
    "Zonotope",
    "bounded_direction_set",
    "brute_force_length",
    "contains",
    "coordinate_box",
    "degree_one_pyramid",
    "dilate",
    "dilate_table",
    "direction_completions",
    "directional_length",
    "evaluate",
    "feasible",
    "fit_quasilinear",
    "fitting_segments",
    "lattice_points",
    "lattice_width",
    "lawrence_prism",
    "length_fastpath",
    "length_profile",
    "lp",
    "minkowski_length",
    "minkowski_sum",
    "normalized_volume",
    "period",
    "polygon_upper_bound",
    "primitivize",
    "rational_diameter",
    "rational_length_profile",
    "rational_minkowski_length",
    "smallest_maximal_decomposition",
    "solve",
    "standard_simplex",
    "tilted_triangle",
    "unimodular_image",
    "zonotope",
]
