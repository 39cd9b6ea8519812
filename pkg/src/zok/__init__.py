"""Exact Zariski decompositions and generalized Okounkov polygons on finite
rational intersection lattices."""

from __future__ import annotations

from .errors import (
    EpsilonTooLarge,
    FlagInNonKahlerLocus,
    HypothesisViolated,
    InvariantError,
    MathVerdictError,
    ModelValidationError,
    MultipleCandidates,
    NotBig,
    NotNef,
    NotOnBoundary,
    NotPseudoEffective,
    UnknownCurve,
    UnsupportedDirection,
    UsageError,
    ZokError,
)
from .exact import ExtRat, QuadExt, Rat, sqrt_rat
from .lattice import (
    CurveRecord,
    SurfaceModel,
    intersect,
    is_negative_definite,
    make_model,
    signature,
    solve_linear,
    validate_model,
)
from .okounkov import (
    BoundaryBody,
    FlagSpec,
    OkounkovPolygon,
    PiecewiseLinear,
    SegmentChamber,
    boundary_body,
    envelopes,
    okounkov_polygon,
    restricted_body,
    segment_chambers,
    slopes,
)
from .oracle import (
    ModelGenSpec,
    OracleReport,
    area_by_integration,
    brute_force_zariski,
    derivative_by_chambers,
    random_model,
    run_model_verification,
)
from .polygon import minkowski_sum, polygon_contains, shoelace_area
from .zariski import (
    Classification,
    Kind,
    MorseCertificate,
    ZariskiDecomp,
    classify,
    derivative_vol,
    enumerate_exceptional_families,
    is_nef_in_model,
    morse_gap,
    non_kahler_curves,
    null_curves,
    orthogonal_nef_lift,
    perturbed_decomposition,
    volume,
    zariski_decompose,
)

__version__ = "0.1.0"
