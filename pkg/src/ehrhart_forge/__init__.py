"""Exact-rational polytope constructions with a certified counting engine."""

from .errors import (
    DegenerateConstructionError,
    EhrhartForgeError,
    InvalidInputError,
    ResourceLimitError,
    UnsupportedInputError,
    VerificationError,
)
from .rationals import make_rational, parse_rational, rat_str
from .geometry import (
    HalfspaceSystem,
    Polytope,
    TrapezoidSpec,
    contains_h,
    dilate,
    embed_with_tags,
    integer_bounding_box,
    prism,
    product_polytope,
    tagged_hull,
    translate,
    unit_vector,
)
from .lp import contains_hull, convex_combination
from .counting import (
    CountTable,
    TranslationFamily,
    count_lattice_points,
    count_real_translate,
    count_translate,
    ehrhart_value,
    scan_translates,
)
from .qde import (
    QdeGadget,
    QdeInstance,
    build_gadget,
    build_trapezoid,
    g_reference,
    qde_oracle,
    real_min_scan,
    solve_translation_min,
    term_factorization,
)
from .transform import (
    DilationFamily,
    EhrhartPolynomial,
    ehrhart_poly_interpolate,
    find_integer_point,
    k_etp,
    k_etp_integer,
    to_dilation_family,
)
from .fluctuation import (
    IdentityExpansion,
    QuasiPolynomial,
    RealizationResult,
    build_floor_trapezoid,
    build_term_polytope,
    normalize_coefficients,
    product_identity_expansion,
    qp_eval,
    quasi_polynomial,
    realize_qp,
    realize_sequence,
    sequence_to_qp,
)

__version__ = "0.1.0"
