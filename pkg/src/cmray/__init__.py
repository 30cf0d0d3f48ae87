"""Class-field invariants over imaginary quadratic fields at arbitrary precision."""

from .apcomplex import ApComplex
from .errors import CMRayError
from .fieldgen import (
    GenerationCertificate,
    order_class_number,
    orbit_polynomial,
    verify_corollary_main,
    verify_theorem_relativenorm,
)
from .invariants import (
    InvariantValue,
    fricke_invariant,
    galois_translate,
    norm_to_ring_class,
    xi_N,
    xi_power_identity_check,
)
from .limitformula import (
    AnalyticConfig,
    euler_factor,
    find_gamma,
    gauss_sum,
    hecke_L_at_1,
    kronecker_check,
    stickelberger,
)
from .modfun import FrickeLabel, fricke, j_invariant, siegel, weber_value, wp
from .qfield import AlgNum, FieldParams, IdealHNF, ideal, make_field
from .rayclass import (
    Modulus,
    RayCharacter,
    RayClassGroup,
    characters,
    class_of,
    conductor,
    make_modulus,
    ray_class_group,
)

__version__ = "0.1.0"

__all__ = [
    "AlgNum",
    "AnalyticConfig",
    "ApComplex",
    "CMRayError",
    "FieldParams",
    "FrickeLabel",
    "GenerationCertificate",
    "IdealHNF",
    "InvariantValue",
    "Modulus",
    "RayCharacter",
    "RayClassGroup",
    "characters",
    "class_of",
    "conductor",
    "euler_factor",
    "find_gamma",
    "fricke",
    "fricke_invariant",
    "galois_translate",
    "gauss_sum",
    "hecke_L_at_1",
    "ideal",
    "j_invariant",
    "kronecker_check",
    "make_field",
    "make_modulus",
    "norm_to_ring_class",
    "orbit_polynomial",
    "order_class_number",
    "ray_class_group",
    "siegel",
    "stickelberger",
    "verify_corollary_main",
    "verify_theorem_relativenorm",
    "weber_value",
    "wp",
    "xi_N",
    "xi_power_identity_check",
]
