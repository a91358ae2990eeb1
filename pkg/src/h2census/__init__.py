"""Exact census of cylinder-counting constants for square-tiled surfaces in H(2)."""

from .errors import ConsistencyError, H2CensusError, OrbitBudgetError, ValidationError
from .origami import (
    Origami,
    OrbitResult,
    StratumSignature,
    apply_matrix,
    apply_word,
    canonical_form,
    commutator,
    is_primitive,
    orbit_bfs,
    origami_from_json,
    origami_to_json,
    stratum_of,
    u_orbit_length,
)
from .cylinders import (
    Cylinder,
    CylinderDecomposition,
    TwoCylCoords,
    build_two_cylinder,
    canonical_cusp_rep,
    cusp_width_formula,
    horizontal_decomposition,
    regular_cylinders,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "H2CensusError",
    "OrbitBudgetError",
    "ValidationError",
    "Origami",
    "OrbitResult",
    "StratumSignature",
    "apply_matrix",
    "apply_word",
    "canonical_form",
    "commutator",
    "is_primitive",
    "orbit_bfs",
    "origami_from_json",
    "origami_to_json",
    "stratum_of",
    "u_orbit_length",
    "Cylinder",
    "CylinderDecomposition",
    "TwoCylCoords",
    "build_two_cylinder",
    "canonical_cusp_rep",
    "cusp_width_formula",
    "horizontal_decomposition",
    "regular_cylinders",
    "__version__",
]
