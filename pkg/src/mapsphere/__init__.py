"""Computer-algebra workbench for rational models of Map(X, S^2n)."""

from .cga import AlgebraMap, Derivation, FreeCGA, Polynomial, linear_part
from .models import full_model, minimal_k0, minimal_k1, substitute_top
from .poincare import PoincareData, load_ring, parse_ring, validate_ring
from .selfclose import self_closeness
from .splitting import build_zeta_and_split

__all__ = [
    "AlgebraMap", "Derivation", "FreeCGA", "Polynomial", "linear_part",
    "full_model", "minimal_k0", "minimal_k1", "substitute_top",
    "PoincareData", "load_ring", "parse_ring", "validate_ring",
    "self_closeness", "build_zeta_and_split",
]
