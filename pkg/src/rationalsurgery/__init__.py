"""Correction-term deficiencies of rational surgeries and the changemaker
lattice-embedding obstruction, in exact arithmetic."""
from .changemaker import enumerate_changemakers, is_changemaker
from .deficiency import (
    Hypothesis,
    KnotData,
    KnotDataError,
    deficiency_rational,
    integral_minimisers,
    sum_identity_check,
    symmetry_check,
    validate_vh,
    vanishing_hypothesis,
)
from .embedding import (
    FormBlock,
    SearchBoundError,
    Verdict,
    normalize,
    obstruct,
    search_embedding,
    verify_embedding,
)
from .numeric import Slope, SlopeError, hj_evaluate, hj_expand, slope_params
from .plumbing import (
    build_matrix,
    classify_path,
    d_invariant,
    enumerate_K,
    enumerate_K_prime,
    has_full_tank,
    lens_d_invariants,
    lens_d_recursion,
    push_down,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
