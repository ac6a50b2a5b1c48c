"""Exact Fox calculus, group rings and quadratic functors for low-dimensional groups."""
from .errors import (
    ClassMismatchError,
    FoxkitError,
    InputError,
    NotAsphericalError,
    NotHermitianError,
    NotNormalizedError,
    ShapeError,
    UndecidableError,
    UnsupportedGroupError,
)
from .words import FreeWord, GroupClass, GroupElement, element, normalize_word
from .groupring import OrientationCharacter, RingElement, RingMatrix, augment, involute
from .fox import (
    Presentation,
    fox_derivative,
    fox_lyndon_complex,
    normalize_presentation,
    verify_boundary_squared,
    dualizing_presentation,
)
from .gamma import GammaElement, gamma_normal_form, apply_alpha_theta
from .hermitian import HermitianForm, bm_evaluate, bm_preimage
from .cup import build_j, dual_complex, evaluate_cocycle_pair, verify_chain_map
from .bstorsion import relation_matrix, smith_normal_form, torsion_report, truncated_generators
from .presfile import format_presentation, load_corpus, parse_presentation

__version__ = "0.1.0"

__all__ = [
    "ClassMismatchError",
    "FoxkitError",
    "InputError",
    "NotAsphericalError",
    "NotHermitianError",
    "NotNormalizedError",
    "ShapeError",
    "UndecidableError",
    "UnsupportedGroupError",
    "FreeWord",
    "GroupClass",
    "GroupElement",
    "element",
    "normalize_word",
    "OrientationCharacter",
    "RingElement",
    "RingMatrix",
    "augment",
    "involute",
    "Presentation",
    "fox_derivative",
    "fox_lyndon_complex",
    "normalize_presentation",
    "verify_boundary_squared",
    "dualizing_presentation",
    "GammaElement",
    "gamma_normal_form",
    "apply_alpha_theta",
    "HermitianForm",
    "bm_evaluate",
    "bm_preimage",
    "build_j",
    "dual_complex",
    "evaluate_cocycle_pair",
    "verify_chain_map",
    "relation_matrix",
    "smith_normal_form",
    "torsion_report",
    "truncated_generators",
    "format_presentation",
    "load_corpus",
    "parse_presentation",
]
