"""Monoidal representations of framed tangles from S-matrices, and Kirby-move checks."""

from .diagram import FramedLink, Gen, TangleWord, build_standard, disjoint_union, link_to_word
from .families import dim2_conjugate, dim2_family, manifold_gallery, transform_smatrix
from .kirby import certify_invariance, check_descent, compat_kernel, fr_defect
from .rep import SMatrix, certify_smatrix, evaluate, link_invariant
from .scalars import EXACT, FLOAT, Engine, GaussianRational
from .skein import BetaSequence, skein_relation, verify_skein
from .tensor import LinearMap, compose, identity, partial_trace, tensor_product, twist_map

__version__ = "0.1.0"

__all__ = [
    "Engine",
    "EXACT",
    "FLOAT",
    "GaussianRational",
    "LinearMap",
    "identity",
    "tensor_product",
    "compose",
    "partial_trace",
    "twist_map",
    "Gen",
    "TangleWord",
    "FramedLink",
    "build_standard",
    "disjoint_union",
    "link_to_word",
    "SMatrix",
    "certify_smatrix",
    "evaluate",
    "link_invariant",
    "fr_defect",
    "compat_kernel",
    "check_descent",
    "certify_invariance",
    "skein_relation",
    "verify_skein",
    "BetaSequence",
    "dim2_family",
    "dim2_conjugate",
    "transform_smatrix",
    "manifold_gallery",
]
