"""Interval-preserving maps between Boolean lattices [1]^m -> [1]^n and the
cube complexes, subdivisions and homology computations built on them."""
from __future__ import annotations

from .boolfn import MonotoneBoolFn, canonicalize
from .errors import CubeCatError
from .morphism import (
    CubeMorphism,
    RawMap,
    VariantTag,
    act_permutation,
    classify,
    compose,
    enumerate_hom,
    essential_support,
    from_table,
    is_interval_preserving,
    named_generator,
    oracle_interval_check,
    tensor,
)
from .order import FinPoset, Interval, Permutation, Point, apply, boolean_intervals, function_poset, make_interval

__all__ = [
    "CubeCatError", "CubeMorphism", "FinPoset", "Interval", "MonotoneBoolFn", "Permutation", "Point",
    "RawMap", "VariantTag", "act_permutation", "apply", "boolean_intervals", "canonicalize", "classify",
    "compose", "enumerate_hom", "essential_support", "from_table", "function_poset", "is_interval_preserving",
    "make_interval", "named_generator", "oracle_interval_check", "tensor",
]

__version__ = "0.1.0"
