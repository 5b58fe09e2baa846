"""The distributive lattice operad: O(n) is the free bounded distributive
lattice on n generators, stored as monotone Boolean functions in antichain form.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .boolfn import MonotoneBoolFn, monotone_functions, substitute_shared
from .errors import ArityMismatch, ArityTooLarge
from .order import Permutation

FDL_MAX_ARITY = 5


@dataclass(frozen=True)
class OperadElement:
    value: MonotoneBoolFn

    @property
    def arity(self) -> int:
        return self.value.arity

    @property
    def is_bound(self) -> bool:
        """True for the two constants, which only exist with bounds."""
        return self.value.is_constant()

    @classmethod
    def from_sets(cls, sets, arity: int) -> "OperadElement":
        return cls(MonotoneBoolFn.from_sets(sets, arity))

    @classmethod
    def generator(cls, i: int, arity: int) -> "OperadElement":
        return cls(MonotoneBoolFn.var(i, arity))

    @classmethod
    def unit(cls) -> "OperadElement":
        return cls.generator(1, 1)

    def __call__(self, x: int) -> int:
        return self.value(x)

    def act(self, g: Permutation) -> "OperadElement":
        """Right Σ_n action: generator g(i) takes the place of generator i."""
        if g.n != self.arity:
            raise ArityMismatch(f"permutation of degree {g.n} on arity {self.arity}")
        ginv = g.inverse()
        return OperadElement(MonotoneBoolFn.from_masks(
            (ginv.image_mask(s) for s in self.value.antichain), self.arity))

    def to_json(self) -> dict:
        return self.value.to_json()

    @classmethod
    def from_json(cls, data: dict, arity: int) -> "OperadElement":
        return cls(MonotoneBoolFn.from_json(data, arity))

    def __str__(self) -> str:
        return str(self.value)


def op_meet(a: OperadElement, b: OperadElement) -> OperadElement:
    if a.arity != b.arity:
        raise ArityMismatch(f"meet of arities {a.arity} and {b.arity}")
    return OperadElement(a.value.meet(b.value))


def op_join(a: OperadElement, b: OperadElement) -> OperadElement:
    if a.arity != b.arity:
        raise ArityMismatch(f"join of arities {a.arity} and {b.arity}")
    return OperadElement(a.value.join(b.value))


def substitute(outer: OperadElement, inners: Sequence[OperadElement]) -> OperadElement:
    """outer(inners[0], ..., inners[k-1]) with the inners on disjoint variable blocks."""
    if len(inners) != outer.arity:
        raise ArityMismatch(f"outer has arity {outer.arity} but {len(inners)} inners were given")
    total = sum(f.arity for f in inners)
    shifted = []
    offset = 0
    for f in inners:
        shifted.append(f.value.shift(offset, total))
        offset += f.arity
    return OperadElement(substitute_shared(outer.value, shifted, total))


def enumerate_fdl(n: int, with_bounds: bool = True) -> list[OperadElement]:
    """All elements of O(n), sorted canonically; optionally without 0 and 1."""
    if n > FDL_MAX_ARITY:
        raise ArityTooLarge(f"free distributive lattice enumeration is limited to n <= {FDL_MAX_ARITY}")
    out = [OperadElement(f) for f in monotone_functions(n)]
    if not with_bounds:
        out = [e for e in out if not e.is_bound]
    return out
