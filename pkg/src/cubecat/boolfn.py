"""Monotone Boolean functions [1]^m -> [1] in antichain canonical form.

A function is stored as the antichain of its minimal true points; each point
is a bitmask over the variables (variable i is bit i-1). The antichain is the
join-of-meets normal form of the corresponding element of the free bounded
distributive lattice on m generators, which makes equality of terms a plain
set comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import ArityMismatch, ArityTooLarge

MAX_TABLE_ARITY = 12


def mask_key(mask: int) -> tuple[int, ...]:
    """Sorted 1-based variable indices of a mask."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i + 1)
        mask >>= 1
        i += 1
    return tuple(out)


def to_mask(subset: Iterable[int]) -> int:
    m = 0
    for i in subset:
        if i < 1:
            raise ValueError(f"variable index {i} must be >= 1")
        m |= 1 << (i - 1)
    return m


def minimize(masks: Iterable[int]) -> tuple[int, ...]:
    """Drop every set that contains another one; sort canonically."""
    uniq = sorted(set(masks), key=lambda s: (bin(s).count("1"), s))
    kept: list[int] = []
    for s in uniq:
        if not any(t & s == t for t in kept):
            kept.append(s)
    return tuple(sorted(kept, key=mask_key))


@dataclass(frozen=True)
class MonotoneBoolFn:
    arity: int
    antichain: tuple[int, ...]

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]], arity: int) -> "MonotoneBoolFn":
        masks = [to_mask(s) for s in sets]
        return cls.from_masks(masks, arity)

    @classmethod
    def from_masks(cls, masks: Iterable[int], arity: int) -> "MonotoneBoolFn":
        masks = list(masks)
        if any(s >> arity for s in masks):
            raise ArityMismatch(f"a term uses a variable beyond arity {arity}")
        return cls(arity, minimize(masks))

    @classmethod
    def const(cls, value: int, arity: int) -> "MonotoneBoolFn":
        return cls(arity, (0,) if value else ())

    @classmethod
    def var(cls, i: int, arity: int) -> "MonotoneBoolFn":
        if not 1 <= i <= arity:
            raise ArityMismatch(f"variable {i} out of range for arity {arity}")
        return cls(arity, (1 << (i - 1),))

    @classmethod
    def from_truth(cls, arity: int, truth: int) -> "MonotoneBoolFn":
        """From a truth-table bitmask (bit x set iff f(x) = 1); assumes monotone."""
        mins = []
        t = truth
        while t:
            low = t & -t
            x = low.bit_length() - 1
            t ^= low
            y = x
            minimal = True
            while y:
                b = y & -y
                y ^= b
                if truth >> (x ^ b) & 1:
                    minimal = False
                    break
            if minimal:
                mins.append(x)
        return cls(arity, tuple(sorted(mins, key=mask_key)))

    # -- evaluation -----------------------------------------------------------

    def __call__(self, x: int) -> int:
        for s in self.antichain:
            if s & x == s:
                return 1
        return 0

    @cached_property
    def truth(self) -> int:
        if self.arity > MAX_TABLE_ARITY:
            raise ArityTooLarge(f"truth table of arity {self.arity}")
        t = 0
        for x in range(1 << self.arity):
            if self(x):
                t |= 1 << x
        return t

    @property
    def support(self) -> int:
        m = 0
        for s in self.antichain:
            m |= s
        return m

    @property
    def sets(self) -> list[list[int]]:
        return [list(mask_key(s)) for s in self.antichain]

    def is_constant(self) -> bool:
        return self.antichain in ((), (0,))

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(mask_key(s) for s in self.antichain)

    # -- lattice operations ---------------------------------------------------

    def join(self, other: "MonotoneBoolFn") -> "MonotoneBoolFn":
        _same_arity(self, other)
        return MonotoneBoolFn(self.arity, minimize(self.antichain + other.antichain))

    def meet(self, other: "MonotoneBoolFn") -> "MonotoneBoolFn":
        _same_arity(self, other)
        return MonotoneBoolFn(self.arity, minimize(a | b for a in self.antichain for b in other.antichain))

    # -- reindexing -----------------------------------------------------------

    def remap(self, var_map: Sequence[int], arity: int) -> "MonotoneBoolFn":
        """Rename variable i to ``var_map[i-1]`` (1-based) in a new arity."""
        out = []
        for s in self.antichain:
            t = 0
            for i in mask_key(s):
                t |= 1 << (var_map[i - 1] - 1)
            out.append(t)
        return MonotoneBoolFn(arity, minimize(out))

    def shift(self, offset: int, arity: int) -> "MonotoneBoolFn":
        return MonotoneBoolFn(arity, tuple(sorted((s << offset for s in self.antichain), key=mask_key)))

    def to_json(self) -> dict:
        return {"antichain": self.sets}

    @classmethod
    def from_json(cls, data: dict, arity: int) -> "MonotoneBoolFn":
        return cls.from_sets(data["antichain"], arity)

    def __str__(self) -> str:
        if not self.antichain:
            return "0"
        if self.antichain == (0,):
            return "1"
        terms = ["∧".join(f"x{i}" for i in mask_key(s)) for s in self.antichain]
        return " ∨ ".join(f"({t})" if "∧" in t and len(terms) > 1 else t for t in terms)


def _same_arity(a: MonotoneBoolFn, b: MonotoneBoolFn) -> None:
    if a.arity != b.arity:
        raise ArityMismatch(f"arities {a.arity} and {b.arity}")


def canonicalize(terms: Iterable[Iterable[int]], m: int) -> MonotoneBoolFn:
    """Canonical antichain of a family of subsets of {1..m} (read as a join of meets)."""
    return MonotoneBoolFn.from_sets(terms, m)


def substitute_shared(outer: MonotoneBoolFn, inners: Sequence[MonotoneBoolFn], arity: int) -> MonotoneBoolFn:
    """outer(inners[0], ..., inners[k-1]) where all inners share ``arity`` variables."""
    if len(inners) != outer.arity:
        raise ArityMismatch(f"outer has arity {outer.arity} but {len(inners)} inners were given")
    for f in inners:
        if f.arity != arity:
            raise ArityMismatch(f"inner of arity {f.arity}, expected {arity}")
    result: set[int] = set()
    for s in outer.antichain:
        term = (0,)
        for i in mask_key(s):
            term = minimize(a | b for a in term for b in inners[i - 1].antichain)
            if not term:
                break
        result.update(term)
    return MonotoneBoolFn(arity, minimize(result))


@lru_cache(maxsize=None)
def monotone_truth_tables(m: int) -> tuple[int, ...]:
    """Truth tables of all monotone functions [1]^m -> [1], sorted.

    Uses f = (f restricted to x_m = 0) below (f restricted to x_m = 1).
    """
    if m < 0:
        raise ValueError("arity must be nonnegative")
    if m > 6:
        raise ArityTooLarge(f"Dedekind enumeration at arity {m}")
    if m == 0:
        return (0, 1)
    prev = monotone_truth_tables(m - 1)
    half = 1 << (m - 1)
    out = [f0 | f1 << half for f0 in prev for f1 in prev if f0 & ~f1 == 0]
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def monotone_functions(m: int) -> tuple[MonotoneBoolFn, ...]:
    """All monotone functions of arity m, sorted by canonical serialization."""
    fns = [MonotoneBoolFn.from_truth(m, t) for t in monotone_truth_tables(m)]
    return tuple(sorted(fns, key=lambda f: f.key))


@lru_cache(maxsize=None)
def full_support_functions(m: int) -> tuple[MonotoneBoolFn, ...]:
    """Monotone functions of arity m that depend on every variable."""
    full = (1 << m) - 1
    return tuple(f for f in monotone_functions(m) if f.support == full)
