"""Maps [1]^m -> [1]^n: canonical representation, named generators,
composition, tensor, permutation actions and variant membership tests.

A :class:`CubeMorphism` is a tuple of n monotone coordinate functions in
antichain form. Non-monotone maps (reversals, arbitrary Set-maps) only exist
as a :class:`RawMap` truth table.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .boolfn import (
    MonotoneBoolFn,
    canonicalize,
    full_support_functions,
    mask_key,
    monotone_functions,
    substitute_shared,
)
from .errors import (
    ArityMismatch,
    ArityTooLarge,
    DegreeMismatch,
    IndexOutOfRange,
    NotMonotone,
)
from .order import Interval, Permutation, Point, all_intervals, bits_label, parse_bits, popcount, submasks

__all__ = [
    "CubeMorphism", "RawMap", "VariantTag", "MonotoneBoolFn", "canonicalize", "from_table",
    "essential_support", "is_interval_preserving", "oracle_interval_check", "find_interval_violation",
    "compose", "tensor", "act_permutation", "classify", "enumerate_hom", "count_hom",
    "named_generator", "identity", "load_map",
]

ORACLE_MAX_ARITY = 12
ENUM_MAX_ARITY = 5


class VariantTag(str, enum.Enum):
    MONOTONE = "MONOTONE"
    BOXPLUS = "BOXPLUS"
    MEET_VARIANT = "MEET_VARIANT"
    JOIN_VARIANT = "JOIN_VARIANT"
    LATTICE_VARIANT = "LATTICE_VARIANT"
    DELTA1_STAR = "DELTA1_STAR"
    NONE = "NONE"

    def __str__(self) -> str:
        return self.value


TAG_ORDER = list(VariantTag)


@dataclass(frozen=True)
class RawMap:
    """An arbitrary function [1]^m -> [1]^n given by its values on all 2^m points."""

    m: int
    n: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != 1 << self.m:
            raise ArityMismatch(f"table has {len(self.table)} entries, expected {1 << self.m}")
        if any(y < 0 or y >> self.n for y in self.table):
            raise ArityMismatch(f"table entry outside [1]^{self.n}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "table": [[y >> i & 1 for i in range(self.n)] for y in self.table]}

    @classmethod
    def from_json(cls, data: dict) -> "RawMap":
        m, n = data["m"], data["n"]
        rows = []
        for entry in data["table"]:
            if isinstance(entry, str):
                rows.append(parse_bits(entry))
            else:
                if len(entry) != n:
                    raise ArityMismatch(f"table entry {entry} does not have {n} coordinates")
                rows.append(sum(1 << i for i, c in enumerate(entry) if c))
        return cls(m, n, tuple(rows))

    @classmethod
    def from_function(cls, m: int, n: int, fn) -> "RawMap":
        return cls(m, n, tuple(fn(x) for x in range(1 << m)))


@dataclass(frozen=True)
class CubeMorphism:
    m: int
    n: int
    coords: tuple[MonotoneBoolFn, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != self.n:
            raise ArityMismatch(f"{len(self.coords)} coordinates for target arity {self.n}")
        for c in self.coords:
            if c.arity != self.m:
                raise ArityMismatch(f"coordinate of arity {c.arity} in a map from [1]^{self.m}")

    @classmethod
    def from_sets(cls, m: int, coords: Sequence[Iterable[Iterable[int]]]) -> "CubeMorphism":
        return cls(m, len(coords), tuple(canonicalize(c, m) for c in coords))

    def __call__(self, x: int) -> int:
        y = 0
        for i, c in enumerate(self.coords):
            if c(x):
                y |= 1 << i
        return y

    def at(self, p: Point) -> Point:
        if p.n != self.m:
            raise ArityMismatch(f"point of arity {p.n} fed to a map from [1]^{self.m}")
        return Point(self.n, self(p.bits))

    @cached_property
    def table(self) -> tuple[int, ...]:
        if self.m > ORACLE_MAX_ARITY:
            raise ArityTooLarge(f"truth table of arity {self.m}")
        truths = [c.truth for c in self.coords]
        return tuple(sum(1 << i for i, t in enumerate(truths) if t >> x & 1) for x in range(1 << self.m))

    def image(self) -> frozenset[int]:
        return frozenset(self.table)

    def is_injective(self) -> bool:
        return len(self.image()) == 1 << self.m

    def is_surjective(self) -> bool:
        return len(self.image()) == 1 << self.n

    @property
    def key(self) -> tuple:
        return tuple(c.key for c in self.coords)

    def raw(self) -> RawMap:
        return RawMap(self.m, self.n, self.table)

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "CubeMorphism":
        m, n = data["m"], data["n"]
        coords = tuple(MonotoneBoolFn.from_json(c, m) for c in data["coords"])
        if len(coords) != n:
            raise ArityMismatch(f'"n" is {n} but {len(coords)} coordinates were given')
        return cls(m, n, coords)

    def __str__(self) -> str:
        return f"[1]^{self.m}->[1]^{self.n} (" + ", ".join(str(c) for c in self.coords) + ")"


Map = Union[CubeMorphism, RawMap]


def load_map(data: dict) -> Map:
    """Parse morphism JSON (``coords``) or RawMap JSON (``table``)."""
    if "coords" in data:
        return CubeMorphism.from_json(data)
    if "table" in data:
        return RawMap.from_json(data)
    raise ValueError('map JSON needs either "coords" or "table"')


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def identity(n: int) -> CubeMorphism:
    return CubeMorphism(n, n, tuple(MonotoneBoolFn.var(i, n) for i in range(1, n + 1)))


def terminal(m: int) -> CubeMorphism:
    """The unique map [1]^m -> [1]^0."""
    return CubeMorphism(m, 0, ())


def from_table(raw: RawMap) -> CubeMorphism:
    """Canonical form of a truth table; raises NotMonotone with a witness pair."""
    m, n = raw.m, raw.n
    for x in range(1 << m):
        for j in range(m):
            if x >> j & 1:
                continue
            y = x | 1 << j
            bad = raw.table[x] & ~raw.table[y]
            if bad:
                i = (bad & -bad).bit_length()
                raise NotMonotone(
                    f"coordinate {i} decreases from {bits_label(x, m)} to {bits_label(y, m)}",
                    witness={"coordinate": i, "x": bits_label(x, m), "y": bits_label(y, m)})
    coords = []
    for i in range(n):
        truth = sum(1 << x for x in range(1 << m) if raw.table[x] >> i & 1)
        coords.append(MonotoneBoolFn.from_truth(m, truth))
    return CubeMorphism(m, n, tuple(coords))


def essential_support(f: MonotoneBoolFn) -> frozenset[int]:
    """Variables f actually depends on (1-based)."""
    return frozenset(mask_key(f.support))


def overlapping_supports(phi: CubeMorphism) -> tuple[int, int, int] | None:
    """(i, j, variable) for the first two coordinates sharing a variable."""
    seen: dict[int, int] = {}
    for i, c in enumerate(phi.coords, start=1):
        for v in mask_key(c.support):
            if v in seen:
                return seen[v], i, v
            seen[v] = i
    return None


def is_interval_preserving(phi: CubeMorphism) -> bool:
    """Membership in the interval-preserving category via disjoint supports."""
    acc = 0
    for c in phi.coords:
        s = c.support
        if acc & s:
            return False
        acc |= s
    return True


def find_interval_violation(phi: CubeMorphism, max_arity: int = ORACLE_MAX_ARITY) -> Interval | None:
    """Brute force: first interval of [1]^m whose image is not an interval."""
    if phi.m > max_arity:
        raise ArityTooLarge(f"oracle bound is {max_arity}, got arity {phi.m}")
    table = phi.table
    for lo, hi in all_intervals(phi.m):
        image = {table[lo | s] for s in submasks(lo ^ hi)}
        a, b = table[lo], table[hi]
        expected = {a | s for s in submasks(a ^ b)} if a & ~b == 0 else None
        if image != expected:
            return Interval(Point(phi.m, lo), Point(phi.m, hi))
    return None


def oracle_interval_check(phi: CubeMorphism, max_arity: int = ORACLE_MAX_ARITY) -> bool:
    return find_interval_violation(phi, max_arity) is None


def compose(psi: CubeMorphism, phi: CubeMorphism) -> CubeMorphism:
    """psi ∘ phi by substituting phi's coordinates into psi's."""
    if psi.m != phi.n:
        raise ArityMismatch(f"cannot compose [1]^{psi.m}->[1]^{psi.n} after [1]^{phi.m}->[1]^{phi.n}")
    return CubeMorphism(phi.m, psi.n, tuple(substitute_shared(c, phi.coords, phi.m) for c in psi.coords))


def tensor(*maps: CubeMorphism) -> CubeMorphism:
    m = sum(f.m for f in maps)
    coords = []
    offset = 0
    for f in maps:
        coords.extend(c.shift(offset, m) for c in f.coords)
        offset += f.m
    return CubeMorphism(m, sum(f.n for f in maps), tuple(coords))


def tensor_raw(*maps: RawMap) -> RawMap:
    m = sum(f.m for f in maps)
    table = []
    for x in range(1 << m):
        y = 0
        src_off = tgt_off = 0
        for f in maps:
            y |= f.table[x >> src_off & ((1 << f.m) - 1)] << tgt_off
            src_off += f.m
            tgt_off += f.n
        table.append(y)
    return RawMap(m, sum(f.n for f in maps), tuple(table))


def act_permutation(phi: CubeMorphism, g: Permutation) -> CubeMorphism:
    """phi g, i.e. x -> phi(g.x)."""
    if g.n != phi.m:
        raise DegreeMismatch(f"permutation of degree {g.n} on a map from [1]^{phi.m}")
    ginv = g.inverse()
    return CubeMorphism(phi.m, phi.n, tuple(
        MonotoneBoolFn.from_masks((ginv.image_mask(s) for s in c.antichain), phi.m) for c in phi.coords))


def permutation_morphism(g: Permutation) -> CubeMorphism:
    """The coordinate permutation x -> g.x as a morphism."""
    return act_permutation(identity(g.n), g)


# -- variants -----------------------------------------------------------------

def _is_meet_coord(c: MonotoneBoolFn) -> bool:
    return len(c.antichain) <= 1


def _is_join_coord(c: MonotoneBoolFn) -> bool:
    return c.is_constant() or all(popcount(s) == 1 for s in c.antichain)


def _increasing_variables(phi: CubeMorphism) -> bool:
    last = 0
    for c in phi.coords:
        if c.is_constant():
            continue
        v = c.antichain[0].bit_length()
        if v <= last:
            return False
        last = v
    return True


def classify(phi: Map) -> frozenset[VariantTag]:
    if isinstance(phi, RawMap):
        try:
            phi = from_table(phi)
        except NotMonotone:
            return frozenset({VariantTag.NONE})
    tags = {VariantTag.MONOTONE}
    if not is_interval_preserving(phi):
        return frozenset(tags)
    tags.add(VariantTag.BOXPLUS)
    meet = all(_is_meet_coord(c) for c in phi.coords)
    join = all(_is_join_coord(c) for c in phi.coords)
    if meet:
        tags.add(VariantTag.MEET_VARIANT)
    if join:
        tags.add(VariantTag.JOIN_VARIANT)
    if meet and join:
        tags.add(VariantTag.LATTICE_VARIANT)
        if _increasing_variables(phi):
            tags.add(VariantTag.DELTA1_STAR)
    return frozenset(tags)


def sorted_tags(tags: Iterable[VariantTag]) -> list[str]:
    tags = set(tags)
    return [t.value for t in TAG_ORDER if t in tags]


_FACTOR_FILTER = {
    VariantTag.BOXPLUS: lambda f: True,
    VariantTag.MEET_VARIANT: _is_meet_coord,
    VariantTag.JOIN_VARIANT: _is_join_coord,
    VariantTag.LATTICE_VARIANT: lambda f: _is_meet_coord(f) and _is_join_coord(f),
    VariantTag.DELTA1_STAR: lambda f: _is_meet_coord(f) and _is_join_coord(f),
}


def _boxplus_family(m: int, n: int, tag: VariantTag) -> list[CubeMorphism]:
    keep = _FACTOR_FILTER[tag]
    factors = {k: [f for f in full_support_functions(k) if keep(f)] for k in range(m + 1)}
    out = []
    # each variable goes to one coordinate (1..n) or is unused (0)
    for assignment in itertools.product(range(n + 1), repeat=m):
        blocks = [[v + 1 for v in range(m) if assignment[v] == i] for i in range(1, n + 1)]
        choices = [[f.remap(b, m) for f in factors[len(b)]] for b in blocks]
        for coords in itertools.product(*choices):
            out.append(CubeMorphism(m, n, coords))
    if tag is VariantTag.DELTA1_STAR:
        out = [phi for phi in out if _increasing_variables(phi)]
    return out


def enumerate_hom(m: int, n: int, tag: VariantTag | str = VariantTag.MONOTONE) -> list[CubeMorphism]:
    """All maps [1]^m -> [1]^n carrying ``tag``, sorted by canonical serialization."""
    tag = VariantTag(tag)
    if m > ENUM_MAX_ARITY:
        raise ArityTooLarge(f"exhaustive enumeration is limited to m <= {ENUM_MAX_ARITY}")
    if m < 0 or n < 0:
        raise ValueError("arities must be nonnegative")
    if tag is VariantTag.NONE:
        raise ValueError("NONE is not an enumerable variant")
    if tag is VariantTag.MONOTONE:
        fns = monotone_functions(m)
        return [CubeMorphism(m, n, coords) for coords in itertools.product(fns, repeat=n)]
    return sorted(_boxplus_family(m, n, tag), key=lambda phi: phi.key)


def count_hom(m: int, n: int, tag: VariantTag | str = VariantTag.MONOTONE) -> int:
    tag = VariantTag(tag)
    if tag is VariantTag.MONOTONE:
        if m > ENUM_MAX_ARITY:
            raise ArityTooLarge(f"exhaustive enumeration is limited to m <= {ENUM_MAX_ARITY}")
        return len(monotone_functions(m)) ** n
    return len(enumerate_hom(m, n, tag))


# -- named generators -----------------------------------------------------------

_ALIASES = {
    "σ": "sigma", "sigma": "sigma",
    "δ₋": "delta-", "δ-": "delta-", "delta-": "delta-", "delta_minus": "delta-",
    "δ₊": "delta+", "δ+": "delta+", "delta+": "delta+", "delta_plus": "delta+",
    "γ₋": "gamma-", "γ-": "gamma-", "gamma-": "gamma-", "gamma_minus": "gamma-",
    "γ₊": "gamma+", "γ+": "gamma+", "gamma+": "gamma+", "gamma_plus": "gamma+",
    "τ": "tau", "tau": "tau",
    "diag": "diag",
    "reverse": "reverse",
}


def _base(kind: str) -> Map:
    v = MonotoneBoolFn.var
    if kind == "sigma":
        return CubeMorphism(1, 0, ())
    if kind == "delta-":
        return CubeMorphism(0, 1, (MonotoneBoolFn.const(0, 0),))
    if kind == "delta+":
        return CubeMorphism(0, 1, (MonotoneBoolFn.const(1, 0),))
    if kind == "gamma-":
        return CubeMorphism(2, 1, (MonotoneBoolFn.from_sets([[1, 2]], 2),))
    if kind == "gamma+":
        return CubeMorphism(2, 1, (MonotoneBoolFn.from_sets([[1], [2]], 2),))
    if kind == "tau":
        return CubeMorphism(2, 2, (v(2, 2), v(1, 2)))
    if kind == "diag":
        return CubeMorphism(1, 2, (v(1, 1), v(1, 1)))
    if kind == "reverse":
        return RawMap(1, 1, (1, 0))
    raise ValueError(f"unknown generator {kind!r}")


def normalize_kind(kind: str) -> str:
    try:
        return _ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}") from None


def named_generator(kind: str, i: int = 1, n: int = 1) -> Map:
    """The whiskered generator id^{i-1} ⊗ kind ⊗ id^{n-i}."""
    kind = normalize_kind(kind)
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"position {i} not in 1..{n}")
    base = _base(kind)
    if isinstance(base, RawMap):
        ident = lambda k: RawMap(k, k, tuple(range(1 << k)))
        return tensor_raw(ident(i - 1), base, ident(n - i))
    return tensor(identity(i - 1), base, identity(n - i))
