"""Finite posets, Boolean lattices [1]^n, their points, intervals and
coordinate permutations.

Points of [1]^n are stored as integer bitmasks with coordinate 1 in the least
significant bit. Textual output always lists coordinate 1 first, so the point
with bits ``0b10`` in [1]^2 prints as ``"01"``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import DegreeMismatch, IncomparableEndpoints, InvalidPoset


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits_label(bits: int, n: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(n))


def parse_bits(label: str) -> int:
    return sum(1 << i for i, c in enumerate(label) if c == "1")


def submasks(mask: int):
    """All submasks of ``mask``, in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Point:
    n: int
    bits: int

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#b} do not fit arity {self.n}")

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "Point":
        return cls(len(coords), sum(1 << i for i, c in enumerate(coords) if c))

    @classmethod
    def parse(cls, label: str) -> "Point":
        return cls(len(label), parse_bits(label))

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(self.bits >> i & 1 for i in range(self.n))

    def __getitem__(self, i: int) -> int:
        """Coordinate ``i`` (1-based)."""
        return self.bits >> (i - 1) & 1

    def __le__(self, other: "Point") -> bool:
        return self.n == other.n and self.bits & ~other.bits == 0

    def __lt__(self, other: "Point") -> bool:
        return self <= other and self.bits != other.bits

    def __str__(self) -> str:
        return bits_label(self.bits, self.n)


@dataclass(frozen=True)
class Interval:
    lo: Point
    hi: Point

    @property
    def n(self) -> int:
        return self.lo.n

    @property
    def rank(self) -> int:
        return popcount(self.lo.bits ^ self.hi.bits)

    @property
    def free_mask(self) -> int:
        return self.lo.bits ^ self.hi.bits

    def members(self) -> list[Point]:
        return [Point(self.n, self.lo.bits | s) for s in submasks(self.free_mask)]

    def __contains__(self, p: Point) -> bool:
        return self.lo <= p <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def make_interval(lo: Point, hi: Point) -> Interval:
    if lo.n != hi.n:
        raise DegreeMismatch(f"endpoints have arities {lo.n} and {hi.n}")
    if not lo <= hi:
        raise IncomparableEndpoints(f"{lo} is not below {hi}", witness=[str(lo), str(hi)])
    return Interval(lo, hi)


def all_intervals(n: int) -> Iterable[tuple[int, int]]:
    """The 3^n intervals of [1]^n as (lo, hi) bitmask pairs."""
    for hi in range(1 << n):
        for lo in submasks(hi):
            yield lo, hi


@dataclass(frozen=True)
class Permutation:
    """A bijection g of {1..n}; ``map[j-1] = g(j)``.

    Acting on points, g sends x to the point y with y_{g(j)} = x_j.
    """

    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if sorted(self.map) != list(range(1, len(self.map) + 1)):
            raise ValueError(f"{self.map} is not a permutation of 1..{len(self.map)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all(cls, n: int) -> list["Permutation"]:
        return [cls(p) for p in itertools.permutations(range(1, n + 1))]

    @property
    def n(self) -> int:
        return len(self.map)

    def __call__(self, j: int) -> int:
        return self.map[j - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composite ``self ∘ other`` (apply ``other`` first)."""
        if self.n != other.n:
            raise DegreeMismatch(f"degrees {self.n} and {other.n}")
        return Permutation(tuple(self.map[other.map[j] - 1] for j in range(self.n)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, gj in enumerate(self.map, start=1):
            inv[gj - 1] = j
        return Permutation(tuple(inv))

    def apply_bits(self, x: int) -> int:
        y = 0
        for j, gj in enumerate(self.map):
            if x >> j & 1:
                y |= 1 << (gj - 1)
        return y

    def apply(self, x: Point) -> Point:
        if x.n != self.n:
            raise DegreeMismatch(f"permutation of degree {self.n} applied to point of arity {x.n}")
        return Point(x.n, self.apply_bits(x.bits))

    def image_mask(self, mask: int) -> int:
        """g(S) for a subset S of {1..n} given as a bitmask."""
        return self.apply_bits(mask)

    def is_identity(self) -> bool:
        return self.map == tuple(range(1, self.n + 1))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.map)) + "]"


def apply(g: Permutation, x: Point) -> Point:
    return g.apply(x)


class FinPoset:
    """An immutable finite poset on elements ``0..len-1``.

    ``labels`` carries the opaque element ids in their given order; ``up[i]``
    is the set of j with i <= j.
    """

    def __init__(self, labels: Sequence[Hashable], pairs: Iterable[tuple[int, int]], *,
                 covers: bool = False, validate: bool = True):
        self.labels = tuple(labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise InvalidPoset("duplicate element ids")
        up = [{i} for i in range(n)]
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidPoset(f"pair ({i}, {j}) out of range")
            up[i].add(j)
        if covers:
            # transitive closure, processing elements in reverse topological order
            closed: list[set[int] | None] = [None] * n
            state = [0] * n

            def close(i: int) -> set[int]:
                if state[i] == 2:
                    return closed[i]
                if state[i] == 1:
                    raise InvalidPoset("cover relation has a cycle", witness=[str(self.labels[i])])
                state[i] = 1
                acc = {i}
                for j in up[i]:
                    if j != i:
                        acc |= close(j)
                state[i] = 2
                closed[i] = acc
                return acc

            for i in range(n):
                close(i)
            up = closed
        elif validate:
            for i in range(n):
                for j in up[i]:
                    if not up[j] <= up[i]:
                        raise InvalidPoset("relation is not transitive",
                                           witness=[str(self.labels[i]), str(self.labels[j])])
        for i in range(n if validate else 0):
            for j in up[i]:
                if i != j and i in up[j]:
                    raise InvalidPoset("relation is not antisymmetric",
                                       witness=[str(self.labels[i]), str(self.labels[j])])
        self.up: tuple[frozenset[int], ...] = tuple(frozenset(u) for u in up)
        self.down: tuple[frozenset[int], ...] = tuple(
            frozenset(i for i in range(n) if j in self.up[i]) for j in range(n))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_covers(cls, labels, covers) -> "FinPoset":
        return cls(labels, covers, covers=True)

    @classmethod
    def from_leq(cls, labels, leq) -> "FinPoset":
        return cls(labels, leq)

    @classmethod
    def boolean_lattice(cls, n: int) -> "FinPoset":
        """[1]^n with element i the point whose bitmask is i."""
        labels = [bits_label(x, n) for x in range(1 << n)]
        covers = [(x, x | 1 << j) for x in range(1 << n) for j in range(n) if not x >> j & 1]
        return cls.from_covers(labels, covers)

    @classmethod
    def chain(cls, length: int) -> "FinPoset":
        """The chain 0 < 1 < ... < length-1 (so ``chain(k+1)`` is [k])."""
        return cls.from_covers([str(i) for i in range(length)], [(i, i + 1) for i in range(length - 1)])

    @classmethod
    def product(cls, *factors: "FinPoset") -> "FinPoset":
        index = list(itertools.product(*(range(len(f)) for f in factors)))
        pos = {t: k for k, t in enumerate(index)}
        labels = [",".join(str(f.labels[c]) for f, c in zip(factors, t)) if len(factors) > 1
                  else str(factors[0].labels[t[0]]) for t in index]
        covers = []
        for t in index:
            for a, f in enumerate(factors):
                for c in f.upper_covers(t[a]):
                    s = list(t)
                    s[a] = c
                    covers.append((pos[t], pos[tuple(s)]))
        return cls.from_covers(labels, covers)

    def without(self, removed: Iterable[int]) -> "FinPoset":
        """The induced subposet on all elements not in ``removed``."""
        gone = set(removed)
        keep = [i for i in range(len(self)) if i not in gone]
        pos = {old: new for new, old in enumerate(keep)}
        pairs = [(pos[i], pos[j]) for i in keep for j in self.up[i] if j in pos]
        return FinPoset([self.labels[i] for i in keep], pairs)

    # -- queries --------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)

    def leq(self, i: int, j: int) -> bool:
        return j in self.up[i]

    def interval(self, x: int, z: int) -> frozenset[int]:
        return self.up[x] & self.down[z]

    @cached_property
    def _upper_covers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(sorted(j for j in self.up[i] if j != i and len(self.up[i] & self.down[j]) == 2))
                     for i in range(len(self)))

    def upper_covers(self, i: int) -> tuple[int, ...]:
        return self._upper_covers[i]

    @cached_property
    def _lower_covers(self) -> tuple[tuple[int, ...], ...]:
        lower: list[list[int]] = [[] for _ in range(len(self))]
        for i, cs in enumerate(self._upper_covers):
            for j in cs:
                lower[j].append(i)
        return tuple(tuple(sorted(l)) for l in lower)

    def lower_covers(self, i: int) -> tuple[int, ...]:
        return self._lower_covers[i]

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(len(self)) for j in self.upper_covers(i)]

    def meet(self, i: int, j: int) -> int | None:
        """Greatest lower bound of i and j, or None if it does not exist."""
        return self.inf(self.down[i] & self.down[j])

    def join(self, i: int, j: int) -> int | None:
        return self.sup_of(self.up[i] & self.up[j])

    def inf(self, lower_bounds: frozenset[int]) -> int | None:
        for b in lower_bounds:
            if lower_bounds <= self.down[b]:
                return b
        return None

    def sup_of(self, upper_bounds: frozenset[int]) -> int | None:
        for b in upper_bounds:
            if upper_bounds <= self.up[b]:
                return b
        return None

    def supremum(self, xs: Iterable[int]) -> int | None:
        ub = frozenset(range(len(self)))
        for x in xs:
            ub &= self.up[x]
        return self.sup_of(ub)

    def minimal_elements(self) -> list[int]:
        return [i for i in range(len(self)) if self.down[i] == {i}]

    def is_monotone(self, images: Sequence[int], target: "FinPoset") -> tuple[int, int] | None:
        """First pair i <= j with images[i] not <= images[j], else None."""
        for i in range(len(self)):
            for j in self.upper_covers(i):
                if not target.leq(images[i], images[j]):
                    return i, j
        return None

    # -- serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {"elements": [str(l) for l in self.labels],
                "covers": [[str(self.labels[i]), str(self.labels[j])] for i, j in self.cover_pairs()]}

    @classmethod
    def from_json(cls, data: dict) -> "FinPoset":
        labels = list(data["elements"])
        if "covers" in data:
            pos = {l: k for k, l in enumerate(labels)}

            def idx(v):
                if isinstance(v, int) and not isinstance(v, bool) and v not in pos:
                    return v
                return pos[v]

            try:
                pairs = [(idx(a), idx(b)) for a, b in data["covers"]]
            except KeyError as exc:
                raise InvalidPoset(f"unknown element {exc.args[0]!r}") from None
            return cls.from_covers(labels, pairs)
        if "leq" in data:
            return cls.from_leq(labels, [tuple(p) for p in data["leq"]])
        raise InvalidPoset('poset JSON needs "covers" or "leq"')

    @classmethod
    def load(cls, path) -> "FinPoset":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def __repr__(self) -> str:
        return f"FinPoset({len(self)} elements)"


def boolean_atoms(P: FinPoset, x: int, z: int) -> tuple[int, ...] | None:
    """Atoms of [x,z] if the interval is Boolean, else None.

    The interval is Boolean iff y -> {atoms below y} is an order isomorphism
    onto the powerset of the atoms.
    """
    if not P.leq(x, z):
        return None
    members = P.interval(x, z)
    atoms = tuple(a for a in P.upper_covers(x) if a in members)
    r = len(atoms)
    if len(members) != 1 << r:
        return None
    code = {}
    for y in members:
        code[y] = sum(1 << k for k, a in enumerate(atoms) if P.leq(a, y))
    if len(set(code.values())) != len(members):
        return None
    for y in members:
        for w in members:
            if P.leq(y, w) != (code[y] & ~code[w] == 0):
                return None
    return atoms


def boolean_intervals(P: FinPoset) -> list[tuple[int, int, int]]:
    """Every Boolean interval of P as (lo, hi, rank), graded by rank."""
    out = []
    for x in range(len(P)):
        for z in sorted(P.up[x]):
            atoms = boolean_atoms(P, x, z)
            if atoms is not None:
                out.append((x, z, len(atoms)))
    out.sort(key=lambda t: (t[2], t[0], t[1]))
    return out


def function_poset(P: FinPoset, k: int) -> FinPoset:
    """The poset P^{[k]} of monotone maps [k] -> P, ordered pointwise.

    Elements are nondecreasing (k+1)-tuples of element indices of P; labels
    join the base labels with ``|``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    chains: list[tuple[int, ...]] = [(p,) for p in range(len(P))]
    for _ in range(k):
        chains = [c + (q,) for c in chains for q in sorted(P.up[c[-1]])]
    chains.sort()
    pairs = [(a, b) for a, c in enumerate(chains) for b, d in enumerate(chains)
             if all(P.leq(p, q) for p, q in zip(c, d))]
    # pointwise order of a valid poset is a valid poset
    poset = FinPoset(["|".join(str(P.labels[p]) for p in c) for c in chains], pairs, validate=False)
    poset.tuples = tuple(chains)
    return poset
