"""Structural algorithms for interval-preserving maps.

* tensor decomposition  phi g = phi_1 ⊗ ... ⊗ phi_n ⊗ σ^{⊗d}
* coface words for interval inclusions and the (surjection, injection) factorization
* constructive sections of surjections
* extraction of a reversal from a non-monotone map and of a diagonal from a
  monotone map that breaks a 1-dimensional interval
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .boolfn import MonotoneBoolFn, mask_key
from .errors import (
    ArityMismatch,
    IsMonotone,
    MalformedDecomposition,
    NotBoxplus,
    NotMonotone,
    NotSurjective,
    PreservesOneDimIntervals,
)
from .morphism import (
    CubeMorphism,
    RawMap,
    VariantTag,
    act_permutation,
    compose,
    enumerate_hom,
    from_table,
    identity,
    named_generator,
    overlapping_supports,
    permutation_morphism,
    tensor,
    terminal,
)
from .order import Interval, Permutation, Point, bits_label, popcount


def require_boxplus(phi: CubeMorphism) -> None:
    clash = overlapping_supports(phi)
    if clash is not None:
        i, j, v = clash
        raise NotBoxplus(
            f"coordinates {i} and {j} both depend on variable {v}",
            witness={"coordinates": [i, j], "variable": v, "map": phi.to_json()})


# -- decomposition ----------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    blocks: tuple[int, ...]
    g: Permutation
    factors: tuple[MonotoneBoolFn, ...]
    dropped: int

    @property
    def m(self) -> int:
        return sum(self.blocks) + self.dropped

    @property
    def n(self) -> int:
        return len(self.blocks)

    def to_json(self) -> dict:
        return {"blocks": list(self.blocks), "g": list(self.g.map),
                "factors": [f.to_json() for f in self.factors], "dropped": self.dropped}

    @classmethod
    def from_json(cls, data: dict) -> "Decomposition":
        try:
            blocks = tuple(int(b) for b in data["blocks"])
            factors = tuple(MonotoneBoolFn.from_json(f, b) for f, b in zip(data["factors"], blocks))
            if len(factors) != len(data["factors"]) or len(factors) != len(blocks):
                raise MalformedDecomposition("blocks and factors have different lengths")
            return cls(blocks, Permutation(tuple(data["g"])), factors, int(data["dropped"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDecomposition(str(exc)) from None


def decompose(phi: CubeMorphism) -> Decomposition:
    """Canonical tensor decomposition of an interval-preserving map."""
    require_boxplus(phi)
    m = phi.m
    supports = [mask_key(c.support) for c in phi.coords]
    used = set(itertools.chain.from_iterable(supports))
    tail = [v for v in range(1, m + 1) if v not in used]
    g_map = [v for s in supports for v in s] + tail
    factors = []
    for c, s in zip(phi.coords, supports):
        rename = [1] * m
        for k, v in enumerate(s, start=1):
            rename[v - 1] = k
        factors.append(c.remap(rename, len(s)))
    return Decomposition(tuple(len(s) for s in supports), Permutation(tuple(g_map)),
                         tuple(factors), len(tail))


def _check_decomposition(d: Decomposition) -> None:
    if len(d.factors) != len(d.blocks):
        raise MalformedDecomposition(f"{len(d.blocks)} blocks but {len(d.factors)} factors")
    if d.dropped < 0 or any(b < 0 for b in d.blocks):
        raise MalformedDecomposition("block sizes must be nonnegative")
    if d.g.n != d.m:
        raise MalformedDecomposition(f"permutation of degree {d.g.n}, expected {d.m}")
    for i, (f, b) in enumerate(zip(d.factors, d.blocks), start=1):
        if f.arity != b:
            raise MalformedDecomposition(f"factor {i} has arity {f.arity}, block size {b}")
        if f.support != (1 << b) - 1:
            raise MalformedDecomposition(f"factor {i} is constant in some coordinate")


def block_tensor(d: Decomposition) -> CubeMorphism:
    """phi_1 ⊗ ... ⊗ phi_n ⊗ σ^{⊗dropped}."""
    parts = [CubeMorphism(f.arity, 1, (f,)) for f in d.factors]
    parts.extend(terminal(1) for _ in range(d.dropped))
    return tensor(*parts) if parts else identity(0)


def recompose(d: Decomposition) -> CubeMorphism:
    _check_decomposition(d)
    return act_permutation(block_tensor(d), d.g.inverse())


def block_supports(blocks: Sequence[int]) -> list[int]:
    """Masks of the consecutive position blocks t(1), ..., t(n)."""
    out, offset = [], 0
    for b in blocks:
        out.append(((1 << b) - 1) << offset)
        offset += b
    return out


def is_decomposing_permutation(phi: CubeMorphism, h: Permutation, blocks: Sequence[int]) -> bool:
    """Whether phi h is a tensor of full-support factors on consecutive blocks plus deletions."""
    moved = act_permutation(phi, h)
    return all(c.support == t for c, t in zip(moved.coords, block_supports(blocks)))


def coset(d: Decomposition) -> Iterator[Permutation]:
    """g (Σ_{m_1} × ... × Σ_{m_n} × Σ_dropped): every h with phi h block-decomposed."""
    sizes = list(d.blocks) + [d.dropped]
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    for parts in itertools.product(*(itertools.permutations(range(s)) for s in sizes)):
        local = [0] * d.m
        for off, p in zip(offsets, parts):
            for k, pk in enumerate(p):
                local[off + k] = off + pk + 1
        yield d.g * Permutation(tuple(local))


# -- coface words and factorization ------------------------------------------------

@dataclass(frozen=True)
class CofaceWord:
    """Cofaces applied left to right; step k is δ_{sign, position; ambient}."""

    source: int
    steps: tuple[tuple[str, int, int], ...]

    @property
    def target(self) -> int:
        return self.source + len(self.steps)

    def evaluate(self) -> CubeMorphism:
        phi = identity(self.source)
        for k, (sign, pos, ambient) in enumerate(self.steps):
            if ambient != self.source + k + 1:
                raise ArityMismatch(f"step {k + 1} has ambient arity {ambient}, expected {self.source + k + 1}")
            kind = "delta-" if sign == "-" else "delta+"
            phi = compose(named_generator(kind, pos, ambient), phi)
        return phi

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target,
                "steps": [[s, p, a] for s, p, a in self.steps]}

    @classmethod
    def from_json(cls, data: dict) -> "CofaceWord":
        return cls(int(data["source"]), tuple((s, int(p), int(a)) for s, p, a in data["steps"]))


def interval_inclusion(interval: Interval) -> CofaceWord:
    """Coface word whose composite has image exactly ``interval``."""
    n, rank = interval.n, interval.rank
    lo = interval.lo.bits
    frozen = [j for j in range(n) if not interval.free_mask >> j & 1]
    steps = tuple(("+" if lo >> j & 1 else "-", j + 1, rank + k + 1) for k, j in enumerate(frozen))
    return CofaceWord(rank, steps)


@dataclass(frozen=True)
class Factorization:
    epi: CubeMorphism
    mono: CofaceWord
    image: Interval

    def to_json(self) -> dict:
        return {"epi": self.epi.to_json(), "mono": self.mono.to_json(),
                "image": {"lo": str(self.image.lo), "hi": str(self.image.hi), "rank": self.image.rank}}


def epi_mono_factorize(phi: CubeMorphism) -> Factorization:
    require_boxplus(phi)
    lo, hi = phi(0), phi((1 << phi.m) - 1)
    image = Interval(Point(phi.n, lo), Point(phi.n, hi))
    varying = [i for i in range(phi.n) if (lo ^ hi) >> i & 1]
    epi = CubeMorphism(phi.m, len(varying), tuple(phi.coords[i] for i in varying))
    return Factorization(epi, interval_inclusion(image), image)


# -- sections ------------------------------------------------------------------------

def _lex(x: int, m: int) -> tuple[int, ...]:
    return tuple(x >> j & 1 for j in range(m))


def require_surjective(pi: CubeMorphism) -> None:
    require_boxplus(pi)
    lo, hi = pi(0), pi((1 << pi.m) - 1)
    if lo != 0 or hi != (1 << pi.n) - 1:
        raise NotSurjective(
            f"image is [{bits_label(lo, pi.n)},{bits_label(hi, pi.n)}]",
            witness={"image": [bits_label(lo, pi.n), bits_label(hi, pi.n)], "map": pi.to_json()})


def factor_section_edge(f: MonotoneBoolFn) -> tuple[int, int]:
    """(δ*(0), δ*(1)) for a surjection f: [1]^k -> [1]."""
    k = f.arity
    zeros = [x for x in range(1 << k) if not f(x)]
    maximal = [x for x in zeros if not any(x & ~y == 0 and x != y for y in zeros)]
    d0 = max(maximal, key=lambda x: _lex(x, k))
    ones_above = [y for y in range(1 << k) if f(y) and d0 & ~y == 0]
    minimal = [y for y in ones_above if not any(z & ~y == 0 and z != y for z in ones_above)]
    d1 = min(minimal, key=lambda y: _lex(y, k))
    return d0, d1


def construct_section(pi: CubeMorphism) -> CubeMorphism:
    """A deterministic interval-preserving s with pi ∘ s = id."""
    require_surjective(pi)
    m, n = pi.m, pi.n
    if n == 0:
        return CubeMorphism(0, m, tuple(MonotoneBoolFn.const(0, 0) for _ in range(m)))
    d = decompose(pi)
    coords: list[MonotoneBoolFn] = []
    for i, f in enumerate(d.factors, start=1):
        d0, d1 = factor_section_edge(f)
        for j in range(f.arity):
            if (d0 ^ d1) >> j & 1:
                coords.append(MonotoneBoolFn.var(i, n))
            else:
                coords.append(MonotoneBoolFn.const(d0 >> j & 1, n))
    coords.extend(MonotoneBoolFn.const(0, n) for _ in range(d.dropped))
    local = CubeMorphism(n, m, tuple(coords))
    return compose(permutation_morphism(d.g), local)


def sections_of(pi: CubeMorphism) -> list[CubeMorphism]:
    """Every interval-preserving s with pi ∘ s = id, by exhaustive search."""
    require_surjective(pi)
    ident = identity(pi.n)
    return [s for s in enumerate_hom(pi.n, pi.m, VariantTag.BOXPLUS) if compose(pi, s) == ident]


# -- reversal and diagonal extraction ----------------------------------------------

@dataclass(frozen=True)
class ReversalWitness:
    word: CofaceWord
    coordinate: int

    def composite(self, phi: RawMap) -> RawMap:
        inc = self.word.evaluate()
        return RawMap(1, 1, tuple(phi(inc(t)) >> (self.coordinate - 1) & 1 for t in (0, 1)))

    def verify(self, phi: RawMap) -> bool:
        return self.composite(phi).table == (1, 0)

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "coordinate": self.coordinate}


def extract_reversal(phi: RawMap) -> ReversalWitness:
    """Coface word w and coordinate i with proj_i ∘ phi ∘ w = reverse."""
    try:
        from_table(phi)
    except NotMonotone:
        pass
    else:
        raise IsMonotone("map is monotone, no reversal can be extracted")
    for x in range(1 << phi.m):
        for j in range(phi.m):
            if x >> j & 1:
                continue
            y = x | 1 << j
            bad = phi(x) & ~phi(y)
            if bad:
                i = (bad & -bad).bit_length()
                word = interval_inclusion(Interval(Point(phi.m, x), Point(phi.m, y)))
                return ReversalWitness(word, i)
    raise AssertionError("non-monotone map without a decreasing edge")


def projection(n: int, keep: Sequence[int]) -> CubeMorphism:
    """[1]^n -> [1]^len(keep) keeping the listed coordinates (1-based, increasing)."""
    return CubeMorphism(n, len(keep), tuple(MonotoneBoolFn.var(i, n) for i in keep))


@dataclass(frozen=True)
class DiagonalWitness:
    word: CofaceWord
    retraction: CubeMorphism
    codegeneracies: tuple[tuple[int, int], ...]

    def codegeneracy(self) -> CubeMorphism:
        k = self.retraction.n
        phi = identity(k)
        for pos, ambient in self.codegeneracies:
            phi = compose(named_generator("sigma", pos, ambient), phi)
        return phi

    def composite(self, phi: CubeMorphism) -> CubeMorphism:
        return compose(self.codegeneracy(), compose(self.retraction, compose(phi, self.word.evaluate())))

    def verify(self, phi: CubeMorphism) -> bool:
        return self.composite(phi) == named_generator("diag", 1, 1)

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "retraction": self.retraction.to_json(),
                "codegeneracies": [list(c) for c in self.codegeneracies]}


def extract_diagonal(phi: CubeMorphism | RawMap) -> DiagonalWitness:
    """Coface word onto an edge whose image is not an interval, then project to diag."""
    if isinstance(phi, RawMap):
        phi = from_table(phi)
    table = phi.table
    for x in range(1 << phi.m):
        for j in range(phi.m):
            if x >> j & 1:
                continue
            y = x | 1 << j
            moved = table[x] ^ table[y]
            if popcount(moved) >= 2:
                word = interval_inclusion(Interval(Point(phi.m, x), Point(phi.m, y)))
                keep = [i + 1 for i in range(phi.n) if moved >> i & 1]
                k = len(keep)
                # σ_{k;k}, σ_{k-1;k-1}, ... down to two coordinates
                codeg = tuple((a, a) for a in range(k, 2, -1))
                return DiagonalWitness(word, projection(phi.n, keep), codeg)
    raise PreservesOneDimIntervals("every edge maps onto an interval", witness={"map": phi.to_json()})
