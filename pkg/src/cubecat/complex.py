"""Boolean complexes of finite posets, subdivision of representable cubes,
triangulation, and the curvature checks.

A cell of the Boolean complex of P is a Boolean interval [x, z] of P. Its
coordinates are the atoms of [x, z] (upper covers of x inside the interval),
ordered by element id.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Iterable

import networkx as nx

from .errors import NotBoxplus, NotFaceClosed, NotMeetSemilattice, NotMonotone, SizeExceeded
from .morphism import CubeMorphism, RawMap, VariantTag, classify, is_interval_preserving
from .order import FinPoset, Point, boolean_atoms, boolean_intervals, function_poset

SUBDIVISION_MAX_N = 4
SUBDIVISION_MAX_K = 3

Cell = tuple[int, int, int]  # (lo, hi, rank)


def cell_coordinates(P: FinPoset, x: int, z: int) -> tuple[tuple[int, ...], dict[int, int]] | None:
    """(atoms, code) for a Boolean interval, where code[y] is the bitmask of atoms below y."""
    atoms = boolean_atoms(P, x, z)
    if atoms is None:
        return None
    atoms = tuple(sorted(atoms))
    code = {y: sum(1 << k for k, a in enumerate(atoms) if P.leq(a, y)) for y in P.interval(x, z)}
    return atoms, code


@dataclass(frozen=True)
class Facet:
    cell: int
    direction: int  # 1-based atom direction inside the parent cell
    sign: str       # "-" keeps the lo side, "+" the hi side

    def to_json(self) -> dict:
        return {"facet": self.cell, "direction": self.direction, "sign": self.sign}


class CubeComplex:
    """A face-closed set of Boolean intervals of ``base`` with facet incidence."""

    def __init__(self, base: FinPoset, cells: Iterable[tuple[int, int, int] | tuple[int, int]]):
        self.base = base
        normalized = []
        for c in cells:
            lo, hi = c[0], c[1]
            coords = cell_coordinates(base, lo, hi)
            if coords is None:
                raise NotFaceClosed(f"[{base.labels[lo]},{base.labels[hi]}] is not a Boolean interval",
                                    witness={"lo": lo, "hi": hi})
            normalized.append((lo, hi, len(coords[0])))
        self.cells: tuple[Cell, ...] = tuple(sorted(set(normalized), key=lambda t: (t[2], t[0], t[1])))
        self.index = {(lo, hi): k for k, (lo, hi, _) in enumerate(self.cells)}
        self.incidence: tuple[tuple[Facet, ...], ...] = tuple(self._facets(c) for c in self.cells)

    def _facets(self, cell: Cell) -> tuple[Facet, ...]:
        lo, hi, r = cell
        atoms, code = cell_coordinates(self.base, lo, hi)
        by_code = {v: y for y, v in code.items()}
        full = (1 << r) - 1
        out = []
        for j in range(r):
            for sign, (a, b) in (("-", (lo, by_code[full & ~(1 << j)])), ("+", (atoms[j], hi))):
                k = self.index.get((a, b))
                if k is None:
                    raise NotFaceClosed(
                        f"facet [{self.base.labels[a]},{self.base.labels[b]}] of a cell is missing",
                        witness={"cell": [lo, hi], "facet": [a, b]})
                out.append(Facet(k, j + 1, sign))
        return tuple(out)

    # -- queries --------------------------------------------------------------

    @property
    def dimension(self) -> int:
        return max((r for _, _, r in self.cells), default=-1)

    def cells_of_rank(self, d: int) -> list[Cell]:
        return [c for c in self.cells if c[2] == d]

    def counts(self) -> list[int]:
        return [len(self.cells_of_rank(d)) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(lo for lo, _, r in self.cells if r == 0)

    def members(self, cell: Cell) -> frozenset[int]:
        return self.base.interval(cell[0], cell[1])

    def to_json(self) -> dict:
        return {"poset": self.base.to_json(),
                "cells": [{"lo": lo, "hi": hi, "rank": r} for lo, hi, r in self.cells],
                "incidence": [{"cell": k, "facets": [f.to_json() for f in fs]}
                              for k, fs in enumerate(self.incidence) if fs],
                "counts": self.counts()}

    @classmethod
    def from_json(cls, data: dict) -> "CubeComplex":
        base = FinPoset.from_json(data["poset"])
        if "cells" not in data:
            return boolean_complex(base)
        return cls(base, [(c["lo"], c["hi"]) for c in data["cells"]])


def boolean_complex(P: FinPoset) -> CubeComplex:
    return CubeComplex(P, boolean_intervals(P))


def truncate(C: CubeComplex, d: int) -> CubeComplex:
    if d < 0:
        raise ValueError("truncation degree must be nonnegative")
    return CubeComplex(C.base, [c for c in C.cells if c[2] <= d])


# -- maps between posets ---------------------------------------------------------------

@dataclass(frozen=True)
class PosetMap:
    source: FinPoset
    target: FinPoset
    images: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "map": {str(self.source.labels[i]): str(self.target.labels[j]) for i, j in enumerate(self.images)}}

    @classmethod
    def from_json(cls, data: dict) -> "PosetMap":
        src, tgt = FinPoset.from_json(data["source"]), FinPoset.from_json(data["target"])
        mapping = data["map"]
        if isinstance(mapping, list):
            images = [tgt.index(v) for v in mapping]
        else:
            images = [tgt.index(mapping[str(l)]) for l in src.labels]
        return cls(src, tgt, tuple(images))

    @classmethod
    def from_morphism(cls, phi: CubeMorphism | RawMap) -> "PosetMap":
        return cls(FinPoset.boolean_lattice(phi.m), FinPoset.boolean_lattice(phi.n), tuple(phi.table))


@dataclass(frozen=True)
class InducesResult:
    ok: bool
    checked: int
    witness: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self, P: FinPoset | None = None) -> dict:
        out = {"induces": self.ok, "checked": self.checked}
        if self.witness is not None:
            lo, hi = self.witness
            out["witness"] = {"lo": lo, "hi": hi, "reason": self.reason}
            if P is not None:
                out["witness"]["labels"] = [str(P.labels[lo]), str(P.labels[hi])]
        return out


_SUPPORTED = {VariantTag.MONOTONE, VariantTag.BOXPLUS, VariantTag.MEET_VARIANT,
              VariantTag.JOIN_VARIANT, VariantTag.LATTICE_VARIANT}


def induces_map(phi: PosetMap, variant: VariantTag | str = VariantTag.BOXPLUS) -> InducesResult:
    """Whether phi carries every Boolean interval of its source to a cell of the
    target in the way the variant requires; the first offending interval otherwise."""
    variant = VariantTag(variant)
    if variant not in _SUPPORTED:
        raise ValueError(f"induces_map does not support {variant}")
    P, Q = phi.source, phi.target
    bad = P.is_monotone(phi.images, Q)
    if bad is not None:
        i, j = bad
        raise NotMonotone(f"{P.labels[i]} <= {P.labels[j]} but images are not ordered",
                          witness={"x": str(P.labels[i]), "y": str(P.labels[j])})
    checked = 0
    for x, z, _ in boolean_intervals(P):
        checked += 1
        a, b = phi(x), phi(z)
        target = cell_coordinates(Q, a, b)
        if target is None:
            return InducesResult(False, checked, (x, z), "image endpoints do not span a Boolean interval")
        if variant is VariantTag.MONOTONE:
            continue
        image = {phi(y) for y in P.interval(x, z)}
        if image != set(Q.interval(a, b)):
            return InducesResult(False, checked, (x, z), "image is not all of the interval")
        if variant is VariantTag.BOXPLUS:
            continue
        atoms, code = cell_coordinates(P, x, z)
        by_code = {v: y for y, v in code.items()}
        t_atoms, t_code = target
        raw = RawMap(len(atoms), len(t_atoms), tuple(t_code[phi(by_code[c])] for c in range(1 << len(atoms))))
        if variant not in classify(raw):
            return InducesResult(False, checked, (x, z), f"corestriction is not {variant.value}")
    return InducesResult(True, checked)


# -- subdivision --------------------------------------------------------------------------

def _guard(n: int, k: int) -> None:
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if n > SUBDIVISION_MAX_N or k > SUBDIVISION_MAX_K:
        raise SizeExceeded(f"subdivision limited to n <= {SUBDIVISION_MAX_N}, k <= {SUBDIVISION_MAX_K}",
                           witness={"n": n, "k": k})


def subdivide_representable(n: int, k: int) -> CubeComplex:
    """Boolean complex of ([1]^n)^[k], the (k+1)-fold subdivision of the n-cube."""
    _guard(n, k)
    return boolean_complex(function_poset(FinPoset.boolean_lattice(n), k))


def subdivision_cell_count(n: int, k: int, d: int) -> int:
    return comb(n, d) * (k + 1) ** d * (k + 2) ** (n - d)


def counit_vertex_map(n: int, k: int = 2) -> list[Point]:
    """Vertex part of the counit: a chain f_0 <= ... <= f_k goes to f_1."""
    _guard(n, k)
    poset = function_poset(FinPoset.boolean_lattice(n), k)
    mid = 1 if k >= 1 else 0
    return [Point(n, chain[mid]) for chain in poset.tuples]


@dataclass(frozen=True)
class SubdivisionMap:
    map: PosetMap
    valid: InducesResult

    def to_json(self) -> dict:
        return {"images": list(self.map.images), "valid": self.valid.to_json(self.map.source)}


def induced_subdivision_map(phi: CubeMorphism, k: int, require_boxplus: bool = True) -> SubdivisionMap:
    """phi^[k]: f -> phi ∘ f between function posets, with its interval check."""
    if require_boxplus and not is_interval_preserving(phi):
        raise NotBoxplus("subdivision maps are only induced by interval-preserving maps",
                         witness={"map": phi.to_json()})
    _guard(max(phi.m, phi.n), k)
    P = function_poset(FinPoset.boolean_lattice(phi.m), k)
    Q = function_poset(FinPoset.boolean_lattice(phi.n), k)
    pos = {t: i for i, t in enumerate(Q.tuples)}
    table = phi.table
    images = tuple(pos[tuple(table[p] for p in chain)] for chain in P.tuples)
    pm = PosetMap(P, Q, images)
    return SubdivisionMap(pm, induces_map(pm, VariantTag.BOXPLUS))


# -- triangulation ---------------------------------------------------------------------------

@dataclass
class SimplicialComplex:
    vertices: tuple[int, ...]
    simplices: dict[int, list[tuple[int, ...]]]
    labels: tuple[str, ...] = field(default=())

    @property
    def dim(self) -> int:
        return max((d for d, s in self.simplices.items() if s), default=-1)

    def counts(self) -> list[int]:
        return [len(self.simplices.get(d, [])) for d in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts()))

    def to_json(self) -> dict:
        out = {"vertices": list(self.vertices),
               "simplices": {str(d): [list(s) for s in self.simplices[d]] for d in sorted(self.simplices)}}
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialComplex":
        simplices = {int(d): sorted(tuple(sorted(s)) for s in ss) for d, ss in data["simplices"].items()}
        return cls(tuple(data["vertices"]), simplices, tuple(data.get("labels", ())))


def _chains_between(P: FinPoset, lo: int, hi: int) -> Iterable[tuple[int, ...]]:
    """Strict chains lo = y_0 < ... < y_d = hi."""
    if lo == hi:
        yield (lo,)
        return
    for y in sorted(P.up[lo] & P.down[hi]):
        if y == lo:
            continue
        for rest in _chains_between(P, y, hi):
            yield (lo,) + rest


def triangulate(C: CubeComplex) -> SimplicialComplex:
    """Order-complex style triangulation: chains lying in a single cell."""
    P = C.base
    simplices: dict[int, set[tuple[int, ...]]] = {}
    for lo, hi, _ in C.cells:
        for chain in _chains_between(P, lo, hi):
            simplices.setdefault(len(chain) - 1, set()).add(tuple(sorted(chain)))
    ordered = {d: sorted(s) for d, s in sorted(simplices.items())}
    return SimplicialComplex(C.vertices, ordered, tuple(str(l) for l in P.labels))


# -- semilattices and curvature -------------------------------------------------------------

def _antichains(P: FinPoset) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    n = len(P)

    def extend(chain: tuple[int, ...], start: int):
        for j in range(start, n):
            if all(not P.leq(i, j) and not P.leq(j, i) for i in chain):
                new = chain + (j,)
                out.append(new)
                extend(new, j + 1)

    extend((), 0)
    out.sort(key=lambda a: (len(a), a))
    return out


@dataclass(frozen=True)
class DistributivityResult:
    ok: bool
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"distributive": self.ok}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def is_distributive_meet_semilattice(P: FinPoset) -> DistributivityResult:
    """Meets exist and (x_1 ∨ ... ∨ x_n) ∧ y = (x_1∧y) ∨ ... ∨ (x_n∧y) whenever the
    left-hand supremum exists. It suffices to let {x_i} range over antichains."""
    n = len(P)
    label = lambda i: str(P.labels[i])
    for i in range(n):
        for j in range(i + 1, n):
            if P.meet(i, j) is None:
                raise NotMeetSemilattice(f"{label(i)} and {label(j)} have no meet",
                                         witness={"x": label(i), "y": label(j)})
    for xs in _antichains(P):
        if len(xs) < 2:
            continue
        s = P.supremum(xs)
        if s is None:
            continue
        for y in range(n):
            lhs = P.meet(s, y)
            rhs = P.supremum(P.meet(x, y) for x in xs)
            if rhs != lhs:
                return DistributivityResult(False, {
                    "xs": [label(x) for x in xs], "y": label(y),
                    "sup_then_meet": label(lhs),
                    "meets_then_sup": None if rhs is None else label(rhs)})
    return DistributivityResult(True)


@dataclass(frozen=True)
class CurvatureResult:
    ok: bool
    checked: int
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {"nonpositively_curved": self.ok, "vertices_checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def vertex_link(C: CubeComplex, v: int) -> tuple[list[int], set[frozenset[int]]]:
    """Link of v: vertices are the edges at v, simplices come from the cells at v."""
    P = C.base
    edges = [k for k, (lo, hi, r) in enumerate(C.cells) if r == 1 and v in (lo, hi)]
    simplices: set[frozenset[int]] = set()
    for lo, hi, r in C.cells:
        if r >= 1 and P.leq(lo, v) and P.leq(v, hi):
            inside = frozenset(e for e in edges if P.leq(lo, C.cells[e][0]) and P.leq(C.cells[e][1], hi))
            simplices.add(inside)
    return edges, simplices


def is_nonpositively_curved(C: CubeComplex) -> CurvatureResult:
    """Gromov's flag condition on every vertex link."""
    checked = 0
    for v in sorted(C.vertices):
        checked += 1
        edges, simplices = vertex_link(C, v)
        G = nx.Graph()
        G.add_nodes_from(edges)
        G.add_edges_from(tuple(s) for s in simplices if len(s) == 2)
        failing = []
        size = None
        for clique in nx.enumerate_all_cliques(G):
            if size is not None and len(clique) > size:
                break
            if len(clique) >= 3 and frozenset(clique) not in simplices:
                size = len(clique)
                failing.append(tuple(sorted(clique)))
        if failing:
            bad = min(failing)
            labels = C.base.labels
            return CurvatureResult(False, checked, {
                "vertex": str(labels[v]),
                "edges": [[str(labels[C.cells[e][0]]), str(labels[C.cells[e][1]])] for e in bad]})
    return CurvatureResult(True, checked)


@dataclass(frozen=True)
class Cat0Report:
    nonpositively_curved: CurvatureResult
    reduced_h0_vanishes: bool
    reduced_h1_vanishes: bool

    def to_json(self) -> dict:
        return {"flag_links": self.nonpositively_curved.to_json(),
                "reduced_H0_vanishes": self.reduced_h0_vanishes,
                "reduced_H1_vanishes": self.reduced_h1_vanishes,
                "simple_connectivity": "not checked"}


def cat0_report(C: CubeComplex) -> Cat0Report:
    """Flag links plus vanishing of reduced H0 and H1; three separate verdicts."""
    from .homology import boundary_matrices, homology

    groups = homology(boundary_matrices(triangulate(C)), reduced=True)
    zero = lambda d: d >= len(groups) or groups[d].is_zero()
    return Cat0Report(is_nonpositively_curved(C), zero(0), zero(1))
