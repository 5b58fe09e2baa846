from __future__ import annotations

import itertools

import pytest

from cubecat.errors import NotBoxplus, NotMeetSemilattice, NotMonotone, SizeExceeded
from cubecat.morphism import VariantTag as T, classify, enumerate_hom, named_generator
from cubecat.complex import (
    CubeComplex,
    PosetMap,
    SimplicialComplex,
    boolean_complex,
    cat0_report,
    counit_vertex_map,
    induced_subdivision_map,
    induces_map,
    is_distributive_meet_semilattice,
    is_nonpositively_curved,
    subdivide_representable,
    subdivision_cell_count,
    triangulate,
    truncate,
)
from cubecat.order import FinPoset

from oracles import chains_in_cells

chain = FinPoset.chain
cube = FinPoset.boolean_lattice
PUNCTURED = cube(3).without([7])
M3 = FinPoset.from_covers(["0", "a", "b", "c", "1"], [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
N5 = FinPoset.from_covers(["0", "a", "b", "c", "1"], [(0, 1), (1, 2), (0, 3), (2, 4), (3, 4)])


def test_boolean_complex_examples():
    assert boolean_complex(cube(2)).counts() == [4, 4, 1]
    assert boolean_complex(chain(4)).counts() == [4, 3]
    assert boolean_complex(PUNCTURED).counts() == [7, 9, 3]
    assert boolean_complex(cube(0)).counts() == [1]


@pytest.mark.parametrize("P", [cube(3), PUNCTURED, chain(5), M3, N5,
                               FinPoset.product(chain(3), chain(3))], ids=str)
def test_facet_incidence(P):
    C = boolean_complex(P)
    for cell, facets in zip(C.cells, C.incidence):
        lo, hi, r = cell
        assert len(facets) == 2 * r
        assert len({f.cell for f in facets}) == 2 * r
        # brute force: codimension-1 cells inside the interval
        inside = {k for k, (a, b, s) in enumerate(C.cells)
                  if s == r - 1 and P.leq(lo, a) and P.leq(b, hi)}
        assert {f.cell for f in facets} == inside
        for f in facets:
            a, b, _ = C.cells[f.cell]
            assert (a == lo) == (f.sign == "-") and (b == hi) == (f.sign == "+")


def test_truncate_examples():
    C = boolean_complex(cube(3))
    assert sum(truncate(C, 2).counts()) == 26
    assert truncate(C, 0).counts() == [8]
    assert truncate(C, 3).cells == C.cells


def test_complex_json_round_trip():
    C = truncate(boolean_complex(cube(3)), 2)
    D = CubeComplex.from_json(C.to_json())
    assert D.cells == C.cells
    assert CubeComplex.from_json({"poset": cube(2).to_json()}).counts() == [4, 4, 1]


# -- induced maps ----------------------------------------------------------------------

def test_induces_map_examples():
    ident = PosetMap(cube(2), cube(2), tuple(range(4)))
    for tag in (T.MONOTONE, T.BOXPLUS, T.MEET_VARIANT, T.JOIN_VARIANT, T.LATTICE_VARIANT):
        assert induces_map(ident, tag)
    staircase = PosetMap(chain(3), cube(2), (0, 0b10, 0b11))
    assert induces_map(staircase, T.BOXPLUS)
    diag = PosetMap.from_morphism(named_generator("diag", 1, 1))
    res = induces_map(diag, T.BOXPLUS)
    assert not res and res.witness == (0, 1)
    assert induces_map(diag, T.MONOTONE)
    with pytest.raises(NotMonotone):
        induces_map(PosetMap(chain(2), chain(2), (1, 0)))
    with pytest.raises(ValueError):
        induces_map(ident, T.DELTA1_STAR)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(3) for n in range(3)])
def test_induces_map_agrees_with_classification_on_cubes(m, n):
    for phi in enumerate_hom(m, n):
        pm = PosetMap.from_morphism(phi)
        for tag in (T.BOXPLUS, T.MEET_VARIANT, T.JOIN_VARIANT, T.LATTICE_VARIANT):
            # restrictions of a variant map to subcubes stay in the variant
            assert bool(induces_map(pm, tag)) == (tag in classify(phi))


# -- subdivision ----------------------------------------------------------------------

def test_subdivision_examples():
    assert subdivide_representable(1, 2).counts() == [4, 3]
    assert subdivide_representable(2, 2).counts() == [16, 24, 9]
    assert subdivide_representable(0, 3).counts() == [1]
    with pytest.raises(SizeExceeded):
        subdivide_representable(5, 1)
    with pytest.raises(SizeExceeded):
        subdivide_representable(1, 4)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(4) for k in range(4)])
def test_subdivision_cell_count_formula(n, k):
    counts = subdivide_representable(n, k).counts()
    assert counts == [subdivision_cell_count(n, k, d) for d in range(n + 1)]


def test_counit_examples():
    eps = counit_vertex_map(1)
    assert [str(p) for p in eps] == ["0", "0", "1", "1"]
    assert len(counit_vertex_map(0)) == 1
    from cubecat.order import function_poset
    P = function_poset(cube(2), 2)
    v = P.tuples.index((0b00, 0b10, 0b11))
    assert str(counit_vertex_map(2)[v]) == "01"


def test_counit_is_natural_on_vertices():
    eps = counit_vertex_map(2)
    for phi in enumerate_hom(2, 2, T.BOXPLUS):
        sub = induced_subdivision_map(phi, 2)
        assert sub.valid
        for v in range(len(eps)):
            assert eps[sub.map(v)].bits == phi(eps[v].bits)


def test_induced_subdivision_examples():
    tau = induced_subdivision_map(named_generator("tau", 1, 1), 2)
    assert tau.valid and sorted(tau.map.images) == list(range(16))
    assert induced_subdivision_map(named_generator("gamma-", 1, 1), 2).valid
    diag = named_generator("diag", 1, 1)
    assert not induced_subdivision_map(diag, 2, require_boxplus=False).valid
    with pytest.raises(NotBoxplus):
        induced_subdivision_map(diag, 2)


# -- triangulation ----------------------------------------------------------------------

def test_triangulation_examples():
    assert triangulate(boolean_complex(cube(2))).counts() == [4, 5, 2]
    sphere = triangulate(truncate(boolean_complex(cube(3)), 2))
    assert sphere.euler_characteristic() == 2
    # on a chain the cells are the covering edges
    assert triangulate(boolean_complex(chain(4))).counts() == [4, 3]


COMPLEXES = {
    "cube3": boolean_complex(cube(3)),
    "sphere": truncate(boolean_complex(cube(3)), 2),
    "punctured": boolean_complex(PUNCTURED),
    "sd3-2": subdivide_representable(2, 2),
    "3x3": boolean_complex(FinPoset.product(chain(3), chain(3))),
    "N5": boolean_complex(N5),
}


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_triangulation_matches_chain_oracle(name):
    C = COMPLEXES[name]
    P = C.base
    T_ = triangulate(C)
    mine = {s for ss in T_.simplices.values() for s in ss}
    assert mine == chains_in_cells([(lo, hi) for lo, hi, _ in C.cells], P.leq, range(len(P)))
    for s in mine:
        for r in range(1, len(s)):
            assert all(face in mine for face in itertools.combinations(s, r))
    assert T_.euler_characteristic() == C.euler_characteristic()


def test_simplicial_json_round_trip():
    S = triangulate(boolean_complex(cube(2)))
    R = SimplicialComplex.from_json(S.to_json())
    assert R.simplices == S.simplices and R.vertices == S.vertices


# -- distributivity and curvature -----------------------------------------------------------

def _brute_distributive(P):
    n = len(P)
    for r in range(2, n + 1):
        for xs in itertools.combinations(range(n), r):
            s = P.supremum(xs)
            if s is None:
                continue
            for y in range(n):
                if P.supremum(P.meet(x, y) for x in xs) != P.meet(s, y):
                    return False
    return True


def test_distributivity_examples():
    assert is_distributive_meet_semilattice(cube(3))
    res = is_distributive_meet_semilattice(M3)
    assert not res and res.witness["xs"] == ["a", "b"] and res.witness["y"] == "c"
    assert is_distributive_meet_semilattice(PUNCTURED)
    assert not is_distributive_meet_semilattice(N5)
    vee = FinPoset.from_covers(["a", "b"], [])
    with pytest.raises(NotMeetSemilattice):
        is_distributive_meet_semilattice(vee)


@pytest.mark.parametrize("P", [cube(2), cube(3), PUNCTURED, M3, N5, chain(4),
                               FinPoset.product(chain(3), chain(2)), cube(3).without([7, 6])],
                         ids=str)
def test_distributivity_matches_subset_oracle(P):
    assert bool(is_distributive_meet_semilattice(P)) == _brute_distributive(P)


def _brute_flag(C):
    """Flag test from first principles: k edges at v pairwise spanning squares
    must span a k-cube containing v."""
    P = C.base
    for v in C.vertices:
        edges = [(lo, hi) for lo, hi, r in C.cells if r == 1 and v in (lo, hi)]
        cells_at_v = [(lo, hi) for lo, hi, r in C.cells if P.leq(lo, v) and P.leq(v, hi)]

        def spanned(es):
            return any(all(P.leq(lo, a) and P.leq(b, hi) for a, b in es)
                       and len([1 for a, b, r in C.cells if r == 1 and P.leq(lo, a) and P.leq(b, hi)
                                and v in (a, b)]) == len(es)
                       for lo, hi in cells_at_v)

        for k in range(3, len(edges) + 1):
            for es in itertools.combinations(edges, k):
                if all(spanned(pair) for pair in itertools.combinations(es, 2)) and not spanned(es):
                    return False
    return True


def test_curvature_examples():
    assert is_nonpositively_curved(boolean_complex(cube(3)))
    res = is_nonpositively_curved(boolean_complex(PUNCTURED))
    assert not res
    assert res.witness == {"vertex": "000", "edges": [["000", "100"], ["000", "010"], ["000", "001"]]}
    assert is_nonpositively_curved(boolean_complex(cube(0)))


@pytest.mark.parametrize("a,b,c", [(a, b, c) for a in range(1, 4) for b in range(1, 4) for c in range(1, 4)])
def test_distributive_lattices_are_flag(a, b, c):
    L = FinPoset.product(chain(a), chain(b), chain(c))
    assert is_distributive_meet_semilattice(L)
    assert is_nonpositively_curved(boolean_complex(L))


@pytest.mark.parametrize("name", sorted(COMPLEXES))
def test_flag_check_matches_oracle(name):
    C = COMPLEXES[name]
    assert bool(is_nonpositively_curved(C)) == _brute_flag(C)


def test_cat0_report_has_three_verdicts():
    rep = cat0_report(boolean_complex(cube(3)))
    assert rep.nonpositively_curved and rep.reduced_h0_vanishes and rep.reduced_h1_vanishes
    rep = cat0_report(boolean_complex(PUNCTURED))
    assert not rep.nonpositively_curved and rep.reduced_h0_vanishes and rep.reduced_h1_vanishes
    data = cat0_report(truncate(boolean_complex(cube(2)), 1)).to_json()
    assert data["reduced_H1_vanishes"] is False and data["simple_connectivity"] == "not checked"
