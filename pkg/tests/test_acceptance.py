"""Acceptance criteria 1-10, each run at its stated scope, tolerance and time limit.

Every criterion prints one PASS/FAIL line (visible even without ``-s``).
"""
from __future__ import annotations

import itertools
import random
import time
from math import comb

import pytest

from cubecat.boolfn import monotone_functions
from cubecat.complex import (
    boolean_complex,
    counit_vertex_map,
    induced_subdivision_map,
    is_nonpositively_curved,
    subdivide_representable,
    triangulate,
    truncate,
)
from cubecat.homology import boundary_matrices, homology
from cubecat.morphism import (
    CubeMorphism,
    VariantTag as T,
    count_hom,
    enumerate_hom,
    is_interval_preserving,
    oracle_interval_check,
)
from cubecat.normal_form import coset, decompose, is_decomposing_permutation, recompose
from cubecat.operad import enumerate_fdl, substitute
from cubecat.order import FinPoset, Permutation
from cubecat.saturation import (
    generating_set,
    monotone_surjections_to_point,
    negative_control_family,
    saturate,
    variant_family,
    verify_reedy_ez,
)

from oracles import all_monotone_tables


@pytest.fixture
def verdict(capsys):
    def report(number, ok, started, limit, detail):
        elapsed = time.perf_counter() - started
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {detail} ({elapsed:.1f}s, limit {limit}s)")
        assert ok, detail
        assert in_time, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"
    return report


def test_criterion_01_dedekind_numbers(verdict):
    start = time.perf_counter()
    counts = [count_hom(n, 1, T.MONOTONE) for n in range(5)]
    # independent route for n <= 3: filter all Boolean functions for monotonicity
    brute = [len(all_monotone_tables(n, 1)) for n in range(4)]
    stretch = count_hom(5, 1, T.MONOTONE)
    ok = counts == [2, 3, 6, 20, 168] and brute == counts[:4] and stretch == 7581
    verdict(1, ok, start, 10, f"Dedekind counts {counts}, n=5 gives {stretch}")


def test_criterion_02_membership_oracle(verdict):
    start = time.perf_counter()
    total = bad = 0
    for m in range(4):
        for n in range(4):
            for phi in enumerate_hom(m, n, T.MONOTONE):
                total += 1
                bad += is_interval_preserving(phi) != oracle_interval_check(phi)
    full_33 = count_hom(3, 3, T.MONOTONE)
    rng = random.Random(2024)
    fns = monotone_functions(4)
    for _ in range(500):
        n = rng.randint(1, 4)
        phi = CubeMorphism(4, n, tuple(rng.choice(fns) for _ in range(n)))
        total += 1
        bad += is_interval_preserving(phi) != oracle_interval_check(phi)
    verdict(2, bad == 0 and full_33 == 8000, start, 120,
            f"{total} maps compared ({full_33} maps [1]^3->[1]^3 plus 500 random at m=4), {bad} disagreements")


def test_criterion_03_decomposition(verdict):
    start = time.perf_counter()
    total = bad = searched = 0
    for m in range(5):
        for n in range(4):
            for phi in enumerate_hom(m, n, T.BOXPLUS):
                total += 1
                d = decompose(phi)
                full = all(f.support == (1 << f.arity) - 1 for f in d.factors)
                if not full or recompose(d) != phi:
                    bad += 1
                    continue
                if m <= 3:
                    searched += 1
                    valid = {h for h in Permutation.all(m) if is_decomposing_permutation(phi, h, d.blocks)}
                    bad += valid != set(coset(d))
    verdict(3, bad == 0, start, 120,
            f"{total} interval-preserving maps round-tripped, {searched} coset searches, {bad} failures")


CORNERS = [(["tau", "gamma-"], T.MEET_VARIANT), (["tau", "gamma+"], T.JOIN_VARIANT),
           (["tau"], T.LATTICE_VARIANT), ([], T.DELTA1_STAR)]


def test_criterion_04_variant_generation(verdict):
    start = time.perf_counter()
    mismatches = []
    for names, tag in CORNERS:
        sat = saturate(generating_set(names), 3)
        fam = variant_family(tag, 3)
        mismatches += [(tag.value, key) for key, homs in fam.items() if sat.hom(*key) != homs]
    verdict(4, not mismatches, start, 60,
            f"four saturations equal their variant hom-sets for all (m,n) <= 3, mismatches {mismatches}")


def test_criterion_05_generation(verdict):
    start = time.perf_counter()
    sat = saturate(generating_set(["tau"]) + monotone_surjections_to_point(3), 3)
    fam = variant_family(T.BOXPLUS, 3)
    missing = sum(len(homs - sat.hom(*key)) for key, homs in fam.items())
    extra = sum(len(sat.hom(*key) - homs) for key, homs in fam.items())
    total = sum(len(h) for h in fam.values())
    verdict(5, missing == 0 and extra == 0, start, 60,
            f"{total} interval-preserving maps within dimension 3, {missing} not generated, {extra} extra")


def test_criterion_06_reedy_ez(verdict):
    start = time.perf_counter()
    report = verify_reedy_ez(3)
    fam = negative_control_family(3)
    control = verify_reedy_ez(3, fam.tables, "negative-control")
    crossed = CubeMorphism.from_sets(2, [[[1, 2]], [[1], [2]]]).to_json()
    caught = any(w.get("map") == crossed for w in control.check("a").failures)
    ok = report.passed and not control.passed and caught
    failing = [c.label for c in report.checks if not c.passed]
    verdict(6, ok, start, 120,
            f"Reedy/EZ checks {[c.label for c in report.checks]} at maxdim 3, failing {failing}; "
            f"negative control flags (x∧y, x∨y) in factorization: {caught}")


def test_criterion_07_subdivision(verdict):
    start = time.perf_counter()
    counts_ok = all(subdivide_representable(n, 2).counts() == [comb(n, d) * 3 ** d * 4 ** (n - d) for d in range(n + 1)]
                    for n in range(4))
    eps = counit_vertex_map(2)
    homs = enumerate_hom(2, 2, T.BOXPLUS)
    natural = 0
    for phi in homs:
        sub = induced_subdivision_map(phi, 2)
        natural += bool(sub.valid) and all(eps[sub.map(v)].bits == phi(eps[v].bits) for v in range(len(eps)))
    verdict(7, counts_ok and len(homs) == 22 and natural == 22, start, 30,
            f"sd3 cell counts match for n <= 3: {counts_ok}; counit natural for {natural}/{len(homs)} maps")


def test_criterion_08_homology(verdict):
    start = time.perf_counter()
    acyclic = all(all(g.is_zero() for g in homology(boundary_matrices(triangulate(subdivide_representable(n, 2))),
                                                   reduced=True))
                  for n in range(4))
    sphere = homology(boundary_matrices(triangulate(truncate(boolean_complex(FinPoset.boolean_lattice(3)), 2))))
    shape = [(g.betti, g.torsion) for g in sphere]
    verdict(8, acyclic and shape == [(1, ()), (0, ()), (1, ())], start, 60,
            f"subdivided cubes acyclic: {acyclic}; boundary of the 3-cube has (betti, torsion) {shape}")


def test_criterion_09_curvature(verdict):
    start = time.perf_counter()
    chain = FinPoset.chain
    lattices = [FinPoset.boolean_lattice(n) for n in range(1, 4)] + [chain(4)]
    lattices += [FinPoset.product(chain(a), chain(b), chain(c))
                 for a, b, c in itertools.product(range(1, 4), repeat=3)]
    flag = all(is_nonpositively_curved(boolean_complex(L)) for L in lattices)
    res = is_nonpositively_curved(boolean_complex(FinPoset.boolean_lattice(3).without([7])))
    hollow = {"vertex": "000", "edges": [["000", "100"], ["000", "010"], ["000", "001"]]}
    ok = flag and not res and res.witness == hollow
    verdict(9, ok, start, 30, f"{len(lattices)} distributive lattices flag: {flag}; punctured cube witness {res.witness}")


def _substitution_by_table(outer, inners):
    total = sum(f.arity for f in inners)
    out = []
    for x in range(1 << total):
        args, off = 0, 0
        for i, f in enumerate(inners):
            args |= f(x >> off & ((1 << f.arity) - 1)) << i
            off += f.arity
        out.append(outer(args))
    return tuple(out)


def test_criterion_10_operad(verdict):
    start = time.perf_counter()
    total = bad = 0
    for k in range(3):
        for outer in enumerate_fdl(k):
            for sizes in itertools.product(range(3), repeat=k):
                for inners in itertools.product(*(enumerate_fdl(s) for s in sizes)):
                    total += 1
                    res = substitute(outer, list(inners))
                    bad += tuple(res(x) for x in range(1 << res.arity)) != _substitution_by_table(outer, inners)
    rng = random.Random(10)
    done = 0
    while done < 1000:
        k = rng.randint(2, 4)
        outer = rng.choice(enumerate_fdl(k))
        inners = [rng.choice(enumerate_fdl(rng.randint(1, 3))) for _ in range(k)]
        if sum(f.arity for f in inners) > 9 or (k <= 2 and all(f.arity <= 2 for f in inners)):
            continue
        res = substitute(outer, inners)
        bad += tuple(res(x) for x in range(1 << res.arity)) != _substitution_by_table(outer, inners)
        done += 1
        total += 1
    sizes = [len(enumerate_fdl(n, with_bounds=False)) for n in range(5)]
    ok = bad == 0 and sizes == [d - 2 for d in (2, 3, 6, 20, 168)]
    verdict(10, ok, start, 60, f"{total} substitutions checked by truth tables, {bad} wrong; bound-free sizes {sizes}")
