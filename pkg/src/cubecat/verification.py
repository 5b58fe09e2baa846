"""Self-check suites behind ``cubecat verify``.

Each suite cross-checks a fast decision procedure against a brute-force
route at small dimension and returns printable PASS/FAIL lines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .complex import (
    boolean_complex,
    counit_vertex_map,
    induced_subdivision_map,
    is_distributive_meet_semilattice,
    is_nonpositively_curved,
    subdivide_representable,
    subdivision_cell_count,
    triangulate,
    truncate,
)
from .errors import NotSurjective
from .homology import boundary_matrices, homology
from .morphism import (
    VariantTag,
    compose,
    enumerate_hom,
    identity,
    is_interval_preserving,
    oracle_interval_check,
)
from .normal_form import construct_section, decompose, recompose, sections_of
from .operad import OperadElement, enumerate_fdl, substitute
from .order import FinPoset
from .saturation import generating_set, monotone_surjections_to_point, saturate, variant_family, verify_reedy_ez


@dataclass
class SuiteResult:
    name: str
    lines: list[str] = field(default_factory=list)
    passed: bool = True

    def check(self, ok: bool, text: str) -> None:
        self.lines.append(("PASS " if ok else "FAIL ") + text)
        self.passed = self.passed and ok

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "lines": self.lines}


def suite_oracle(maxdim: int) -> SuiteResult:
    r = SuiteResult("oracle")
    total = bad = 0
    for m in range(maxdim + 1):
        for n in range(maxdim + 1):
            for phi in enumerate_hom(m, n, VariantTag.MONOTONE):
                total += 1
                bad += is_interval_preserving(phi) != oracle_interval_check(phi)
    r.check(bad == 0, f"support test agrees with interval oracle on {total} monotone maps (m,n <= {maxdim}), {bad} disagreements")
    return r


def suite_decompose(maxdim: int) -> SuiteResult:
    r = SuiteResult("decompose")
    total = bad = 0
    for m in range(maxdim + 1):
        for n in range(maxdim + 1):
            for phi in enumerate_hom(m, n, VariantTag.BOXPLUS):
                total += 1
                d = decompose(phi)
                full = all(f.support == (1 << f.arity) - 1 for f in d.factors)
                bad += not (full and recompose(d) == phi)
    r.check(bad == 0, f"decompose/recompose round trip on {total} interval-preserving maps, {bad} failures")
    return r


def suite_sections(maxdim: int) -> SuiteResult:
    r = SuiteResult("sections")
    total = bad = 0
    for m in range(maxdim + 1):
        for n in range(m + 1):
            for pi in enumerate_hom(m, n, VariantTag.BOXPLUS):
                try:
                    s = construct_section(pi)
                except NotSurjective:
                    continue
                total += 1
                ok = compose(pi, s) == identity(n) and is_interval_preserving(s)
                if m <= 3:
                    ok = ok and s in sections_of(pi)
                bad += not ok
    r.check(bad == 0, f"constructed sections split {total} surjections, {bad} failures")
    return r


def suite_saturation(maxdim: int) -> SuiteResult:
    r = SuiteResult("saturation")
    cases = [(["tau", "gamma-"], VariantTag.MEET_VARIANT), (["tau", "gamma+"], VariantTag.JOIN_VARIANT),
             (["tau"], VariantTag.LATTICE_VARIANT), ([], VariantTag.DELTA1_STAR)]
    dims = range(maxdim + 1)
    for names, tag in cases:
        sat = saturate(generating_set(names), maxdim)
        fam = variant_family(tag, maxdim)
        ok = all(sat.hom(m, n) == fam[(m, n)] for m in dims for n in dims)
        label = "+".join(["delta1"] + names)
        r.check(ok, f"saturate({label}, {maxdim}) equals {tag.value} hom-sets")
    sat = saturate(generating_set(["tau"]) + monotone_surjections_to_point(maxdim), maxdim)
    fam = variant_family(VariantTag.BOXPLUS, maxdim)
    r.check(all(sat.hom(m, n) == fam[(m, n)] for m in dims for n in dims),
            f"delta1 + tau + surjections onto [1] generate all interval-preserving maps within {maxdim}")
    return r


def suite_reedy(maxdim: int) -> SuiteResult:
    r = SuiteResult("reedy")
    report = verify_reedy_ez(maxdim)
    r.lines.extend(report.lines())
    r.passed = report.passed
    return r


def suite_subdivision(maxdim: int) -> SuiteResult:
    r = SuiteResult("subdivision")
    for n in range(min(maxdim, 3) + 1):
        counts = subdivide_representable(n, 2).counts()
        expected = [subdivision_cell_count(n, 2, d) for d in range(n + 1)]
        r.check(counts == expected, f"sd3 of the {n}-cube has cell counts {counts}")
    eps = counit_vertex_map(2)
    bad = 0
    homs = enumerate_hom(2, 2, VariantTag.BOXPLUS)
    for phi in homs:
        sub = induced_subdivision_map(phi, 2)
        bad += not sub.valid
        bad += any(eps[sub.map(v)].bits != phi(eps[v].bits) for v in range(len(eps)))
    r.check(bad == 0, f"counit is natural on vertices for all {len(homs)} maps [1]^2 -> [1]^2")
    return r


def suite_homology(maxdim: int) -> SuiteResult:
    r = SuiteResult("homology")
    for n in range(min(maxdim, 3) + 1):
        groups = homology(boundary_matrices(triangulate(subdivide_representable(n, 2))), reduced=True)
        r.check(all(g.is_zero() for g in groups), f"reduced homology of sd3 of the {n}-cube vanishes")
    sphere = triangulate(truncate(boolean_complex(FinPoset.boolean_lattice(3)), 2))
    groups = homology(boundary_matrices(sphere))
    shape = [(g.betti, g.torsion) for g in groups]
    r.check(shape == [(1, ()), (0, ()), (1, ())], f"boundary of the 3-cube has homology {shape}")
    return r


def suite_curvature(maxdim: int) -> SuiteResult:
    r = SuiteResult("curvature")
    chain = FinPoset.chain
    lattices = {f"[1]^{n}": FinPoset.boolean_lattice(n) for n in range(1, 4)}
    lattices["4-chain"] = chain(4)
    lattices["3x3x3"] = FinPoset.product(chain(3), chain(3), chain(3))
    for name, L in lattices.items():
        r.check(bool(is_nonpositively_curved(boolean_complex(L))), f"flag links hold for {name}")
    punctured = FinPoset.boolean_lattice(3).without([7])
    res = is_nonpositively_curved(boolean_complex(punctured))
    r.check(not res.ok and res.witness["vertex"] == "000" and len(res.witness["edges"]) == 3,
            "[1]^3 minus top fails with a hollow triangle at the bottom")
    r.check(bool(is_distributive_meet_semilattice(punctured)),
            "[1]^3 minus top is a distributive meet-semilattice (reported, not reconciled)")
    return r


def suite_operad(maxdim: int) -> SuiteResult:
    r = SuiteResult("operad")
    dedekind = [2, 3, 6, 20, 168]
    for n in range(min(maxdim, 4) + 1):
        count = len(enumerate_fdl(n, with_bounds=False))
        r.check(count == dedekind[n] - 2, f"free distributive lattice on {n} generators has {count} elements")
    bad = total = 0
    for k in range(3):
        for outer in enumerate_fdl(k):
            for sizes in itertools.product(range(3), repeat=k):
                for inners in itertools.product(*(enumerate_fdl(s) for s in sizes)):
                    total += 1
                    bad += not _substitution_matches(outer, list(inners))
    r.check(bad == 0, f"substitution agrees with truth tables on {total} cases")
    return r


def _substitution_matches(outer: OperadElement, inners: list[OperadElement]) -> bool:
    res = substitute(outer, inners)
    total = sum(f.arity for f in inners)
    for x in range(1 << total):
        args, off = 0, 0
        for i, f in enumerate(inners):
            args |= f(x >> off & ((1 << f.arity) - 1)) << i
            off += f.arity
        if res(x) != outer(args):
            return False
    return True


SUITES: dict[str, Callable[[int], SuiteResult]] = {
    "oracle": suite_oracle,
    "decompose": suite_decompose,
    "sections": suite_sections,
    "saturation": suite_saturation,
    "reedy": suite_reedy,
    "subdivision": suite_subdivision,
    "homology": suite_homology,
    "curvature": suite_curvature,
    "operad": suite_operad,
}


def run_suites(name: str, maxdim: int) -> list[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    return [SUITES[n](maxdim) for n in names]
