"""Generator saturation and the Reedy / Eilenberg-Zilber axiom checks.

Hom-sets are handled as sets of truth tables: a map [1]^m -> [1]^n is the
tuple of its 2^m values. Composition and tensor are vectorized with numpy.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import ArityTooLarge, CubeCatError
from .morphism import (
    CubeMorphism,
    RawMap,
    VariantTag,
    enumerate_hom,
    from_table,
    is_interval_preserving,
    named_generator,
    permutation_morphism,
)
from .normal_form import construct_section
from .order import Permutation

log = logging.getLogger(__name__)

Table = tuple[int, ...]
Family = Mapping[tuple[int, int], frozenset]

SATURATE_MAX_DIM = 4
CHUNK_ENTRIES = 1 << 24


def as_table(phi: CubeMorphism | RawMap) -> Table:
    return tuple(int(v) for v in phi.table)


def table_to_map(m: int, n: int, table: Table) -> CubeMorphism | RawMap:
    raw = RawMap(m, n, table)
    try:
        return from_table(raw)
    except CubeCatError:
        return raw


def compose_tables(psi: Table, phi: Table) -> Table:
    return tuple(psi[x] for x in phi)


def _dim(size: int) -> int:
    return size.bit_length() - 1


@dataclass
class SaturationResult:
    maxdim: int
    tables: dict[tuple[int, int], frozenset]
    rounds: int = 0

    def hom(self, m: int, n: int) -> frozenset:
        return self.tables.get((m, n), frozenset())

    def morphisms(self, m: int, n: int) -> list:
        maps = [table_to_map(m, n, t) for t in self.hom(m, n)]
        return sorted(maps, key=_map_sort_key)

    def counts(self) -> dict[tuple[int, int], int]:
        return {k: len(v) for k, v in sorted(self.tables.items())}

    def to_json(self, include_maps: bool = True) -> dict:
        homs = []
        for (m, n) in sorted(self.tables):
            entry = {"m": m, "n": n, "count": len(self.tables[(m, n)])}
            if include_maps:
                entry["maps"] = [f.to_json() for f in self.morphisms(m, n)]
            homs.append(entry)
        return {"maxdim": self.maxdim, "rounds": self.rounds, "homs": homs}


def _map_sort_key(f) -> tuple:
    if isinstance(f, CubeMorphism):
        return (0, f.key, ())
    return (1, (), f.table)


def _encode(rows: np.ndarray, n: int) -> np.ndarray:
    """Pack each table row (values < 2^n) into one uint64."""
    shifts = (np.arange(rows.shape[1], dtype=np.uint64) * np.uint64(n))
    return (rows.astype(np.uint64) << shifts).sum(axis=1, dtype=np.uint64)


def _decode(codes: np.ndarray, m: int, n: int) -> np.ndarray:
    shifts = (np.arange(1 << m, dtype=np.uint64) * np.uint64(n))
    mask = np.uint64((1 << n) - 1)
    return ((codes[:, None] >> shifts) & mask).astype(np.uint8)


class _Store:
    """Per hom-set: sorted uint64 codes of the known tables, plus decoded rows."""

    def __init__(self):
        self.codes: dict[tuple[int, int], np.ndarray] = {}
        self.rows: dict[tuple[int, int], np.ndarray] = {}

    def array(self, key) -> np.ndarray:
        arr = self.rows.get(key)
        if arr is None:
            arr = _decode(self.codes[key], *key)
            self.rows[key] = arr
        return arr

    def add(self, key, codes: np.ndarray) -> np.ndarray:
        codes = np.unique(codes)
        known = self.codes.get(key)
        if known is not None:
            codes = codes[~np.isin(codes, known, assume_unique=True)]
            if len(codes):
                self.codes[key] = np.union1d(known, codes)
        else:
            self.codes[key] = codes
        if len(codes):
            self.rows.pop(key, None)
        return codes

    def tables(self) -> dict[tuple[int, int], frozenset]:
        return {k: frozenset(tuple(int(v) for v in row) for row in self.array(k)) for k in self.codes}


def _compose_all(B: np.ndarray, A: np.ndarray, p: int) -> Iterable[np.ndarray]:
    """Codes of B ∘ A for every pair, in chunks over B."""
    if len(A) == 0 or len(B) == 0:
        return
    step = max(1, CHUNK_ENTRIES // max(1, A.size))
    for start in range(0, len(B), step):
        chunk = B[start:start + step]
        yield np.unique(_encode(chunk[:, A].reshape(-1, A.shape[1]), p))


def _tensor_all(F: np.ndarray, n1: int, G: np.ndarray, n: int) -> np.ndarray:
    a, w1 = F.shape
    b, w2 = G.shape
    out = F[:, None, None, :] | (G[None, :, :, None] << n1)
    return np.unique(_encode(out.reshape(a * b, w1 * w2), n))


def saturate(generators: Iterable[CubeMorphism | RawMap], maxdim: int) -> SaturationResult:
    """Least family of hom-sets within maxdim containing identities and the
    generators, closed under composition and under tensor when in range."""
    if maxdim > SATURATE_MAX_DIM:
        raise ArityTooLarge(f"saturation is limited to maxdim <= {SATURATE_MAX_DIM}")
    store = _Store()
    frontier: dict[tuple[int, int], np.ndarray] = {}

    def push(key, codes: np.ndarray):
        fresh = store.add(key, codes)
        if len(fresh):
            old = frontier.get(key)
            frontier[key] = fresh if old is None else np.union1d(old, fresh)

    def rows_to_codes(key, rows):
        return _encode(np.array(rows, dtype=np.uint8).reshape(len(rows), 1 << key[0]), key[1])

    for d in range(maxdim + 1):
        push((d, d), rows_to_codes((d, d), [tuple(range(1 << d))]))
    for gen in generators:
        if gen.m > maxdim or gen.n > maxdim:
            raise ArityTooLarge(f"generator [1]^{gen.m}->[1]^{gen.n} exceeds maxdim {maxdim}")
        key = (gen.m, gen.n)
        push(key, rows_to_codes(key, [as_table(gen)]))

    rounds = 0
    while frontier:
        rounds += 1
        current = {k: _decode(v, *k) for k, v in frontier.items()}
        frontier = {}
        keys = list(store.codes)
        found: dict[tuple[int, int], list[np.ndarray]] = {}
        for (m, n), A in current.items():
            for (n2, p) in keys:
                if n2 == n:
                    found.setdefault((m, p), []).extend(_compose_all(store.array((n, p)), A, p))
        for (n, p), B in current.items():
            for (m, n2) in keys:
                if n2 == n:
                    found.setdefault((m, p), []).extend(_compose_all(B, store.array((m, n)), p))
        for (m1, n1), F in current.items():
            for (m2, n2) in keys:
                if m1 + m2 > maxdim or n1 + n2 > maxdim:
                    continue
                G = store.array((m2, n2))
                found.setdefault((m1 + m2, n1 + n2), []).append(_tensor_all(F, n1, G, n1 + n2))
                found.setdefault((m2 + m1, n2 + n1), []).append(_tensor_all(G, n2, F, n1 + n2))
        for key, parts in sorted(found.items()):
            push(key, np.concatenate(parts))
        log.debug("saturation round %d: %s", rounds, {k: len(v) for k, v in frontier.items()})
    return SaturationResult(maxdim, store.tables(), rounds)


# -- standard generating sets --------------------------------------------------------

def delta1_generators() -> list[CubeMorphism]:
    return [named_generator(k, 1, 1) for k in ("sigma", "delta-", "delta+")]


def generating_set(names: Iterable[str]) -> list:
    """Δ₁ plus the named extra generators (in their unwhiskered form)."""
    return delta1_generators() + [named_generator(k, 1, 1) for k in names]


def monotone_surjections_to_point(maxdim: int) -> list[CubeMorphism]:
    out = []
    for k in range(maxdim + 1):
        out.extend(f for f in enumerate_hom(k, 1, VariantTag.MONOTONE) if f.coords[0].support)
    return out


def variant_family(tag: VariantTag | str, maxdim: int) -> dict[tuple[int, int], frozenset]:
    tag = VariantTag(tag)
    return {(m, n): frozenset(as_table(f) for f in enumerate_hom(m, n, tag))
            for m in range(maxdim + 1) for n in range(maxdim + 1)}


# -- Reedy / EZ verification ---------------------------------------------------------

@dataclass
class CheckResult:
    label: str
    description: str
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    informational: bool = False

    @property
    def witness(self) -> dict | None:
        return self.failures[0] if self.failures else None

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, witness: dict) -> None:
        self.failures.append(witness)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.informational:
            status = "INFO-" + status
        text = f"{status} ({self.label}) {self.description}: {self.checked} checked"
        if self.failures:
            text += f", {len(self.failures)} failures"
        if self.witness is not None:
            text += " witness " + json.dumps(self.witness, sort_keys=True, separators=(",", ":"))
        return text


@dataclass
class ReedyReport:
    maxdim: int
    family_name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def check(self, label: str) -> CheckResult:
        return next(c for c in self.checks if c.label == label)

    def lines(self) -> list[str]:
        head = f"reedy-ez family={self.family_name} maxdim={self.maxdim}"
        tail = "RESULT " + ("PASS" if self.passed else "FAIL")
        return [head] + [c.line() for c in self.checks] + [tail]

    def to_json(self) -> dict:
        return {"family": self.family_name, "maxdim": self.maxdim, "passed": self.passed,
                "checks": [{"check": c.label, "description": c.description, "checked": c.checked,
                            "passed": c.passed, "informational": c.informational,
                            "failures": len(c.failures),
                            **({"witness": c.witness} if c.witness is not None else {})}
                           for c in self.checks]}


def _map_json(m: int, n: int, t: Table) -> dict:
    return table_to_map(m, n, t).to_json()


def _permutation_tables(k: int) -> dict[Table, Permutation]:
    return {as_table(permutation_morphism(g)): g for g in Permutation.all(k)}


def verify_reedy_ez(maxdim: int, family: Family | None = None, family_name: str | None = None,
                    determinacy_bounds: tuple[int, int] = (3, 2)) -> ReedyReport:
    """Check the generalized Reedy and EZ axioms on a finite family of hom-sets.

    ``family`` defaults to all interval-preserving maps within ``maxdim``.
    Failures are recorded in the report, never raised.
    """
    if family is None:
        family = variant_family(VariantTag.BOXPLUS, maxdim)
        family_name = family_name or "BOXPLUS"
    family_name = family_name or "custom"
    dims = range(maxdim + 1)
    F = {(m, n): family.get((m, n), frozenset()) for m in dims for n in dims}
    perms = {k: _permutation_tables(k) for k in dims}
    report = ReedyReport(maxdim, family_name)

    def injective(t, n):
        return len(set(t)) == len(t)

    def surjective(t, n):
        return len(set(t)) == 1 << n

    # injections indexed by image
    by_image: dict[tuple[int, frozenset], list[tuple[int, Table]]] = {}
    for (k, n), homs in F.items():
        for t in homs:
            if injective(t, n):
                by_image.setdefault((n, frozenset(t)), []).append((k, t))

    # (a) factorization exists and is unique up to a permutation of the middle object
    a = CheckResult("a", "surjection-injection factorization exists, unique up to coordinate permutation")
    for (m, n), homs in sorted(F.items()):
        for phi in sorted(homs):
            a.checked += 1
            image = frozenset(phi)
            k = _dim(len(image))
            if len(image) != 1 << k:
                a.fail({"reason": "image size is not a power of two", "image_size": len(image),
                        "map": _map_json(m, n, phi)})
                continue
            facts = []
            for k2, inc in by_image.get((n, image), []):
                inverse = {y: x for x, y in enumerate(inc)}
                epi = tuple(inverse[y] for y in phi)
                if epi in F.get((m, k2), ()) and surjective(epi, k2):
                    facts.append((k2, epi, inc))
            if not facts:
                a.fail({"reason": "no factorization inside the family", "map": _map_json(m, n, phi)})
                continue
            k0, e0, i0 = facts[0]
            inv0 = {y: x for x, y in enumerate(i0)}
            for k1, e1, i1 in facts[1:]:
                theta = tuple(inv0[y] for y in i1)  # i1 = i0 ∘ theta
                if k1 != k0 or theta not in perms[k0] or compose_tables(theta, e1) != e0:
                    a.fail({"reason": "two factorizations not related by a coordinate permutation",
                            "map": _map_json(m, n, phi),
                            "injections": [_map_json(k0, n, i0), _map_json(k1, n, i1)]})
                    break
    report.checks.append(a)

    # (b) bijections are coordinate permutations
    b = CheckResult("b", "bijections are coordinate permutations")
    isos: dict[int, list[Table]] = {}
    for (m, n), homs in sorted(F.items()):
        for t in sorted(homs):
            if injective(t, n) and surjective(t, n):
                b.checked += 1
                isos.setdefault(n, []).append(t)
                if m != n or t not in perms[n]:
                    b.fail({"map": _map_json(m, n, t)})
    report.checks.append(b)

    # (c) degrees weakly decrease along surjections, increase along injections
    c = CheckResult("c", "degree decreases along surjections and increases along injections")
    for (m, n), homs in sorted(F.items()):
        for t in sorted(homs):
            if surjective(t, n):
                c.checked += 1
                if m < n:
                    c.fail({"map": _map_json(m, n, t)})
            if injective(t, n):
                c.checked += 1
                if m > n:
                    c.fail({"map": _map_json(m, n, t)})
    report.checks.append(c)

    # (d) an isomorphism fixing a surjection is the identity
    d = CheckResult("d", "isomorphism fixing a surjection is the identity")
    for (m, n), homs in sorted(F.items()):
        for zeta in sorted(homs):
            if not surjective(zeta, n):
                continue
            for gamma in isos.get(n, []):
                d.checked += 1
                if compose_tables(gamma, zeta) == zeta and gamma != tuple(range(1 << n)):
                    d.fail({"iso": _map_json(n, n, gamma), "surjection": _map_json(m, n, zeta)})
    report.checks.append(d)

    # (e) surjections split, with constructed sections verified
    e = CheckResult("e", "every surjection has a section in the family")
    for (m, n), homs in sorted(F.items()):
        ident = tuple(range(1 << n))
        for zeta in sorted(homs):
            if not surjective(zeta, n):
                continue
            e.checked += 1
            section = None
            pi = table_to_map(m, n, zeta)
            if isinstance(pi, CubeMorphism) and is_interval_preserving(pi):
                s = as_table(construct_section(pi))
                if compose_tables(zeta, s) == ident and s in F.get((n, m), ()):
                    section = s
            if section is None:
                section = next((s for s in sorted(F.get((n, m), ())) if compose_tables(zeta, s) == ident), None)
            if section is None:
                e.fail({"surjection": _map_json(m, n, zeta)})
    report.checks.append(e)

    # (f) surjections are determined, up to permutation, by their sections
    max_m, max_n = determinacy_bounds
    strict = CheckResult("f", "equal section sets imply equal surjections up to coordinate permutation")
    iso_f = CheckResult("f-iso", "equal iso-section sets imply equal surjections up to coordinate permutation")
    for m in dims:
        for n in dims:
            if m > max_m or n > max_n:
                continue
            surj = sorted(t for t in F[(m, n)] if surjective(t, n))
            candidates = sorted(F.get((n, m), ()))
            ident = tuple(range(1 << n))
            groups = {"strict": {}, "iso": {}}
            for zeta in surj:
                comps = [(s, compose_tables(zeta, s)) for s in candidates]
                groups["strict"].setdefault(frozenset(s for s, c2 in comps if c2 == ident), []).append(zeta)
                groups["iso"].setdefault(frozenset(s for s, c2 in comps if c2 in perms[n]), []).append(zeta)
            for check, kind in ((strict, "strict"), (iso_f, "iso")):
                check.checked += len(surj)
                for group in groups[kind].values():
                    base = group[0]
                    for other in group[1:]:
                        if not any(compose_tables(p, base) == other for p in perms[n]):
                            check.fail({"surjections": [_map_json(m, n, base), _map_json(m, n, other)]})
    report.checks.append(strict)
    report.checks.append(iso_f)
    return report


def negative_control_family(maxdim: int = 3) -> SaturationResult:
    """Saturation of Δ₁ ∪ {τ, γ₋, γ₊, diag}.

    (x∧y, x∨y) needs four coordinates in between (two copies of each
    variable), so it first appears at maxdim 3 through composites such as
    (x, y) -> (x, y, x) -> ... ; at maxdim 2 it is missing.
    """
    return saturate(generating_set(["tau", "gamma-", "gamma+", "diag"]), maxdim)
