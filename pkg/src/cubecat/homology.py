"""Integer simplicial homology via Smith normal form.

Matrices are sparse (dict rows over Python ints, so no overflow). Unit pivots
are eliminated first, which is where boundary matrices spend almost all of
their rank; whatever is left goes through a dense Smith normal form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NotFaceClosed

SparseMatrix = dict[int, dict[int, int]]  # row -> {col: value}


def to_sparse(rows: Sequence[Sequence[int]]) -> SparseMatrix:
    return {i: {j: int(v) for j, v in enumerate(row) if v} for i, row in enumerate(rows) if any(row)}


def to_dense(M: SparseMatrix, shape: tuple[int, int]) -> list[list[int]]:
    out = [[0] * shape[1] for _ in range(shape[0])]
    for i, row in M.items():
        for j, v in row.items():
            out[i][j] = v
    return out


def sparse_product(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    out: SparseMatrix = {}
    for i, row in A.items():
        acc: dict[int, int] = {}
        for k, a in row.items():
            for j, b in B.get(k, {}).items():
                acc[j] = acc.get(j, 0) + a * b
        acc = {j: v for j, v in acc.items() if v}
        if acc:
            out[i] = acc
    return out


@dataclass(frozen=True)
class SNFResult:
    invariant_factors: tuple[int, ...]  # nonzero diagonal entries d1 | d2 | ...
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def diagonal(self) -> list[int]:
        k = min(self.shape)
        return list(self.invariant_factors) + [0] * (k - self.rank)

    def torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d > 1]


def _dense_snf(A: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith form of a dense matrix (destroys A)."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < rows and t < cols:
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                break
            # a remainder is smaller than the pivot: move it into place and repeat
            best = None
            for i in range(t + 1, rows):
                if A[i][t] and (best is None or abs(A[i][t]) < abs(best[2])):
                    best = (i, None, A[i][t])
            for j in range(t + 1, cols):
                if A[t][j] and (best is None or abs(A[t][j]) < abs(best[2])):
                    best = (None, j, A[t][j])
            i, j, _ = best
            if i is not None:
                A[t], A[i] = A[i], A[t]
            else:
                for row in A:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _fix_divisibility(diag: list[int]) -> list[int]:
    d = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = math.gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return d


def smith_normal_form(M: Sequence[Sequence[int]] | SparseMatrix, shape: tuple[int, int] | None = None) -> SNFResult:
    """Invariant factors and rank of an integer matrix (dense rows or sparse)."""
    if isinstance(M, Mapping):
        if shape is None:
            raise ValueError("sparse input needs a shape")
        rows = {i: dict(r) for i, r in M.items() if r}
    else:
        shape = (len(M), len(M[0]) if len(M) else 0)
        rows = to_sparse(M)
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        for i in sorted(rows, key=lambda i: len(rows[i])):
            for j, v in rows[i].items():
                if v in (1, -1) and (pivot is None or len(cols[j]) < len(cols[pivot[1]])):
                    pivot = (i, j)
            if pivot is not None:
                break
        if pivot is None:
            break
        r, c = pivot
        prow = rows.pop(r)
        p = prow[c]
        for j in prow:
            cols[j].discard(r)
        for i in list(cols.get(c, ())):
            row = rows[i]
            q = row[c] * p  # p = ±1, so row[c] / p == row[c] * p
            for j, v in prow.items():
                nv = row.get(j, 0) - q * v
                if nv:
                    if j not in row:
                        cols.setdefault(j, set()).add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        cols.pop(c, None)
        units += 1
    rest: list[int] = []
    if rows:
        rlist = sorted(rows)
        clist = sorted({j for r in rows.values() for j in r})
        cpos = {j: k for k, j in enumerate(clist)}
        dense = [[0] * len(clist) for _ in rlist]
        for a, i in enumerate(rlist):
            for j, v in rows[i].items():
                dense[a][cpos[j]] = v
        rest = _fix_divisibility(_dense_snf(dense))
    return SNFResult(tuple([1] * units + rest), shape)


# -- chain complexes -------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: tuple[int, ...]

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"degree": self.degree, "betti": self.betti, "torsion": list(self.torsion)}


class ChainComplex:
    """C_0 <- C_1 <- ... <- C_D with sparse integer boundaries ∂_d: C_d -> C_{d-1}."""

    def __init__(self, sizes: Sequence[int], boundaries: Mapping[int, SparseMatrix]):
        self.sizes = tuple(sizes)
        self.boundaries = {d: boundaries.get(d, {}) for d in range(1, len(self.sizes))}
        for d in range(2, len(self.sizes)):
            prod = sparse_product(self.boundaries[d - 1], self.boundaries[d])
            if prod:
                raise ValueError(f"boundary composite ∂{d - 1}∂{d} is not zero")

    @property
    def dim(self) -> int:
        return len(self.sizes) - 1

    def shape(self, d: int) -> tuple[int, int]:
        return (self.sizes[d - 1], self.sizes[d])

    def dense(self, d: int) -> list[list[int]]:
        return to_dense(self.boundaries[d], self.shape(d))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.sizes))


def homology(C: ChainComplex, reduced: bool = False) -> list[HomologyGroup]:
    snf = {d: smith_normal_form(C.boundaries[d], C.shape(d)) for d in range(1, C.dim + 1)}
    out = []
    for d in range(C.dim + 1):
        rank_out = snf[d].rank if d >= 1 else (1 if reduced and C.sizes[0] else 0)
        rank_in = snf[d + 1].rank if d + 1 in snf else 0
        torsion = tuple(snf[d + 1].torsion()) if d + 1 in snf else ()
        out.append(HomologyGroup(d, C.sizes[d] - rank_out - rank_in, torsion))
    return out


def homology_json(groups: Iterable[HomologyGroup]) -> dict:
    return {"homology": [g.to_json() for g in groups]}


def boundary_matrices(S) -> ChainComplex:
    """Simplicial boundary of a complex with ``S.simplices``: degree -> sorted tuples."""
    by_degree = [list(S.simplices.get(d, [])) for d in range(S.dim + 1)] if S.dim >= 0 else []
    index = [{s: k for k, s in enumerate(simps)} for simps in by_degree]
    boundaries: dict[int, SparseMatrix] = {}
    for d in range(1, len(by_degree)):
        M: SparseMatrix = {}
        for col, s in enumerate(by_degree[d]):
            for i in range(d + 1):
                face = s[:i] + s[i + 1:]
                row = index[d - 1].get(face)
                if row is None:
                    raise NotFaceClosed(f"face {list(face)} of {list(s)} is missing",
                                        witness={"simplex": list(s), "face": list(face)})
                M.setdefault(row, {})[col] = (-1) ** i
        boundaries[d] = M
    return ChainComplex([len(s) for s in by_degree], boundaries)
