from __future__ import annotations

import itertools
import random

import pytest

from cubecat.errors import ArityMismatch, ArityTooLarge
from cubecat.operad import OperadElement, enumerate_fdl, op_join, op_meet, substitute
from cubecat.order import Permutation

from oracles import all_monotone_tables

E = OperadElement.from_sets


def table(f):
    return tuple(f(x) for x in range(1 << f.arity))


def substitution_by_table(outer, inners):
    """Evaluate outer on the inner values, inners reading consecutive blocks."""
    total = sum(f.arity for f in inners)
    out = []
    for x in range(1 << total):
        args, off = 0, 0
        for i, f in enumerate(inners):
            args |= f(x >> off & ((1 << f.arity) - 1)) << i
            off += f.arity
        out.append(outer(args))
    return tuple(out)


def test_lattice_operation_examples():
    assert op_join(E([[1]], 2), E([[2]], 2)).value.sets == [[1], [2]]
    meet = op_meet(E([[1], [2]], 3), E([[3]], 3))
    assert meet.value.sets == [[1, 3], [2, 3]]
    assert table(meet) == tuple(((x & 1) | (x >> 1 & 1)) & (x >> 2 & 1) for x in range(8))
    zero = E([], 2)
    for f in enumerate_fdl(2):
        assert op_meet(zero, f) == zero
    with pytest.raises(ArityMismatch):
        op_meet(E([[1]], 1), E([[1]], 2))
    with pytest.raises(ArityMismatch):
        op_join(E([[1]], 1), E([[1]], 2))


@pytest.mark.parametrize("n", range(4))
def test_lattice_axioms_exhaustive(n):
    els = enumerate_fdl(n)
    for a in els:
        assert op_meet(a, a) == a == op_join(a, a)
    for a, b in itertools.product(els, repeat=2):
        assert op_meet(a, b) == op_meet(b, a)
        assert op_join(a, b) == op_join(b, a)
        assert op_meet(a, op_join(a, b)) == a == op_join(a, op_meet(a, b))
        assert table(op_meet(a, b)) == tuple(x & y for x, y in zip(table(a), table(b)))
    triples = itertools.product(els, repeat=3) if n <= 2 else random.Random(n).choices(
        list(itertools.product(els, repeat=3)), k=2000)
    for a, b, c in triples:
        assert op_meet(a, op_meet(b, c)) == op_meet(op_meet(a, b), c)
        assert op_join(a, op_join(b, c)) == op_join(op_join(a, b), c)
        assert op_meet(a, op_join(b, c)) == op_join(op_meet(a, b), op_meet(a, c))
        assert op_join(a, op_meet(b, c)) == op_meet(op_join(a, b), op_join(a, c))


def test_substitute_examples():
    res = substitute(E([[1, 2]], 2), [E([[1], [2]], 2), E([[1]], 1)])
    assert res.value.sets == [[1, 3], [2, 3]]
    f = E([[1, 2], [3]], 3)
    assert substitute(OperadElement.unit(), [f]) == f
    with pytest.raises(ArityMismatch):
        substitute(E([[1, 2]], 2), [f])


def test_unit_laws():
    for k in range(4):
        for f in enumerate_fdl(k):
            assert substitute(f, [OperadElement.unit()] * k) == f
            assert substitute(OperadElement.unit(), [f]) == f


def test_substitution_agrees_with_truth_tables_small():
    for k in range(3):
        for outer in enumerate_fdl(k):
            for sizes in itertools.product(range(3), repeat=k):
                for inners in itertools.product(*(enumerate_fdl(s) for s in sizes)):
                    assert table(substitute(outer, list(inners))) == substitution_by_table(outer, inners)


def test_substitution_agrees_with_truth_tables_random():
    rng = random.Random(10)
    for _ in range(1000):
        k = rng.randint(0, 4)
        outer = rng.choice(enumerate_fdl(k))
        inners = [rng.choice(enumerate_fdl(rng.randint(0, 3))) for _ in range(k)]
        if sum(f.arity for f in inners) > 8:
            continue
        assert table(substitute(outer, inners)) == substitution_by_table(outer, inners)


def test_substitution_is_associative():
    rng = random.Random(3)
    for _ in range(200):
        k = rng.randint(0, 3)
        g = rng.choice(enumerate_fdl(k))
        hs = [rng.choice(enumerate_fdl(rng.randint(0, 2))) for _ in range(k)]
        fs = [[rng.choice(enumerate_fdl(rng.randint(0, 2))) for _ in range(h.arity)] for h in hs]
        flat = [f for block in fs for f in block]
        left = substitute(substitute(g, hs), flat)
        right = substitute(g, [substitute(h, block) for h, block in zip(hs, fs)])
        assert left == right


def _block_permutation(g, sizes):
    """Permutation carrying block j of the variables to slot g(j), order preserved."""
    ginv = g.inverse()
    new_sizes = [sizes[ginv.map[i] - 1] for i in range(len(sizes))]
    starts_new = list(itertools.accumulate([0] + new_sizes))
    image = []
    for j, size in enumerate(sizes):
        for t in range(size):
            image.append(starts_new[g.map[j] - 1] + t + 1)
    return Permutation(tuple(image))


def test_substitution_is_equivariant():
    for k in range(3):
        for outer in enumerate_fdl(k):
            for sizes in itertools.product(range(3), repeat=k):
                for inners in itertools.product(*(enumerate_fdl(s) for s in sizes)):
                    for g in Permutation.all(k):
                        ginv = g.inverse()
                        reordered = [inners[ginv.map[i] - 1] for i in range(k)]
                        left = substitute(outer.act(g), list(inners))
                        right = substitute(outer, reordered).act(_block_permutation(g, list(sizes)))
                        assert left == right


def test_action_is_a_right_action():
    for f in enumerate_fdl(3):
        for g, h in itertools.product(Permutation.all(3), repeat=2):
            assert f.act(g).act(h) == f.act(g * h)


def test_enumerate_examples():
    assert [str(e) for e in enumerate_fdl(2, with_bounds=False)] == [str(e) for e in sorted(
        enumerate_fdl(2, with_bounds=False), key=lambda e: e.value.key)]
    assert {frozenset(map(frozenset, e.value.sets)) for e in enumerate_fdl(2, with_bounds=False)} == {
        frozenset({frozenset({1})}), frozenset({frozenset({2})}),
        frozenset({frozenset({1, 2})}), frozenset({frozenset({1}), frozenset({2})})}
    assert enumerate_fdl(1, with_bounds=False) == [OperadElement.generator(1, 1)]
    assert len(enumerate_fdl(3, with_bounds=False)) == 18
    with pytest.raises(ArityTooLarge):
        enumerate_fdl(6)


@pytest.mark.parametrize("n", range(5))
def test_enumeration_matches_bruteforce_count(n):
    expected = len(all_monotone_tables(n, 1)) if n <= 3 else 168
    assert len(enumerate_fdl(n)) == expected
    assert len(enumerate_fdl(n, with_bounds=False)) == expected - 2
    if n <= 3:
        assert sorted(table(e) for e in enumerate_fdl(n)) == sorted(all_monotone_tables(n, 1))


def test_json_round_trip():
    f = E([[1, 2], [3]], 3)
    assert OperadElement.from_json(f.to_json(), 3) == f
    assert E([], 2).is_bound and E([[]], 2).is_bound and not f.is_bound
