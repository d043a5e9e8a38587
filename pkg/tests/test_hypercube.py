import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from ramsey_turan.errors import DomainError, ResourceLimitError
from ramsey_turan.hypercube import (
    BipartiteAux,
    alpha_union,
    build_bipartite_family,
    build_blown_hypercube,
    compute_ell,
    union_adjacency,
)

ALL_RS = [(r, s) for r in range(2, 11) for s in range(2, r + 1)]


def cube(r, s):
    return build_blown_hypercube(r, s, compute_ell(r, s)[0])


@pytest.mark.parametrize("r,s,ell,bound", [
    (4, 2, 2, Fraction(1, 16)),
    (4, 3, 1, Fraction(1, 8)),
    (2, 2, 1, Fraction(1, 8)),
    (3, 2, 2, Fraction(1, 16)),
    (3, 3, 1, Fraction(1, 8)),
    (10, 6, 1, Fraction(1, 8)),
    (12, 7, 1, Fraction(1, 8)),
])
def test_compute_ell_examples(r, s, ell, bound):
    assert compute_ell(r, s) == (ell, bound)


@pytest.mark.parametrize("r,s", [(3, 1), (3, 4), (2, 5)])
def test_compute_ell_domain(r, s):
    with pytest.raises(DomainError):
        compute_ell(r, s)


@given(st.integers(2, 300).flatmap(lambda r: st.tuples(st.just(r), st.integers(2, r))))
def test_ell_is_the_unique_bracket(rs):
    r, s = rs
    ell, bound = compute_ell(r, s)
    assert bound == Fraction(1, 2 ** (ell + 2))
    if r > s - 1:
        assert 2 ** (ell - 1) * (s - 1) < r <= 2 ** ell * (s - 1) or ell == 1
    assert 2 ** ell * (s - 1) >= r


def test_no_discards_when_exact():
    q = cube(4, 3)
    assert q.classes == {"0": [0, 1], "1": [2, 3]}
    assert q.discard_trace == []


def test_single_discard():
    q = cube(3, 3)
    assert sorted(len(v) for v in q.classes.values()) == [1, 2]
    assert len(q.discard_trace) == 1


def test_three_discards_from_singletons():
    q = cube(5, 2)
    assert [lab for _, lab in q.discard_trace] == ["000", "111", "001"]
    assert q.vertex_count == 5
    assert all(len(v) <= 1 for v in q.classes.values())


def test_inconsistent_ell():
    with pytest.raises(DomainError):
        build_blown_hypercube(4, 2, 3)


@pytest.mark.parametrize("r,s", ALL_RS)
def test_cube_invariants(r, s):
    q = cube(r, s)
    sizes = [len(v) for v in q.classes.values()]
    assert q.vertex_count == r == sum(sizes)
    assert max(sizes) <= s - 1
    # discards are spread evenly: class sizes differ by at most one
    assert max(sizes) - min(sizes) <= 1
    # one discard per class whenever there are no more discards than classes
    if len(q.discard_trace) <= len(q.classes):
        assert min(sizes) >= s - 2
    trace = [lab for _, lab in q.discard_trace]
    # paired discards come first and are complementary labels
    for i in range(0, 2 * (len(trace) // 2), 2):
        assert all(a != b for a, b in zip(trace[i], trace[i + 1]))
    assert q.labels == sorted(q.labels)


@pytest.mark.parametrize("r,s", ALL_RS)
def test_bipartite_family_invariants(r, s):
    q = cube(r, s)
    bs = build_bipartite_family(q)
    assert len(bs) == q.ell
    labels = q.labels
    for b in bs:
        assert b.part0 | b.part1 == frozenset(range(r))
        assert not b.part0 & b.part1
        assert max(len(b.part0), len(b.part1)) <= math.ceil(r / 2)
        for v in range(r):
            assert b.side(v) == int(labels[v][b.index - 1])
    adj = union_adjacency(bs)
    for u, v in combinations(range(r), 2):
        assert (v in adj[u]) == (labels[u] != labels[v])


def test_single_edge_family():
    bs = build_bipartite_family(cube(2, 2))
    assert len(bs) == 1 and bs[0].edges() == [(0, 1)]
    assert alpha_union(bs) == 1


def test_k22_family():
    bs = build_bipartite_family(cube(4, 3))
    assert sorted(map(len, (bs[0].part0, bs[0].part1))) == [2, 2]
    assert alpha_union(bs) == 2


def test_r5_s2_parts():
    bs = build_bipartite_family(cube(5, 2))
    assert len(bs) == 3
    assert all(sorted((len(b.part0), len(b.part1))) == [2, 3] for b in bs)


@pytest.mark.parametrize("r,s", ALL_RS)
def test_alpha_union_bound(r, s):
    assert alpha_union(build_bipartite_family(cube(r, s))) <= s - 1


def test_alpha_union_limits():
    with pytest.raises(DomainError):
        alpha_union([])
    big = [BipartiteAux(1, frozenset(range(11)), frozenset(range(11, 22)))]
    with pytest.raises(ResourceLimitError):
        alpha_union(big)
