import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import desk_output
from ramsey_turan.errors import DomainError, StageError
from ramsey_turan.graph import (
    ConstructionParams,
    Graph,
    assemble_construction,
    cap_fraction,
    cross_edges,
    density_report,
    shadow_graph,
    stage_seed,
)
from ramsey_turan.hypergraph import Hypergraph
from ramsey_turan.sphere import SQRT2
from ramsey_turan.verification import sides_isomorphic_hint


@pytest.fixture
def out(desk):
    return desk[2]


def test_shadow_of_one_edge_is_triangle():
    g = shadow_graph(Hypergraph(3, 3, [(0, 1, 2)]))
    assert g.edges() == [(0, 1), (0, 2), (1, 2)]


def test_shadow_of_disjoint_edges():
    g = shadow_graph(Hypergraph(4, 8, [(0, 1, 2, 3), (4, 5, 6, 7)]))
    assert g.num_edges == 12
    assert not any(g.has_edge(u, v) for u in range(4) for v in range(4, 8))


def test_shadow_matches_pair_union(out):
    pairs = {p for e in out.blown.edges for p in combinations(sorted(e), 2)}
    assert shadow_graph(out.blown).num_edges == len(pairs) == out.edge_counts["within_U"]


def test_cross_edges_identical_and_antipodal():
    pts = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]])
    assert cross_edges([(0,)], [(0,)], pts, 0.1) == [(0, 0)]
    assert cross_edges([(0,)], [(1,)], pts, 0.1) == []
    # orthogonal points sit exactly at sqrt(2): not strictly closer
    assert cross_edges([(0,)], [(2,)], pts, 0.1) == []


def test_cross_edges_every_coordinate():
    pts = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    # same-index comparison: the second coordinates are antipodal
    assert cross_edges([(0, 0)], [(0, 1)], pts, 0.1) == []
    assert cross_edges([(0, 1)], [(0, 1)], pts, 0.1) == [(0, 0)]


def test_graph_rejects_loops():
    with pytest.raises(DomainError):
        Graph(2, [(1, 1)])


@given(st.integers(1, 25), st.integers(0, 10**6))
def test_dimacs_roundtrip(n, seed):
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < 0.3]
    g = Graph(n, edges)
    text = g.to_dimacs()
    lines = text.splitlines()
    assert lines[0] == f"p edge {n} {len(edges)}"
    pairs = [tuple(map(int, ln.split()[1:])) for ln in lines[1:]]
    assert pairs == sorted(pairs) and all(1 <= i < j <= n for i, j in pairs)
    g2 = Graph.from_dimacs(text)
    assert g2.edges() == g.edges() == sorted(edges)
    assert g2.to_dimacs() == text


def test_dimacs_rejects_bad_counts():
    with pytest.raises(ValueError):
        Graph.from_dimacs("p edge 3 2\ne 1 2\n")


# ----------------------------------------------------------- assembly

def test_vertex_count(out):
    p = out.params
    assert out.graph.n == 2 * p["t"] * p["z"] ** p["ell"] == p["N"]


def test_graph_invariants(out):
    g = out.graph
    assert g.is_symmetric()
    assert all(not g.has_edge(v, v) for v in range(g.n))
    assert g.num_edges == sum(out.edge_counts.values())
    assert out.edge_counts["within_U"] == out.edge_counts["within_V"]


def test_sides_isomorphic(out):
    g = out.graph
    assert sides_isomorphic_hint(g)
    m = out.n_side
    assert g.subgraph(range(m)).edges() == g.subgraph(range(m, 2 * m)).edges()


def test_cross_edges_revalidate(out):
    g = out.graph
    m = out.n_side
    pts = out.points
    theta = out.params["theta"]
    tuples = out.base.tuples
    found = 0
    for u in range(m):
        for v in range(m, 2 * m):
            if g.has_edge(u, v):
                found += 1
                a = tuples[out.xi.xi[u]]
                b = tuples[out.xi.xi[v - m]]
                d = np.linalg.norm(pts[a] - pts[b], axis=1)
                assert (d < SQRT2 - theta).all()
    assert found == out.edge_counts["cross"]


def test_cross_matches_helper(out):
    t = out.params["t"]
    tuples = out.base.tuples
    base_pairs = cross_edges(tuples, tuples, out.points, out.params["theta"])
    assert len(base_pairs) * t * t == out.edge_counts["cross"]


def test_r2_s2_end_to_end():
    out = desk_output(2, 2)
    assert out.graph.n == 2 * out.params["t"] * out.params["z"]
    from ramsey_turan.verification import max_clique
    assert max_clique(out.graph).size <= 3


def test_determinism():
    p = dict(r=3, s=3, z=20, k=3, epsilon=0.25, t=3, seed=7)
    a = assemble_construction(ConstructionParams(**p))
    b = assemble_construction(ConstructionParams(**p))
    assert a.graph.to_dimacs() == b.graph.to_dimacs()


def test_stage_seed_stable():
    assert stage_seed(0, "blowup") == stage_seed(0, "blowup")
    assert stage_seed(0, "blowup") != stage_seed(0, "partition")
    assert stage_seed(0, "blowup") != stage_seed(1, "blowup")


def test_precondition_s_above_r():
    with pytest.raises(DomainError):
        assemble_construction(ConstructionParams(r=2, s=3))


def test_stage_errors_are_named():
    with pytest.raises(StageError) as info:
        assemble_construction(ConstructionParams(r=2, s=2, z=60, k=3, epsilon=0.4, max_base_vertices=10))
    assert info.value.stage == "base_hypergraph"


# ------------------------------------------------------------ density

def test_density_report_fields(out):
    rep = density_report(out)
    assert rep["edges"] == out.graph.num_edges
    assert rep["density"] == pytest.approx(rep["edges"] / rep["N"] ** 2)
    assert rep["target"] == 2.0 ** (-out.params["ell"] - 2)
    assert 0 < rep["cap_fraction"] <= 1


def test_cross_density_matches_cap_fraction_k50():
    out = assemble_construction(ConstructionParams(r=2, s=2, z=16, k=50, epsilon=0.5, t=2, seed=0))
    rep = density_report(out)
    assert rep["relative_error"] <= 0.20
    assert rep["cross_density"] == pytest.approx(rep["cap_fraction"] / 4)


def test_degenerate_theta_has_no_cross_edges():
    k = 3
    out = assemble_construction(ConstructionParams(r=2, s=2, z=8, k=k, epsilon=SQRT2 * math.sqrt(k), t=4))
    assert out.params["theta"] == pytest.approx(SQRT2)
    assert out.edge_counts["cross"] == 0
    assert density_report(out)["cross_density"] == 0


def test_density_nondecreasing_in_k():
    dens = []
    for k in (10, 25, 50):
        out = assemble_construction(ConstructionParams(r=2, s=2, z=16, k=k, epsilon=0.5, t=2, seed=0))
        dens.append(density_report(out)["density"])
    assert dens[0] <= dens[1] <= dens[2]


def test_cap_fraction_counts_self():
    pts = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    assert cap_fraction(pts, 0.1) == 0.5
