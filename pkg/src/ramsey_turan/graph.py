"""Assembly of the construction graph G on two copies U, V of the blown-up hypergraph.

G[U] and G[V] both carry the shadow graph of the blown hypergraph; a
vertex of U and a vertex of V are joined when, coordinate by coordinate,
their base points are closer than sqrt(2) - theta.

Vertex ids: U occupies ``0..M-1`` and V occupies ``M..2M-1`` where
``M = t * z**ell``; vertex ``u`` of U and vertex ``M + u`` of V are the two
copies of blown vertex ``u``.
"""
from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import hypercube, hypergraph, sphere
from .errors import DomainError, StageError
from .sphere import SLACK, SQRT2


class Graph:
    """Simple undirected graph with Python-int bitset adjacency rows."""

    def __init__(self, n, edges=(), side=None):
        self.n = n
        self.adj = [0] * n
        self.side = side
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u, v):
        if u == v:
            raise DomainError("self-loops are not allowed")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def has_edge(self, u, v):
        return bool(self.adj[u] >> v & 1)

    def degree(self, v):
        return self.adj[v].bit_count()

    def degrees(self):
        return [a.bit_count() for a in self.adj]

    @property
    def num_edges(self):
        return sum(self.degrees()) // 2

    def edges(self):
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            v = u + 1
            while row:
                low = row & -row
                step = low.bit_length() - 1
                v += step
                out.append((u, v))
                row >>= step + 1
                v += 1
        return out

    def subgraph(self, vertices):
        """Induced subgraph, relabeled to ``0..len(vertices)-1`` in the given order."""
        vs = list(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        g = Graph(len(vs))
        for i, v in enumerate(vs):
            row = 0
            a = self.adj[v]
            for w, j in pos.items():
                if a >> w & 1:
                    row |= 1 << j
            g.adj[i] = row
        if self.side is not None:
            g.side = [self.side[v] for v in vs]
        return g

    def is_symmetric(self):
        for u in range(self.n):
            if self.adj[u] >> u & 1:
                return False
            row = self.adj[u]
            while row:
                low = row & -row
                v = low.bit_length() - 1
                if not self.adj[v] >> u & 1:
                    return False
                row ^= low
        return True

    def to_dimacs(self):
        es = self.edges()
        lines = [f"p edge {self.n} {len(es)}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in es]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text):
        n = None
        edges = []
        for line in text.splitlines():
            tok = line.split()
            if not tok or tok[0] == "c":
                continue
            if tok[0] == "p":
                if tok[1] != "edge":
                    raise ValueError(f"unsupported problem line: {line!r}")
                n, m = int(tok[2]), int(tok[3])
            elif tok[0] == "e":
                edges.append((int(tok[1]) - 1, int(tok[2]) - 1))
            else:
                raise ValueError(f"unrecognized line: {line!r}")
        if n is None:
            raise ValueError("missing 'p edge' line")
        if len(edges) != m:
            raise ValueError(f"header announces {m} edges, found {len(edges)}")
        return cls(n, edges)


def shadow_graph(h):
    g = Graph(h.num_vertices)
    for e in h.edges:
        for a, b in combinations(e, 2):
            g.add_edge(a, b)
    return g


def close_matrix(points, theta):
    """Pairs of base points strictly closer than sqrt(2) - theta."""
    return sphere.distance_matrix(points) < SQRT2 - theta - SLACK


def cross_edges(u_vertices, v_vertices, points, theta):
    """Index pairs (i, j) with d(u_i[a], v_j[a]) < sqrt(2) - theta in every coordinate a.

    ``u_vertices`` and ``v_vertices`` are sequences of ell-tuples of point indices.
    """
    tu = np.atleast_2d(np.asarray(u_vertices, dtype=np.int64))
    tv = np.atleast_2d(np.asarray(v_vertices, dtype=np.int64))
    close = close_matrix(points, theta)
    ok = np.ones((tu.shape[0], tv.shape[0]), dtype=bool)
    for a in range(tu.shape[1]):
        ok &= close[np.ix_(tu[:, a], tv[:, a])]
    i, j = np.nonzero(ok)
    return list(zip(i.tolist(), j.tolist()))


def cap_fraction(points, theta):
    """Average fraction of P within sqrt(2) - theta of a point of P (the point itself included)."""
    return float(close_matrix(points, theta).mean())


# ----------------------------------------------------------------- pipeline

@dataclass
class ConstructionParams:
    r: int
    s: int
    n: int = 4
    alpha: float = 0.25
    beta: float = 0.25
    t: int = 2
    seed: int = 0
    z: int | None = None  # defaults to 2n
    k: int | None = None  # with epsilon: skip the (P1)/(P2) search
    epsilon: float | None = None
    k_max: int = 200
    scan_order: int = 4
    keep_probability: float | None = None
    max_base_vertices: int = 400
    max_candidates: int = 10**8

    def validate(self):
        if not (2 <= self.s <= self.r):
            raise DomainError(f"need 2 <= s <= r, got r={self.r}, s={self.s}")
        if self.t < 1:
            raise DomainError("t must be >= 1")
        if (self.k is None) != (self.epsilon is None):
            raise DomainError("k and epsilon must be given together")
        if self.resolved_z() < 2:
            raise DomainError("z must be >= 2")

    def resolved_z(self):
        return 2 * self.n if self.z is None else self.z


@dataclass
class ConstructionOutput:
    graph: Graph
    params: dict
    xi: hypergraph.BlowupMap
    base_points: list
    edge_counts: dict
    sphere_params: sphere.SphereParams = None
    partition: sphere.SpherePartition = None
    cube: hypercube.BlownHypercube = None
    bipartite: list = field(default_factory=list)
    base: hypergraph.Hypergraph = None
    blown: hypergraph.Hypergraph = None
    blowup_info: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def n_side(self):
        return self.graph.n // 2

    @property
    def points(self):
        return np.array([c.representative for c in self.base_points])

    def u_vertices(self):
        return list(range(self.n_side))

    def v_vertices(self):
        return list(range(self.n_side, self.graph.n))


def stage_seed(seed, name):
    """Substream seed for one named stage; stable across runs and Python versions."""
    ss = np.random.SeedSequence([seed, zlib.crc32(name.encode())])
    return int(ss.generate_state(1)[0])


def _stage(name, timings, fn, *args, **kwargs):
    t0 = time.perf_counter()
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage name attached
        raise StageError(name, exc) from exc
    finally:
        timings[name] = time.perf_counter() - t0


def assemble_construction(params):
    """Run sphere -> auxiliary graphs -> hypergraphs -> G for one parameter set."""
    params.validate()
    timings = {}
    r, s, t = params.r, params.s, params.t
    z = params.resolved_z()
    if params.k is None:
        sp = _stage("sphere_params", timings, sphere.select_sphere_params,
                    params.alpha, params.beta, r, params.k_max)
    else:
        sp = sphere.SphereParams(params.alpha, params.beta, params.epsilon, params.k, r)
    theta = sp.theta
    part = _stage("partition", timings, sphere.build_partition, sp.k, z, theta / 4,
                  stage_seed(params.seed, "partition"))
    pts = part.points
    ell, bound = hypercube.compute_ell(r, s)
    cube = _stage("aux", timings, hypercube.build_blown_hypercube, r, s, ell)
    bs = hypercube.build_bipartite_family(cube)
    base = _stage("base_hypergraph", timings, hypergraph.build_base_hypergraph, pts, ell, bs, theta,
                  params.max_base_vertices, params.max_candidates)
    blown, bmap, info = _stage("blowup", timings, hypergraph.random_blowup, base, t, params.beta, r,
                               params.scan_order, stage_seed(params.seed, "blowup"),
                               params.keep_probability)

    def build_graph():
        m = blown.num_vertices
        g = Graph(2 * m, side=["U"] * m + ["V"] * m)
        for e in blown.edges:
            for a, b in combinations(e, 2):
                g.add_edge(a, b)
                g.add_edge(m + a, m + b)
        within = shadow_graph(blown).num_edges
        # base-level cross pattern, then blown up by t x t blocks
        tuples = base.tuples
        close = close_matrix(pts, theta)
        ok = np.ones((base.num_vertices, base.num_vertices), dtype=bool)
        for a in range(ell):
            ok &= close[np.ix_(tuples[:, a], tuples[:, a])]
        cross = 0
        block = (1 << t) - 1
        rows = []
        for bu in range(base.num_vertices):
            mask = 0
            for bv in np.flatnonzero(ok[bu]).tolist():
                mask |= block << (m + bv * t)
            rows.append(mask)
            cross += int(ok[bu].sum()) * t * t
        for u in range(m):
            g.adj[u] |= rows[u // t]
        # transpose the cross pattern into the V rows
        for bv in range(base.num_vertices):
            mask = 0
            for bu in np.flatnonzero(ok[:, bv]).tolist():
                mask |= block << (bu * t)
            for j in range(t):
                g.adj[m + bv * t + j] |= mask
        return g, {"within_U": within, "within_V": within, "cross": cross}

    g, counts = _stage("assemble", timings, build_graph)
    record = {
        "n": params.n, "r": r, "s": s, "alpha": params.alpha, "beta": params.beta,
        "epsilon": sp.epsilon, "k": sp.k, "theta": theta, "z": z, "ell": ell, "t": t,
        "seed": params.seed, "scan_order": params.scan_order,
        "keep_probability": info["keep_probability"], "N": g.n,
        "lower_bound": str(bound),
        "p1_measure": sp.p1_measure(), "p2_measure": sp.p2_measure(),
        "partition_max_diameter": part.max_diameter, "diameter_target": theta / 4,
        "diameter_target_met": part.max_diameter <= theta / 4,
        "base_vertices": base.num_vertices, "base_edges": base.num_edges,
        "blown_edges": blown.num_edges, "blowup_attempt": info["attempt"],
    }
    return ConstructionOutput(
        graph=g, params=record, xi=bmap, base_points=part.cells, edge_counts=counts,
        sphere_params=sp, partition=part, cube=cube, bipartite=bs, base=base, blown=blown,
        blowup_info=info, timings=timings,
    )


def density_report(out, tolerance=0.05):
    """Edge density against 2^(-ell-2) and against the measured cap fraction."""
    n = out.graph.n
    ell = out.params["ell"]
    theta = out.params["theta"]
    m_total = sum(out.edge_counts.values())
    c = cap_fraction(out.points, theta)
    cross_density = out.edge_counts["cross"] / n ** 2
    predicted = c ** ell / 4
    target = 2.0 ** (-ell - 2)
    density = m_total / n ** 2
    alpha = out.params["alpha"]
    implied_c = 2 * (1 - density / target) / alpha if alpha else math.nan
    rel = abs(cross_density - predicted) / predicted if predicted > 0 else (0.0 if cross_density == 0 else math.inf)
    return {
        "N": n,
        "edges": m_total,
        "density": density,
        "target": target,
        "target_exact": str(Fraction(1, 2 ** (ell + 2))),
        "cap_fraction": c,
        "cross_density": cross_density,
        "predicted_cross_density": predicted,
        "relative_error": rel,
        "tolerance": tolerance,
        "implied_C": implied_c,
        "shortfall": rel > tolerance,
    }


def params_record_lines(record):
    return [f"{k} = {record[k]}" for k in sorted(record)]


__all__ = [
    "Graph", "shadow_graph", "cross_edges", "cap_fraction", "ConstructionParams",
    "ConstructionOutput", "assemble_construction", "density_report",
]
