"""Checkers for the graph-theoretic claims: clique freeness, K_r-independence,
cliques inside hyperedges, and the hypergraph independence bound.

Every search here reports one of three outcomes: a conclusive pass, a
conclusive failure (with a witness), or ``inconclusive`` when a node budget
ran out.  An exhausted budget is never turned into a pass.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DomainError
from .graph import Graph, shadow_graph

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

EXACT_ALPHA_LIMIT = 60


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask):
    return mask.bit_count()


@dataclass(frozen=True)
class CliqueWitness:
    vertices: tuple
    size: int

    @classmethod
    def of(cls, vertices):
        vs = tuple(sorted(vertices))
        return cls(vs, len(vs))

    def is_clique(self, g):
        return all(g.has_edge(u, v) for u, v in combinations(self.vertices, 2))


@dataclass
class CliqueResult:
    witness: CliqueWitness
    exact: bool
    nodes: int

    @property
    def size(self):
        return self.witness.size


class _Budget(Exception):
    pass


def _color_sort(adj, cand):
    """Greedy sequential coloring of ``cand``; vertices listed with nondecreasing color."""
    order, colors = [], []
    rest = cand
    color = 0
    while rest:
        color += 1
        avail = rest
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail &= ~adj[v] & ~low
            rest &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique(g, budget=10**7):
    """Maximum clique by coloring-bounded branch and bound over bitset rows.

    Returns a :class:`CliqueResult` whose witness is the lexicographically
    least maximum clique when the search completed within ``budget`` node
    expansions; otherwise ``exact`` is False and the witness is the best seen.
    """
    adj = g.adj
    n = g.n
    if n == 0:
        return CliqueResult(CliqueWitness.of(()), True, 0)
    best = [()]
    nodes = [0]

    def expand(chosen, cand):
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        order, colors = _color_sort(adj, cand)
        for i in range(len(order) - 1, -1, -1):
            if len(chosen) + colors[i] <= len(best[0]):
                return
            v = order[i]
            nxt = cand & adj[v]
            grown = chosen + (v,)
            if nxt:
                expand(grown, nxt)
            elif len(grown) > len(best[0]):
                best[0] = grown
            cand &= ~(1 << v)

    try:
        expand((), (1 << n) - 1)
    except _Budget:
        return CliqueResult(CliqueWitness.of(best[0]), False, nodes[0])
    omega = len(best[0])
    lex = _lex_least_clique(adj, n, omega, budget - nodes[0])
    if lex is None:
        return CliqueResult(CliqueWitness.of(best[0]), False, nodes[0])
    return CliqueResult(CliqueWitness.of(lex), True, nodes[0])


def _lex_least_clique(adj, n, size, budget):
    """First clique of the given size in lexicographic order of sorted vertex lists."""
    if size == 0:
        return ()
    nodes = [0]

    def rec(chosen, cand):
        if len(chosen) == size:
            return chosen
        nodes[0] += 1
        if nodes[0] > budget:
            raise _Budget
        _, colors = _color_sort(adj, cand)
        if len(chosen) + (colors[-1] if colors else 0) < size:
            return None
        for v in _bits(cand):
            # candidates above v only, so the clique comes out sorted
            found = rec(chosen + (v,), cand & adj[v] & ~((2 << v) - 1))
            if found is not None:
                return found
            cand &= ~(1 << v)
            if _popcount(cand) + len(chosen) < size:
                return None
        return None

    try:
        return rec((), (1 << n) - 1)
    except _Budget:
        return None


def has_clique(adj, cand, size):
    """Whether the vertices in bitmask ``cand`` contain a clique of ``size``."""
    if size <= 0:
        return True
    if _popcount(cand) < size:
        return False
    if size == 1:
        return True
    for v in _bits(cand):
        cand &= ~(1 << v)
        if has_clique(adj, cand & adj[v], size - 1):
            return True
        if _popcount(cand) < size:
            return False
    return False


# ------------------------------------------------------------------ freeness

@dataclass
class CheckResult:
    name: str
    bound: int
    value: int
    status: str
    witness: CliqueWitness | None = None

    def line(self):
        extra = f" witness={list(self.witness.vertices)}" if self.status == FAIL else ""
        return f"{self.name}: {self.status} (omega={self.value}, bound={self.bound}){extra}"


@dataclass
class FreenessReport:
    checks: list = field(default_factory=list)

    @property
    def status(self):
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def passed(self):
        return self.status == PASS

    def lines(self):
        return [c.line() for c in self.checks] + [f"freeness: {self.status}"]


def _check(name, g, bound, budget):
    res = max_clique(g, budget)
    if res.size > bound:
        # a clique larger than the bound refutes freeness even when the search was cut short
        return CheckResult(name, bound, res.size, FAIL, res.witness)
    status = PASS if res.exact else INCONCLUSIVE
    return CheckResult(name, bound, res.size, status, None)


def verify_freeness(graph, r, s, side=None, budget=10**7):
    """Exact checks of omega(G[U]) <= r, omega(G[V]) <= r and omega(G) <= r + s - 1.

    ``graph`` may be a ConstructionOutput or a Graph carrying U/V side labels.
    """
    g = getattr(graph, "graph", graph)
    labels = side if side is not None else g.side
    if labels is None:
        raise DomainError("graph has no U/V side labels")
    u = [v for v in range(g.n) if labels[v] == "U"]
    w = [v for v in range(g.n) if labels[v] == "V"]
    report = FreenessReport()
    report.checks.append(_check("omega(G[U])", g.subgraph(u), r, budget))
    report.checks.append(_check("omega(G[V])", g.subgraph(w), r, budget))
    report.checks.append(_check("omega(G)", g, r + s - 1, budget))
    for c in report.checks[:2]:
        if c.witness is not None:
            src = u if c.name.endswith("[U])") else w
            c.witness = CliqueWitness.of(src[i] for i in c.witness.vertices)
    return report


# ------------------------------------------------------ K_r-independence

@dataclass
class IndependenceReport:
    r: int
    lower: int
    upper: int | None
    witness: tuple

    def revalidate(self, g):
        sub = g.subgraph(self.witness)
        return not has_clique(sub.adj, (1 << sub.n) - 1, self.r)


def _clique_cover_bound(adj, cand, r):
    """Upper bound on a K_r-free subset of ``cand``: each clique of a greedy cover gives at most r-1."""
    total = 0
    rest = cand
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        clique = low
        common = adj[v] & rest
        while common:
            lw = common & -common
            clique |= lw
            common &= adj[lw.bit_length() - 1]
        rest &= ~clique
        total += min(_popcount(clique), r - 1)
    return total


def _alpha_exact(g, r):
    adj = g.adj
    best = [0, 0]  # size, mask

    def rec(chosen, size, cand):
        if size > best[0]:
            best[0], best[1] = size, chosen
        if not cand:
            return
        if size + _clique_cover_bound(adj, cand, r) <= best[0]:
            return
        low = cand & -cand
        v = low.bit_length() - 1
        rest = cand & ~low
        if not has_clique(adj, chosen & adj[v], r - 1):
            rec(chosen | low, size + 1, rest)
        rec(chosen, size, rest)

    rec(0, 0, (1 << g.n) - 1)
    return best[0], tuple(_bits(best[1]))


def _alpha_greedy(g, r, rng, order=None):
    adj = g.adj
    verts = list(range(g.n)) if order is None else list(order)
    chosen = 0
    for v in verts:
        if not has_clique(adj, chosen & adj[v], r - 1):
            chosen |= 1 << v
    return chosen


def _local_search(g, r, chosen, rng, rounds):
    """(1,2)-swaps: drop one member, then try to add two outsiders."""
    adj = g.adj
    n = g.n
    size = _popcount(chosen)
    for _ in range(rounds):
        members = list(_bits(chosen))
        if not members:
            break
        out = rng.choice(members)
        trial = chosen & ~(1 << out)
        outsiders = [v for v in range(n) if not trial >> v & 1 and v != out]
        rng.shuffle(outsiders)
        added = 0
        for v in outsiders:
            if not has_clique(adj, trial & adj[v], r - 1):
                trial |= 1 << v
                added += 1
        if _popcount(trial) > size:
            chosen, size = trial, _popcount(trial)
        elif _popcount(trial) == size and rng.random() < 0.5:
            chosen = trial  # sideways move
    return chosen


def alpha_r_bounds(g, r, mode="heuristic", seed=0, restarts=8, rounds=200):
    """Bounds on the largest vertex set inducing no K_r.

    ``r = 2`` is the ordinary independence number.  Exact mode is limited to
    ``EXACT_ALPHA_LIMIT`` vertices; heuristic mode only gives a lower bound.
    """
    if r < 2:
        raise DomainError("r must be at least 2")
    if mode == "exact":
        if g.n > EXACT_ALPHA_LIMIT:
            raise DomainError(
                f"exact alpha_r limited to {EXACT_ALPHA_LIMIT} vertices (n={g.n}); use mode='heuristic'")
        size, wit = _alpha_exact(g, r)
        return IndependenceReport(r, size, size, wit)
    if mode != "heuristic":
        raise DomainError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    best = _alpha_greedy(g, r, rng)
    # low-degree-first greedy is usually a good start
    degs = g.degrees()
    cand = _alpha_greedy(g, r, rng, sorted(range(g.n), key=lambda v: (degs[v], v)))
    if _popcount(cand) > _popcount(best):
        best = cand
    for _ in range(restarts):
        order = list(range(g.n))
        rng.shuffle(order)
        cand = _local_search(g, r, _alpha_greedy(g, r, rng, order), rng, rounds)
        if _popcount(cand) > _popcount(best):
            best = cand
    wit = tuple(_bits(best))
    return IndependenceReport(r, len(wit), None, wit)


def independence_bound(r, ell, beta, z, t=None):
    """r^ell 2^(ell+r) beta z^ell, times 4t when a blow-up factor is given."""
    base = r ** ell * 2 ** (ell + r) * beta * z ** ell
    return base if t is None else base * 4 * t


def beta_hat(points, diameter):
    """Largest fraction of P inside a cap of the given diameter centred at a point of P.

    A cap of diameter D has polar angle asin(D/2), hence chord radius
    2 sin(asin(D/2)/2) about its centre (for D <= 2).
    """
    x = np.asarray(points, dtype=float)
    if not 0 <= diameter <= 2:
        raise DomainError("diameter must lie in [0, 2]")
    radius = 2 * math.sin(math.asin(diameter / 2) / 2)
    d = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
    return float((d <= radius + 1e-12).mean(axis=1).max())


# ---------------------------------------------------- hyperedge structure

def maximal_cliques(g):
    """Bron-Kerbosch with pivoting; yields sorted tuples."""
    adj = g.adj

    def bk(rset, p, x):
        if not p and not x:
            yield tuple(sorted(rset))
            return
        pu = p | x
        pivot = max(_bits(pu), key=lambda u: _popcount(p & adj[u]))
        for v in list(_bits(p & ~adj[pivot])):
            yield from bk(rset + (v,), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    yield from bk((), (1 << g.n) - 1, 0)


def cliques_in_hyperedges(g_side, h):
    """Every maximal clique (size >= 2) of ``g_side`` lies inside one hyperedge.

    Returns ``(True, None)`` or ``(False, clique)`` for the first clique that does not.
    """
    edge_sets = [frozenset(e) for e in h.edges]
    by_vertex = {}
    for es in edge_sets:
        for v in es:
            by_vertex.setdefault(v, []).append(es)
    for c in maximal_cliques(g_side):
        if len(c) < 2:
            continue
        if not any(set(c) <= es for es in by_vertex.get(c[0], ())):
            return False, c
    return True, None


def hypergraph_independent_set(h, exact_limit=20):
    """Largest (or best found) vertex set containing no hyperedge."""
    n = h.num_vertices
    edges = [frozenset(e) for e in h.edges]
    inc = {}
    for e in edges:
        for v in e:
            inc.setdefault(v, []).append(e)

    def ok(chosen, v):
        return all((e - {v}) - chosen for e in inc.get(v, ()))

    if n <= exact_limit:
        for size in range(n, -1, -1):
            for cand in combinations(range(n), size):
                cs = set(cand)
                if not any(e <= cs for e in edges):
                    return tuple(cand), True
    chosen = set()
    for v in range(n):
        if ok(chosen, v):
            chosen.add(v)
    return tuple(sorted(chosen)), False


def base_independence_check(h, beta_hat_value, r, ell, z):
    """Informational: best independent set of H against r^ell 2^(ell+r) beta_hat z^ell."""
    wit, exact = hypergraph_independent_set(h)
    bound = independence_bound(r, ell, beta_hat_value, z)
    return {
        "alpha": len(wit),
        "exact": exact,
        "bound": bound,
        "ratio": len(wit) / bound if bound > 0 else math.inf,
        "witness": wit,
    }


def sides_isomorphic_hint(g):
    """Cheap invariant: U and V carry identical sorted degree sequences inside their sides."""
    u = [v for v in range(g.n) if g.side[v] == "U"]
    w = [v for v in range(g.n) if g.side[v] == "V"]
    gu, gw = g.subgraph(u), g.subgraph(w)
    return sorted(gu.degrees()) == sorted(gw.degrees()) and gu.num_edges == gw.num_edges


__all__ = [
    "PASS", "FAIL", "INCONCLUSIVE", "CliqueWitness", "CliqueResult", "max_clique", "has_clique",
    "FreenessReport", "verify_freeness", "IndependenceReport", "alpha_r_bounds", "beta_hat",
    "independence_bound", "maximal_cliques", "cliques_in_hyperedges", "base_independence_check",
    "shadow_graph", "Graph",
]
