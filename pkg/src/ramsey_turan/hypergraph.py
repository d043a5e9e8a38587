"""r-uniform hypergraphs on tuples of sphere points, and their blow-ups.

The base hypergraph has one vertex per ell-tuple of cell representatives
(vertex id = the tuple read as a base-z number). An r-set is a hyperedge
when its members can be assigned to the roles of the auxiliary bipartite
graphs so that every bipartite edge ij of B_a joins almost antipodal
points in coordinate a.

The blow-up replaces each base vertex by a fiber of t copies, samples
transversal copies of the base edges and deletes edges until no pair of
edges shares two vertices and no short Berge cycle remains.
"""
from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import comb

import numpy as np

from .errors import DomainError, ResourceLimitError
from .sphere import SLACK, as_points, distance_matrix


@dataclass
class Hypergraph:
    rank: int
    num_vertices: int
    edges: list  # sorted vertex-id tuples
    witnesses: dict = field(default_factory=dict)  # edge -> vertex id per role
    tuples: np.ndarray | None = None  # (num_vertices, ell) cell indices, base only

    def __post_init__(self):
        self.edges = [tuple(sorted(e)) for e in self.edges]

    @property
    def num_edges(self):
        return len(self.edges)

    def incidence(self):
        inc = defaultdict(list)
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    def to_text(self, blowup=None):
        lines = [f"h {self.rank} {self.num_vertices} {self.num_edges}"]
        lines += [" ".join(str(v) for v in e) for e in sorted(self.edges)]
        if blowup is not None:
            lines += [f"x {b} {blowup.xi[b]}" for b in range(len(blowup.xi))]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        """Parse the line format; returns ``(hypergraph, blowup_or_None)``."""
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0][0] != "h":
            raise ValueError("missing 'h <rank> <num_vertices> <num_edges>' header")
        rank, nv, ne = (int(v) for v in rows[0][1:4])
        edges, xi = [], {}
        for row in rows[1:]:
            if row[0] == "x":
                xi[int(row[1])] = int(row[2])
            else:
                edges.append(tuple(int(v) for v in row))
        if len(edges) != ne:
            raise ValueError(f"header announces {ne} edges, found {len(edges)}")
        if any(len(e) != rank for e in edges):
            raise ValueError("edge of wrong size")
        h = cls(rank, nv, edges)
        bmap = None
        if xi:
            xs = [xi[b] for b in range(len(xi))]
            t = len(xs) // max(1, len(set(xs)))
            bmap = BlowupMap(t, xs)
        return h, bmap


@dataclass
class BlowupMap:
    fiber_size: int
    xi: list  # blown vertex id -> base vertex id

    def fiber(self, base):
        t = self.fiber_size
        return list(range(base * t, base * t + t))

    def base_edge(self, edge):
        return tuple(sorted(self.xi[v] for v in edge))


# ------------------------------------------------------------ tuple vertices

def tuple_of(vertex, z, ell):
    out = []
    for _ in range(ell):
        vertex, c = divmod(vertex, z)
        out.append(c)
    return tuple(reversed(out))


def vertex_of(tup, z):
    v = 0
    for c in tup:
        v = v * z + c
    return v


def near_antipodal(points, theta):
    """Boolean matrix of pairs at distance > 2 - theta (with a small safety slack)."""
    return distance_matrix(points) > 2.0 - theta + SLACK


def _role_constraints(bs, r):
    """cons[i][j]: coordinates a (0-based) where roles i and j sit on opposite sides of B_a."""
    cons = [[[] for _ in range(r)] for _ in range(r)]
    for a, b in enumerate(bs):
        for u in b.part0:
            for v in b.part1:
                cons[u][v].append(a)
                cons[v][u].append(a)
    return cons


def witness_ordering(tuple_set, bs, theta, points):
    """Lexicographically least role assignment for an r-set of tuples, or None.

    Returns ``perm`` with ``perm[i]`` the position in ``tuple_set`` of the
    member playing role ``i``.
    """
    tuples = [tuple(t) for t in tuple_set]
    r = len(tuples)
    if len(set(tuples)) != r:
        raise DomainError("tuple_set must hold r distinct tuples")
    near = near_antipodal(points, theta)
    cons = _role_constraints(bs, r)
    chosen = []
    used = [False] * r

    def ok(role, pos):
        x = tuples[pos]
        for prev, ppos in enumerate(chosen):
            y = tuples[ppos]
            for a in cons[prev][role]:
                if not near[y[a], x[a]]:
                    return False
        return True

    def rec(role):
        if role == r:
            return True
        for pos in range(r):
            if not used[pos] and ok(role, pos):
                used[pos] = True
                chosen.append(pos)
                if rec(role + 1):
                    return True
                chosen.pop()
                used[pos] = False
        return False

    return tuple(chosen) if rec(0) else None


def _role_order(cons, r):
    order = [0]
    rest = set(range(1, r))
    while rest:
        nxt = max(sorted(rest), key=lambda j: sum(bool(cons[i][j]) for i in order))
        order.append(nxt)
        rest.remove(nxt)
    return order


def build_base_hypergraph(points, ell, bs, theta, max_vertices=400, max_candidates=10**8):
    """All r-sets of ell-tuples admitting a witness ordering, with lex-least witnesses."""
    pts = as_points(points)
    z = pts.shape[0]
    r = sum(len(b.part0) + len(b.part1) for b in bs[:1])
    if len(bs) != ell:
        raise DomainError(f"expected {ell} bipartite graphs, got {len(bs)}")
    nv = z ** ell
    if nv > max_vertices or comb(nv, r) > max_candidates:
        raise ResourceLimitError(
            f"z^ell={nv} vertices and C({nv},{r})={comb(nv, r)} candidate sets exceed the caps "
            f"({max_vertices}, {max_candidates}); use a smaller z, ell or r")
    near = near_antipodal(pts, theta)
    near_sets = [np.flatnonzero(near[p]).tolist() for p in range(z)]
    everything = list(range(z))
    cons = _role_constraints(bs, r)
    labels = {}
    for b in bs:
        for v in b.part0:
            labels.setdefault(v, []).append(0)
        for v in b.part1:
            labels.setdefault(v, []).append(1)
    cls = [tuple(labels[v]) for v in range(r)]
    order = _role_order(cons, r)
    weights = [z ** (ell - 1 - a) for a in range(ell)]
    assign = [None] * r
    tup = [None] * r
    best = {}

    def rec(step):
        if step == r:
            key = tuple(sorted(assign))
            w = tuple(assign)
            if key not in best or w < best[key]:
                best[key] = w
            return
        role = order[step]
        allowed = []
        for a in range(ell):
            s = None
            for prev in order[:step]:
                if a in cons[prev][role]:
                    cand = near_sets[tup[prev][a]]
                    s = set(cand) if s is None else s.intersection(cand)
            allowed.append(everything if s is None else sorted(s))
        # roles of one class are interchangeable: keep their ids increasing
        floor = -1
        for prev in order[:step]:
            if cls[prev] == cls[role] and prev < role:
                floor = max(floor, assign[prev])
        ceiling = nv
        for prev in order[:step]:
            if cls[prev] == cls[role] and prev > role:
                ceiling = min(ceiling, assign[prev])
        taken = set(a for a in assign if a is not None)
        for combo in product(*allowed):
            vid = sum(c * w for c, w in zip(combo, weights))
            if vid <= floor or vid >= ceiling or vid in taken:
                continue
            assign[role] = vid
            tup[role] = combo
            rec(step + 1)
            assign[role] = None
            tup[role] = None

    rec(0)
    edges = sorted(best)
    tuples = np.array([tuple_of(v, z, ell) for v in range(nv)], dtype=np.int64).reshape(nv, ell)
    return Hypergraph(r, nv, edges, {e: best[e] for e in edges}, tuples)


def brute_force_hypergraph(points, ell, bs, theta):
    """Reference edge set: every r-subset against every role permutation."""
    pts = as_points(points)
    z = pts.shape[0]
    near = near_antipodal(pts, theta)
    r = len(bs[0].part0) + len(bs[0].part1)
    pairs = [(i, j, a) for a, b in enumerate(bs) for i in b.part0 for j in b.part1]
    nv = z ** ell
    tups = [tuple_of(v, z, ell) for v in range(nv)]
    edges = []
    for cand in combinations(range(nv), r):
        for perm in permutations(cand):
            if all(near[tups[perm[i]][a], tups[perm[j]][a]] for i, j, a in pairs):
                edges.append(cand)
                break
    return edges


def revalidate_witness(h, edge, bs, theta, points):
    """True when the stored role assignment of ``edge`` meets every distance test."""
    w = h.witnesses[edge]
    if tuple(sorted(w)) != tuple(edge):
        return False
    near = near_antipodal(points, theta)
    for a, b in enumerate(bs):
        for i in b.part0:
            for j in b.part1:
                if not near[h.tuples[w[i]][a], h.tuples[w[j]][a]]:
                    return False
    return True


# ------------------------------------------------------------- forbidden scan

@dataclass(frozen=True)
class Violation:
    kind: str  # "pair" or "berge"
    length: int  # number of edges m
    edges: tuple  # edge indices into h.edges
    vertices: int  # v, vertex count of the sub-configuration
    value: float  # v + (1 + gamma - r)(m - 1); forbidden when < r


def _violation(h, idx, gamma, r, kind):
    verts = set()
    for i in idx:
        verts.update(h.edges[i])
    m = len(idx)
    v = len(verts)
    return Violation(kind, m, tuple(sorted(idx)), v, v + (1 + gamma - r) * (m - 1))


def forbidden_inequality(v, m, gamma, r):
    return v + (1 + gamma - r) * (m - 1) < r


def berge_limit(scan_order, gamma):
    return min(scan_order, math.ceil(1.0 / gamma))


def _pair_index(edges):
    idx = defaultdict(list)
    for i, e in enumerate(edges):
        for a, b in combinations(e, 2):
            idx[(a, b)].append(i)
    return idx


def _shared_pairs(h):
    out = set()
    for bucket in _pair_index(h.edges).values():
        for i, j in combinations(bucket, 2):
            out.add((i, j))
    return out


def _berge_cycles(h, m_max):
    """Edge sets of Berge cycles of length 3..m_max (distinct vertices, distinct edges)."""
    found = set()
    if m_max < 3:
        return found
    inc = h.incidence()
    edges = h.edges
    # 2-paths a -e1- b -e2- c grouped by the unordered end pair
    paths = defaultdict(list)
    for b, es in inc.items():
        for e1, e2 in combinations(es, 2):
            for a in edges[e1]:
                if a == b:
                    continue
                for c in edges[e2]:
                    if c == b or c == a:
                        continue
                    if a < c:
                        paths[(a, c)].append((e1, b, e2))
                    else:
                        paths[(c, a)].append((e2, b, e1))
    pair_edges = _pair_index(edges)
    for (a, c), lst in paths.items():
        closing = pair_edges.get((a, c), ())
        for e1, b, e2 in lst:
            for e3 in closing:
                if e3 != e1 and e3 != e2:
                    found.add(frozenset((e1, e2, e3)))
        if m_max >= 4:
            for (e1, b, e2), (f1, d, f2) in combinations(lst, 2):
                if b != d and len({e1, e2, f1, f2}) == 4:
                    found.add(frozenset((e1, e2, f1, f2)))
    if m_max >= 5:
        found |= _long_berge_cycles(h, inc, 5, m_max)
    return found


def _long_berge_cycles(h, inc, m_lo, m_hi):
    """Generic DFS for Berge cycles of length m_lo..m_hi rooted at their smallest edge."""
    edges = h.edges
    found = set()
    for e0 in range(len(edges)):
        for start, v1 in permutations(edges[e0], 2):
            stack = [(v1, [e0], [start, v1])]
            while stack:
                v, es, vs = stack.pop()
                for e in inc[v]:
                    if e <= e0 or e in es:
                        continue
                    m = len(es) + 1
                    if m >= m_lo and start in edges[e] and start != v:
                        found.add(frozenset(es + [e]))
                    if m < m_hi:
                        for w in edges[e]:
                            if w not in vs:
                                stack.append((w, es + [e], vs + [w]))
    return found


def forbidden_scan(h, scan_order=4, gamma=0.25, r=None):
    """Edge pairs sharing >= 2 vertices and Berge cycles up to the scan length."""
    r = h.rank if r is None else r
    out = [_violation(h, pair, gamma, r, "pair") for pair in sorted(_shared_pairs(h))]
    for cyc in sorted(_berge_cycles(h, berge_limit(scan_order, gamma)), key=sorted):
        viol = _violation(h, tuple(cyc), gamma, r, "berge")
        out.append(viol)
    return out


# ----------------------------------------------------------------- blow-up

def _greedy_delete(n_edges, violations, base_of, copies):
    """Hit every violation, removing the edge in most live violations first.

    Last surviving copies of a base edge are only removed when a violation
    consists of nothing else.
    """
    member = defaultdict(list)
    for vi, viol in enumerate(violations):
        for e in viol:
            member[e].append(vi)
    alive_v = [True] * len(violations)
    count = {e: len(vs) for e, vs in member.items()}
    removed = set()
    def key(e):
        return (int(copies[base_of[e]] <= 1), -count[e], e)

    heap = [key(e) for e in count]
    heapq.heapify(heap)
    while heap:
        item = heapq.heappop(heap)
        e = item[2]
        if e in removed or count[e] == 0:
            continue
        if item != key(e):
            heapq.heappush(heap, key(e))
            continue
        removed.add(e)
        copies[base_of[e]] -= 1
        for vi in member[e]:
            if alive_v[vi]:
                alive_v[vi] = False
                for f in violations[vi]:
                    if f not in removed:
                        count[f] -= 1
    return removed


def random_blowup(h, t, gamma, r=None, scan_order=4, seed=0, p=None, max_retries=16,
                  allow_loss=False):
    """Blow up ``h`` into fibers of size t and delete edges until the scan is clean.

    Returns ``(blown, blowup_map, info)``.  A base edge that loses every copy
    triggers a retry with the next derived seed; with ``allow_loss`` the first
    attempt is returned instead and the lost base edges are listed in
    ``info["lost"]``.
    """
    r = h.rank if r is None else r
    if t < 1:
        raise DomainError("t must be >= 1")
    if not (0 < gamma < 1):
        raise DomainError("gamma must lie in (0, 1)")
    p = t ** (-(r - 1) / 2.0) if p is None else p
    xi = [v // t for v in range(h.num_vertices * t)]
    bmap = BlowupMap(t, xi)
    root = np.random.SeedSequence(seed)
    m_max = berge_limit(scan_order, gamma)
    last = None
    for attempt, ss in enumerate(root.spawn(max_retries)):
        rng = np.random.default_rng(ss)
        cand, base_of = [], []
        for bi, e in enumerate(h.edges):
            keep = rng.random(t ** r) < p
            for flag, offs in zip(keep, product(range(t), repeat=r)):
                if flag:
                    cand.append(tuple(v * t + o for v, o in zip(e, offs)))
                    base_of.append(bi)
        copies = np.bincount(np.asarray(base_of, dtype=np.int64), minlength=h.num_edges).tolist()
        # pairs first, then cycles on the now linear remainder
        pair_viol = [v for v in _shared_pairs(Hypergraph(r, len(xi), cand))]
        gone = _greedy_delete(len(cand), pair_viol, base_of, copies)
        keep_idx = [i for i in range(len(cand)) if i not in gone]
        mid = Hypergraph(r, len(xi), [cand[i] for i in keep_idx])
        mid_base = [base_of[i] for i in keep_idx]
        cyc = [tuple(c) for c in _berge_cycles(mid, m_max)]
        gone2 = _greedy_delete(len(keep_idx), cyc, mid_base, copies)
        final = [mid.edges[i] for i in range(len(keep_idx)) if i not in gone2]
        final_base = [mid_base[i] for i in range(len(keep_idx)) if i not in gone2]
        lost = [h.edges[b] for b in range(h.num_edges) if copies[b] <= 0]
        last = lost
        if lost and not allow_loss:
            continue
        order = sorted(range(len(final)), key=lambda i: final[i])
        blown = Hypergraph(r, len(xi), [final[i] for i in order])
        info = {
            "attempt": attempt,
            "keep_probability": p,
            "candidates": len(cand),
            "pair_violations": len(pair_viol),
            "cycle_violations": len(cyc),
            "edges": blown.num_edges,
            "berge_scan_length": m_max,
            "base_of": [final_base[i] for i in order],
            "lost": lost,
        }
        return blown, bmap, info
    raise ResourceLimitError(
        f"every copy of {len(last)} base edge(s) was deleted in all {max_retries} attempts "
        f"(e.g. {last[:3]}); increase t or lower the keep probability", best=last)


def supersaturation_check(base, blown, bmap, gamma, samples=0, seed=0):
    """Fraction of fiber-subset checks that contain a surviving transversal edge."""
    t = bmap.fiber_size
    size = max(1, math.ceil(gamma * t - 1e-12))
    by_base = defaultdict(list)
    for e in blown.edges:
        by_base[bmap.base_edge(e)].append(e)
    checks = passed = 0
    failing = []
    for e in base.edges:
        checks += 1
        if by_base.get(tuple(e)):
            passed += 1
        else:
            failing.append(tuple(e))
    rng = np.random.default_rng(seed)
    sample_fail = 0
    for _ in range(samples if base.num_edges else 0):
        e = base.edges[int(rng.integers(base.num_edges))]
        subsets = {v: set(rng.choice(bmap.fiber(v), size=size, replace=False).tolist()) for v in e}
        ok = any(all(u in subsets[bmap.xi[u]] for u in f) for f in by_base.get(tuple(e), ()))
        checks += 1
        passed += ok
        sample_fail += not ok
    return {
        "fraction": passed / checks if checks else 1.0,
        "checks": checks,
        "failing_edges": failing,
        "sample_failures": sample_fail,
        "subset_size": size,
    }
