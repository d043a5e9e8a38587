"""Auxiliary combinatorics: the blown-up hypercube and its bipartite family.

Vertices of the blown-up cube are the roles ``0..r-1`` that a hyperedge's
members play; role ``v`` sits in the class with binary label
``labels[v]`` and lands on side ``labels[v][i]`` of the i-th bipartite
graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from .errors import DomainError, ResourceLimitError


def compute_ell(r, s):
    """Smallest ell >= 1 with 2**ell * (s - 1) >= r, and the density 2**(-ell-2)."""
    if s < 2 or s > r:
        raise DomainError(f"need 2 <= s <= r, got r={r}, s={s}")
    ell = 1
    while (2 ** ell) * (s - 1) < r:
        ell += 1
    return ell, Fraction(1, 2 ** (ell + 2))


def _label(bits):
    return "".join(str(b) for b in bits)


def _complement(label):
    return "".join("1" if c == "0" else "0" for c in label)


@dataclass
class BlownHypercube:
    ell: int
    s: int
    classes: dict  # label -> list of role ids
    discard_trace: list = field(default_factory=list)  # (step, label)

    @property
    def vertex_count(self):
        return sum(len(v) for v in self.classes.values())

    @property
    def labels(self):
        """Label of each role id."""
        out = {}
        for lab, verts in self.classes.items():
            for v in verts:
                out[v] = lab
        return [out[v] for v in range(self.vertex_count)]


@dataclass(frozen=True)
class BipartiteAux:
    index: int  # 1-based coordinate
    part0: frozenset
    part1: frozenset

    def edges(self):
        return [(min(a, b), max(a, b)) for a in self.part0 for b in self.part1]

    def side(self, v):
        return 0 if v in self.part0 else 1


def build_blown_hypercube(r, s, ell):
    if ell != compute_ell(r, s)[0]:
        raise DomainError(f"ell={ell} is inconsistent with (r={r}, s={s})")
    labels = [_label(b) for b in product((0, 1), repeat=ell)]
    size = {lab: s - 1 for lab in labels}
    to_drop = len(labels) * (s - 1) - r
    trace = []
    firsts = [lab for lab in labels if lab[0] == "0"]  # lex order of the first element

    def take(lab):
        size[lab] -= 1
        trace.append((len(trace) + 1, lab))

    pairs, odd = divmod(to_drop, 2)
    used = set()
    while pairs:
        progressed = False
        for lab in firsts:
            if not pairs:
                break
            comp = _complement(lab)
            if lab in used or comp in used or size[lab] == 0 or size[comp] == 0:
                continue
            take(lab)
            take(comp)
            used.update((lab, comp))
            pairs -= 1
            progressed = True
        if pairs and not progressed:
            if not used:
                raise DomainError("cannot discard enough vertices")
            used.clear()  # new round: a class may lose a second vertex
    if odd:
        top = max(size.values())
        lab = min(l for l in labels if size[l] == top)
        take(lab)
    classes = {}
    nxt = 0
    for lab in labels:
        classes[lab] = list(range(nxt, nxt + size[lab]))
        nxt += size[lab]
    return BlownHypercube(ell, s, classes, trace)


def build_bipartite_family(q):
    labels = q.labels
    out = []
    for i in range(q.ell):
        p0 = frozenset(v for v, lab in enumerate(labels) if lab[i] == "0")
        p1 = frozenset(v for v, lab in enumerate(labels) if lab[i] == "1")
        out.append(BipartiteAux(i + 1, p0, p1))
    return out


def union_adjacency(bs):
    """Adjacency sets of the union of the bipartite graphs."""
    verts = set()
    for b in bs:
        verts |= b.part0 | b.part1
    adj = {v: set() for v in verts}
    for b in bs:
        for u in b.part0:
            for v in b.part1:
                adj[u].add(v)
                adj[v].add(u)
    return adj


def alpha_union(bs, max_vertices=20):
    """Independence number of the union of the B_i, by subset enumeration."""
    if not bs:
        raise DomainError("empty bipartite family")
    adj = union_adjacency(bs)
    n = len(adj)
    if n > max_vertices:
        raise ResourceLimitError(f"exhaustive search limited to {max_vertices} vertices, got {n}")
    order = sorted(adj)
    for size in range(n, 0, -1):
        for cand in combinations(order, size):
            if all(v not in adj[u] for u, v in combinations(cand, 2)):
                return size
    return 0
