"""Slow, obviously-correct reference implementations used only by the tests."""
import math
from itertools import combinations

import numpy as np


def clique_number_brute(n, edges):
    """Largest clique and the lexicographically least one of that size.

    Enumerates every clique by extending with larger vertices only, so each
    clique is visited exactly once; no pruning of any kind.
    """
    nbr = [set() for _ in range(n)]
    for u, v in edges:
        nbr[u].add(v)
        nbr[v].add(u)
    best = [0, ()]

    def extend(clique, cand):
        if len(clique) > best[0] or (len(clique) == best[0] and clique < best[1]):
            best[0], best[1] = len(clique), clique
        for v in sorted(cand):
            extend(clique + (v,), {w for w in cand if w > v and w in nbr[v]})

    extend((), set(range(n)))
    return best[0], best[1]


def has_k_clique(vertices, adj, k):
    return any(all((a, b) in adj for a, b in combinations(c, 2)) for c in combinations(vertices, k))


def alpha_r_brute(n, edges, r):
    adj = {(min(u, v), max(u, v)) for u, v in edges}
    for size in range(n, 0, -1):
        for cand in combinations(range(n), size):
            if not has_k_clique(cand, adj, r):
                return size
    return 0


def cap_s2(radius):
    """S^2: normalized cap area (1 - cos phi) / 2."""
    c = 1 - radius ** 2 / 2
    return (1 - c) / 2


def cap_s3(radius):
    """S^3: normalized cap volume (phi - sin phi cos phi) / pi."""
    c = 1 - radius ** 2 / 2
    phi = math.acos(max(-1.0, min(1.0, c)))
    return (phi - math.sin(phi) * math.cos(phi)) / math.pi


def cap_mc(k, radius, samples, seed):
    """Direct sampling: fraction of uniform points within ``radius`` of e_0."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((samples, k + 1))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    e0 = np.zeros(k + 1)
    e0[0] = 1.0
    d = np.linalg.norm(x - e0, axis=1)
    p = float(np.mean(d <= radius))
    return p, math.sqrt(max(p * (1 - p), 1e-12) / samples)


def antipodal_chain(rng, k, length, a):
    """x_1..x_length on S^k with every step at distance >= 2 - a."""
    x = rng.standard_normal(k + 1)
    x /= np.linalg.norm(x)
    pts = [x]
    # d(x, y) = 2 cos(delta / 2) for y at angle delta from -x
    delta_max = 2 * math.acos(1 - a / 2)
    for _ in range(length - 1):
        base = -pts[-1]
        w = rng.standard_normal(k + 1)
        w -= w.dot(base) * base
        w /= np.linalg.norm(w)
        delta = rng.uniform(0, delta_max) * 0.999
        y = math.cos(delta) * base + math.sin(delta) * w
        pts.append(y / np.linalg.norm(y))
    return np.array(pts)
