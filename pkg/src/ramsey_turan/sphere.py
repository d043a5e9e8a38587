"""Geometry on the unit sphere S^k in R^(k+1).

Cap measures, the (P1)/(P2) parameter search, a recursive zonal
equal-area partition, and the distance facts about almost antipodal
points that the construction leans on.

All measures are normalized so the whole sphere has measure 1. A cap of
Euclidean radius ``d`` around a center ``c`` has polar angle ``phi`` with
``cos(phi) = 1 - d**2 / 2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.special import betainc, betaincinv, gammaln

from .errors import DomainError, PreconditionError, ResourceLimitError

SQRT2 = math.sqrt(2.0)
# Guard against float ties in strict distance comparisons.
SLACK = 1e-9


@dataclass(frozen=True)
class SpherePoint:
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.ndim != 1 or c.size < 2:
            raise DomainError("a sphere point needs a 1-d coordinate vector of length >= 2")
        if abs(np.linalg.norm(c) - 1.0) > 1e-9:
            raise DomainError(f"point is not on the unit sphere (norm {np.linalg.norm(c)!r})")
        object.__setattr__(self, "coords", c)

    @property
    def k(self):
        return self.coords.size - 1

    def antipode(self):
        return SpherePoint(-self.coords)

    def distance(self, other):
        return float(np.linalg.norm(self.coords - np.asarray(getattr(other, "coords", other))))


@dataclass(frozen=True)
class SphereParams:
    alpha: float
    beta: float
    epsilon: float
    k: int
    r: int
    theta: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "theta", self.epsilon / math.sqrt(self.k))

    @property
    def p1_radius(self):
        # theta may be set to exactly sqrt(2); keep rounding from going negative
        return max(SQRT2 - self.theta, 0.0)

    @property
    def p2_diameter(self):
        return 2.0 - self.epsilon / (2 * self.r ** 2 * math.sqrt(self.k))

    def p1_measure(self):
        return cap_measure(self.k, self.p1_radius)

    def p2_measure(self):
        return cap_measure_by_diameter(self.k, self.p2_diameter)

    def p1_holds(self):
        return self.p1_measure() >= 0.5 - self.alpha

    def p2_holds(self):
        return self.p2_measure() <= self.beta


@dataclass
class SphereCell:
    index: int
    representative: np.ndarray
    measure: float
    diameter_bound: float
    # (lo, hi) angle interval per recursion level; deeper levels unconstrained.
    bounds: tuple = ()

    def contains(self, x, tol=1e-12):
        ang = spherical_angles(np.atleast_2d(x))
        return bool(_in_bounds(ang, self.bounds, tol)[0])


def as_points(points):
    """Stack SpherePoints or coordinate rows into an (m, k+1) float array."""
    if isinstance(points, np.ndarray):
        return np.atleast_2d(np.asarray(points, dtype=float))
    rows = [getattr(p, "coords", p) for p in points]
    return np.atleast_2d(np.asarray(rows, dtype=float))


def distance_matrix(a, b=None):
    a = as_points(a)
    b = a if b is None else as_points(b)
    g = np.clip(a @ b.T, -1.0, 1.0)
    return np.sqrt(np.maximum(2.0 - 2.0 * g, 0.0))


# ---------------------------------------------------------------- cap measures

def _cap_fraction_from_cos(k, c):
    """Normalized measure of {x : <x, e> >= c} on S^k."""
    c = float(np.clip(c, -1.0, 1.0))
    half = 0.5 * float(betainc(k / 2.0, 0.5, 1.0 - c * c))
    return half if c >= 0 else 1.0 - half


def cap_measure(k, radius):
    """Normalized measure of the cap of Euclidean radius ``radius`` on S^k."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not (0.0 <= radius <= 2.0):
        raise DomainError(f"radius must lie in [0, 2], got {radius}")
    if radius == 0.0:
        return 0.0
    if radius == 2.0:
        return 1.0
    return _cap_fraction_from_cos(k, 1.0 - radius * radius / 2.0)


def cap_measure_by_diameter(k, diameter):
    """Measure of a cap (polar angle <= pi/2) whose Euclidean diameter is ``diameter``.

    Such a cap has polar angle ``asin(diameter / 2)``; caps wider than a
    hemisphere all have diameter 2, so diameter 2 maps to the hemisphere.
    """
    if not (0.0 <= diameter <= 2.0):
        raise DomainError(f"diameter must lie in [0, 2], got {diameter}")
    s2 = (diameter / 2.0) ** 2  # sin^2 of the polar angle
    return 0.5 * float(betainc(k / 2.0, 0.5, s2))


def cap_measure_monte_carlo(k, radius, samples=10**6, seed=0, batch=200_000):
    """Monte Carlo estimate of ``cap_measure`` and its standard error."""
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    # squared distance to e_0 is 2 - 2 x_0
    thresh = 1.0 - radius * radius / 2.0
    while done < samples:
        m = min(batch, samples - done)
        x = rng.standard_normal((m, k + 1))
        x0 = x[:, 0] / np.linalg.norm(x, axis=1)
        hits += int(np.count_nonzero(x0 >= thresh))
        done += m
    p = hits / samples
    return p, math.sqrt(max(p * (1 - p), 1e-300) / samples)


def select_sphere_params(alpha, beta, r, k_max, k_min=3, eps_steps=21):
    """Smallest k (then largest epsilon on the grid 2^0..2^-20) meeting (P1) and (P2)."""
    if not (0 < alpha < 1 and 0 < beta < 1):
        raise DomainError("alpha and beta must lie in (0, 1)")
    if r < 2:
        raise DomainError("r must be >= 2")
    best = None
    for k in range(k_min, k_max + 1):
        for j in range(eps_steps):
            p = SphereParams(alpha, beta, 2.0 ** -j, k, r)
            a_got = 0.5 - p.p1_measure()
            b_got = p.p2_measure()
            if a_got <= alpha and b_got <= beta:
                return p
            score = max(a_got / alpha, b_got / beta)
            if best is None or score < best[0]:
                best = (score, {"alpha": a_got, "beta": b_got, "epsilon": p.epsilon, "k": k})
    raise ResourceLimitError(
        f"no (epsilon, k) with k <= {k_max} satisfies P1/P2; best achieved "
        f"alpha'={best[1]['alpha']:.4g}, beta'={best[1]['beta']:.4g} "
        f"at epsilon={best[1]['epsilon']:.4g}, k={best[1]['k']}",
        best=best[1],
    )


# ------------------------------------------------------- equal-area partition

def spherical_angles(x):
    """Hyperspherical angles of the rows of ``x``: k-1 polar angles then an azimuth."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    m, dim = x.shape
    k = dim - 1
    ang = np.empty((m, k))
    # tail norms |x[j:]|
    tail = np.sqrt(np.cumsum((x[:, ::-1] ** 2), axis=1)[:, ::-1])
    for j in range(k - 1):
        with np.errstate(invalid="ignore", divide="ignore"):
            c = np.where(tail[:, j] > 0, x[:, j] / tail[:, j], 1.0)
        ang[:, j] = np.arccos(np.clip(c, -1.0, 1.0))
    ang[:, k - 1] = np.mod(np.arctan2(x[:, k], x[:, k - 1]), 2 * np.pi)
    return ang


def from_angles(ang):
    ang = np.atleast_2d(np.asarray(ang, dtype=float))
    m, k = ang.shape
    x = np.empty((m, k + 1))
    s = np.ones(m)
    for j in range(k - 1):
        x[:, j] = s * np.cos(ang[:, j])
        s = s * np.sin(ang[:, j])
    x[:, k - 1] = s * np.cos(ang[:, k - 1])
    x[:, k] = s * np.sin(ang[:, k - 1])
    return x


def _in_bounds(ang, bounds, tol=0.0):
    ok = np.ones(ang.shape[0], dtype=bool)
    last = ang.shape[1] - 1
    for j, (lo, hi) in enumerate(bounds):
        a = ang[:, j]
        if j == last:
            ok &= (a >= lo - tol) & (a < hi + tol)
        elif hi >= math.pi:
            ok &= (a >= lo - tol) & (a <= hi + tol)
        else:
            ok &= (a >= lo - tol) & (a < hi + tol)
    return ok


def _zone_fraction(d, c):
    """Normalized measure of the polar cap of colatitude ``c`` on S^d."""
    if c <= 0:
        return 0.0
    if c >= math.pi:
        return 1.0
    return _cap_fraction_from_cos(d, math.cos(c))


def _colat_of_fraction(d, m):
    if m <= 0:
        return 0.0
    if m >= 1:
        return math.pi
    if m <= 0.5:
        return math.asin(math.sqrt(float(betaincinv(d / 2.0, 0.5, 2 * m))))
    return math.pi - _colat_of_fraction(d, 1 - m)


def _log_sphere_area(d):
    return math.log(2.0) + (d + 1) / 2.0 * math.log(math.pi) - gammaln((d + 1) / 2.0)


def _eq_caps(d, n):
    """Colatitude boundaries and region counts of the zonal split of S^d into n parts."""
    if n == 1:
        return [0.0, math.pi], [1]
    if n == 2:
        return [0.0, math.pi / 2, math.pi], [1, 1]
    ideal = 1.0 / n
    c_polar = _colat_of_fraction(d, ideal)
    collar_angle = math.exp((_log_sphere_area(d) - math.log(n)) / d)
    n_collars = max(1, int(round((math.pi - 2 * c_polar) / collar_angle)))
    fitting = (math.pi - 2 * c_polar) / n_collars
    ideal_counts = [1.0]
    for i in range(n_collars):
        lo = c_polar + i * fitting
        hi = c_polar + (i + 1) * fitting
        ideal_counts.append((_zone_fraction(d, hi) - _zone_fraction(d, lo)) / ideal)
    ideal_counts.append(1.0)
    counts = []
    carry = 0.0
    for v in ideal_counts:
        c = int(math.floor(v + carry + 0.5))
        carry += v - c
        counts.append(c)
    # boundaries placed so that every zone holds exactly its region share
    colats = [0.0]
    running = 0
    for c in counts[:-1]:
        running += c
        colats.append(_colat_of_fraction(d, running * ideal))
    colats.append(math.pi)
    keep = [i for i, c in enumerate(counts) if c > 0]
    return [colats[0]] + [colats[i + 1] for i in keep], [counts[i] for i in keep]


def _eq_regions(d, n):
    """Angle-interval boxes for the recursive zonal partition of S^d into n regions."""
    if n == 1:
        return [()]
    if d == 1:
        step = 2 * math.pi / n
        return [((i * step, (i + 1) * step),) for i in range(n)]
    colats, counts = _eq_caps(d, n)
    regions = []
    for zi, cnt in enumerate(counts):
        lo, hi = colats[zi], colats[zi + 1]
        for sub in _eq_regions(d - 1, cnt):
            regions.append(((lo, hi),) + sub)
    return regions


def _box_measure(k, bounds):
    m = 1.0
    for j, (lo, hi) in enumerate(bounds):
        if j == k - 1:
            m *= (hi - lo) / (2 * math.pi)
        else:
            d = k - j
            m *= _zone_fraction(d, hi) - _zone_fraction(d, lo)
    return m


def _box_representative(k, bounds):
    ang = np.full(k, math.pi / 2)
    ang[k - 1] = 0.0
    for j, (lo, hi) in enumerate(bounds):
        if j == k - 1:
            ang[j] = 0.5 * (lo + hi)
        elif lo <= 0.0:
            ang[j] = 0.0
            break
        elif hi >= math.pi:
            ang[j] = math.pi
            break
        else:
            ang[j] = 0.5 * (lo + hi)
    x = from_angles(ang[None, :])[0]
    return x / np.linalg.norm(x)


def _box_samples(k, bounds, rng, count):
    """Points of the box: random corners plus uniform-in-angle interior points."""
    lo = np.zeros(k)
    hi = np.full(k, math.pi)
    hi[k - 1] = 2 * math.pi
    for j, (a, b) in enumerate(bounds):
        lo[j], hi[j] = a, b
    half = count // 2
    corners = np.where(rng.random((half, k)) < 0.5, lo, hi)
    inner = lo + (hi - lo) * rng.random((count - half, k))
    # free deeper levels: also include axis-aligned antipodal pairs
    extra = []
    depth = len(bounds)
    if depth < k:
        base = np.where(rng.random(k) < 0.5, lo, hi)
        for sign_ang in (0.0, math.pi):
            a = base.copy()
            a[depth:] = math.pi / 2
            a[k - 1] = sign_ang
            if depth == k - 1:
                a[depth] = sign_ang
            else:
                a[depth] = 0.0 if sign_ang == 0.0 else math.pi
            extra.append(a)
    pts = np.vstack([corners, inner] + ([np.array(extra)] if extra else []))
    return from_angles(pts)


def _max_pairwise(x):
    g = x @ x.T
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * g.min())))


@dataclass
class SpherePartition:
    """The cells of a partition plus vectorized point location."""

    k: int
    cells: list

    @property
    def z(self):
        return len(self.cells)

    @property
    def points(self):
        return np.array([c.representative for c in self.cells])

    @property
    def max_diameter(self):
        return max(c.diameter_bound for c in self.cells)

    def locate(self, x):
        """Index of the cell containing each row of ``x``."""
        ang = spherical_angles(x)
        out = np.full(ang.shape[0], -1, dtype=np.int64)
        for c in self.cells:
            hit = (out < 0) & _in_bounds(ang, c.bounds)
            out[hit] = c.index
        return out

    def to_csv(self, path):
        import csv

        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["cell_index"] + [f"x{i}" for i in range(self.k + 1)] + ["measure", "diameter"])
            for c in self.cells:
                w.writerow([c.index] + [repr(float(v)) for v in c.representative]
                           + [repr(c.measure), repr(c.diameter_bound)])


def build_partition(k, z, diameter_target=None, seed=0, diameter_samples=64):
    """Recursive zonal equal-area partition of S^k into ``z`` cells."""
    if z < 2:
        raise DomainError(f"z must be >= 2, got {z}")
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    cells = []
    for i, bounds in enumerate(_eq_regions(k, z)):
        rep = _box_representative(k, bounds)
        if len(bounds) == 1 and bounds[0][0] == 0.0 and bounds[0][1] <= math.pi / 2:
            diam = 2.0 * math.sin(bounds[0][1])
        elif len(bounds) == 1 and bounds[0][1] >= math.pi and bounds[0][0] >= math.pi / 2:
            diam = 2.0 * math.sin(bounds[0][0])
        else:
            pts = np.vstack([rep[None, :], _box_samples(k, bounds, rng, diameter_samples)])
            diam = _max_pairwise(pts)
        cells.append(SphereCell(i, rep, _box_measure(k, bounds), min(diam, 2.0), bounds))
    part = SpherePartition(k, cells)
    part.diameter_target = diameter_target
    part.target_met = diameter_target is None or part.max_diameter <= diameter_target
    return part


def partition_sphere(k, z, diameter_target=None, seed=0):
    """Cells of the equal-area partition; see ``build_partition`` for the full object."""
    return build_partition(k, z, diameter_target, seed).cells


# ------------------------------------------------------ antipodal distance checks

def chain_antipodal_amplify_check(points, a, h):
    """Check that a chain of almost antipodal steps gives d(x_1, x_2h) > 2 - 4h^2 a.

    Returns ``(holds, slack)`` where ``slack = d(x_1, x_2h) - (2 - 4 h^2 a)``.
    """
    if h < 1:
        raise PreconditionError("h must be a positive integer")
    if not (0 < a < 1.0 / (16 * h ** 4)):
        raise PreconditionError(f"a must lie in (0, 1/(16 h^4)) = (0, {1.0 / (16 * h ** 4)!r}), got {a!r}")
    x = as_points(points)
    if x.shape[0] < 2 * h:
        raise PreconditionError(f"need at least 2h = {2 * h} points, got {x.shape[0]}")
    steps = np.linalg.norm(x[1:2 * h] - x[:2 * h - 1], axis=1)
    for i, d in enumerate(steps):
        if d < 2.0 - a - SLACK:
            raise PreconditionError(f"d(x_{i + 1}, x_{i + 2}) = {d:.6g} < 2 - a", index=i)
    d_end = float(np.linalg.norm(x[0] - x[2 * h - 1]))
    slack = d_end - (2.0 - 4 * h * h * a)
    return slack > 0, slack


def rhombus_scan(points, gamma, trials=10**5, seed=0, exhaustive_limit=10**8):
    """Search for quadruples that no near-antipodal rhombus can form; expected to find none.

    A violation is ``(p1, p2, q1, q2)`` (indices into ``points``) with
    ``d(p1,p2) >= 2-gamma``, ``d(q1,q2) >= 2-gamma`` and all four cross
    distances ``<= sqrt(2) - gamma``.
    """
    if not (0 < gamma < 0.25):
        raise DomainError(f"gamma must lie in (0, 1/4), got {gamma}")
    x = as_points(points)
    n = x.shape[0]
    far = 2.0 - gamma
    near = SQRT2 - gamma
    out = []
    if n ** 4 <= exhaustive_limit:
        dm = distance_matrix(x)
        pairs = [(i, j) for i, j in combinations(range(n), 2) if dm[i, j] >= far]
        for (p1, p2), (q1, q2) in combinations(pairs, 2):
            if max(dm[p1, q1], dm[p1, q2], dm[p2, q1], dm[p2, q2]) <= near:
                out.append((p1, p2, q1, q2))
        return out
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, n, size=(trials, 4))
    p1, p2, q1, q2 = (x[idx[:, c]] for c in range(4))

    def d(u, v):
        return np.linalg.norm(u - v, axis=1)

    bad = ((d(p1, p2) >= far) & (d(q1, q2) >= far) & (d(p1, q1) <= near)
           & (d(p1, q2) <= near) & (d(p2, q1) <= near) & (d(p2, q2) <= near))
    return [tuple(int(v) for v in row) for row in idx[bad]]


def find_antipodal_path(cells, theta_fine):
    """Greedy almost antipodal path: one point from each of A_1..A_m.

    Returns ``(path, None)`` on success or ``(None, info)`` where ``info``
    names the failing step and the best distance found there.
    """
    sets = [as_points(c) for c in cells]
    for i, s in enumerate(sets):
        if s.shape[0] == 0 or s.size == 0:
            raise DomainError(f"A_{i + 1} is empty")
    path = [sets[0][0]]
    for i in range(1, len(sets)):
        d = np.linalg.norm(sets[i] - path[-1], axis=1)
        j = int(np.argmax(d))
        if d[j] < 2.0 - theta_fine:
            return None, {"step": i, "best_distance": float(d[j]), "required": 2.0 - theta_fine}
        path.append(sets[i][j])
    return np.array(path), None


def bipartite_antipodal_witness(path_points, theta, edges, r=None):
    """Check d(p_i, p_j) > 2 - theta on the edges of a bipartite graph on path indices.

    ``edges`` holds 0-based index pairs; an index pair of equal parity is
    not an odd/even cross pair and is rejected. Requires consecutive
    distances >= 2 - theta / r^2 (``r`` defaults to the path length).
    """
    x = as_points(path_points)
    r = x.shape[0] if r is None else r
    need = 2.0 - theta / r ** 2
    for i in range(x.shape[0] - 1):
        d = float(np.linalg.norm(x[i] - x[i + 1]))
        if d < need - SLACK:
            raise PreconditionError(f"consecutive pair ({i}, {i + 1}) has distance {d:.6g} < {need:.6g}", index=i)
    for i, j in edges:
        if (i - j) % 2 == 0:
            raise PreconditionError(f"edge ({i}, {j}) joins indices of equal parity")
        if not float(np.linalg.norm(x[i] - x[j])) > 2.0 - theta:
            return False
    return True


def random_orthogonal(dim, seed=0):
    rng = np.random.default_rng(seed)
    q, rr = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(rr))


def sample_sphere(k, m, rng):
    x = rng.standard_normal((m, k + 1))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


__all__ = [
    "SpherePoint", "SphereParams", "SphereCell", "SpherePartition",
    "cap_measure", "cap_measure_by_diameter", "cap_measure_monte_carlo",
    "select_sphere_params", "partition_sphere", "build_partition",
    "chain_antipodal_amplify_check", "rhombus_scan", "find_antipodal_path",
    "bipartite_antipodal_witness", "distance_matrix", "as_points",
    "spherical_angles", "from_angles", "random_orthogonal", "sample_sphere",
]

