"""Weighted cluster-graph configurations and exact upper-bound arithmetic.

A configuration ``(K_t; a_1, ..., a_m)`` is a t-clique of the weighted
cluster graph in which m of the edges have weight at least ``a_i + eps``;
edges not listed only carry the trivial threshold 0.  Weights and
thresholds are Fractions and ``eps`` stays symbolic, so "at least a + eps"
versus "at most b + eps" is decided by comparing a and b exactly.

This is a checker, not a prover: a configuration that no rule recognises is
reported as ``not-derivable``, never as good.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, floor

from .errors import DomainError
from .hypercube import compute_ell

BAD = "bad"
NOT_DERIVABLE = "not-derivable"
NOT_APPLICABLE = "not-applicable"


def _q(x):
    if isinstance(x, float):
        # floats only enter through literals like 3.75; keep them exact
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class Configuration:
    t: int
    thresholds: tuple = ()

    def __post_init__(self):
        th = tuple(sorted(_q(a) for a in self.thresholds))
        object.__setattr__(self, "thresholds", th)
        if self.t < 2:
            raise DomainError("a configuration needs t >= 2")
        if len(th) > comb(self.t, 2):
            raise DomainError(f"K_{self.t} has only {comb(self.t, 2)} edges, got {len(th)} thresholds")
        if any(a < 0 or a > 1 for a in th):
            raise DomainError("thresholds must lie in [0, 1]")

    @classmethod
    def uniform(cls, t, a):
        return cls(t, (a,) * comb(t, 2))

    def padded(self):
        """All C(t,2) edge thresholds, unlisted edges at 0, ascending."""
        return (Fraction(0),) * (comb(self.t, 2) - len(self.thresholds)) + self.thresholds

    def __str__(self):
        if not self.thresholds:
            return f"(K_{self.t})"
        return f"(K_{self.t}; " + ", ".join(str(a) for a in self.thresholds) + ")"


@dataclass(frozen=True)
class Step:
    rule: str
    config: Configuration | None
    justification: str
    tight: bool = False


@dataclass
class BoundDerivation:
    r: int
    s: int
    steps: list = field(default_factory=list)
    final_bound: Fraction | None = None
    status: str = "ok"

    @property
    def axioms_used(self):
        return [st for st in self.steps if st.rule == "axiom"]

    def lines(self):
        out = []
        for i, st in enumerate(self.steps, 1):
            cfg = f" {st.config}" if st.config is not None else ""
            tight = " [tight]" if st.tight else ""
            out.append(f"{i}. {st.rule}{cfg}: {st.justification}{tight}")
        if self.final_bound is not None:
            out.append(f"bound = {self.final_bound}")
        return out


@dataclass(frozen=True)
class Classification:
    verdict: str
    rule: str | None
    detail: str

    @property
    def bad(self):
        return self.verdict == BAD


# ------------------------------------------------------------------ rules

def _check_rs(r, s):
    if not (isinstance(r, int) and isinstance(s, int)) or not 2 <= s <= r:
        raise DomainError(f"need integers 2 <= s <= r, got r={r}, s={s}")


def clique_rule(cfg, r, s):
    """(K_{s-a+1}; a/r, ..., a/r) is bad for every integer a >= 0.

    Applied to the whole clique (smallest threshold) and to its heaviest
    single edge, the two sub-cliques whose thresholds are known regardless of
    where the listed weights sit.
    """
    pad = cfg.padded()
    for size, thr in ((cfg.t, pad[0]), (2, pad[-1])):
        a = floor(r * thr)
        if size >= s - a + 1:
            return f"K_{size} with every edge above {a}/{r} (a={a}): needs only K_{s - a + 1}"
    return None


def triangle_rule(cfg, r, s):
    """(K_3; a/r, b/r, c/r) is bad for integer a >= 0 and b >= c with b + (a+1)c/r > s-1.

    For t > 3 the three smallest thresholds stand in for a triangle: any
    triangle of the clique dominates them.
    """
    if cfg.t < 3:
        return None
    tri = cfg.padded()[:3]
    for x, y, z in sorted(set(permutations(tri))):
        a = floor(r * x)
        b, c = r * y, r * z
        if b >= c and b + (a + 1) * c / r > s - 1:
            return f"a={a}, b={b}, c={c}: b + (a+1)c/r = {b + (a + 1) * c / r} > {s - 1}"
    return None


def closed_triangle_rule(cfg, r, s):
    """If 3(s-2) > r, a triangle with all three edges above (s-3)/r is bad."""
    if cfg.t < 3 or 3 * (s - 2) <= r:
        return None
    if cfg.padded()[0] * r >= s - 3:
        return f"3(s-2) = {3 * (s - 2)} > r = {r} and all edges at least {Fraction(s - 3, r)}"
    return None


# (12, 7): four bad configurations stated without proof; taken as axioms.
# Each entry (t, a) declares (K_t; a, ..., a) bad.
AXIOMS = {
    (12, 7): [(3, Fraction(375, 1200)), (4, Fraction(3, 12)), (5, Fraction(2, 12)), (6, Fraction(0))],
}


def _edge_cap_rule(cfg, r, s):
    """Derived: once the weight-degree chain closes, any edge above (s-3)/r is bad."""
    if 3 * (s - 2) <= r:
        return None
    if cfg.padded()[-1] * r >= s - 3:
        return f"edge above {Fraction(s - 3, r)} starts the weight-degree chain, which closes"
    return None


RULES = [
    ("clique-embedding", clique_rule),
    ("triangle-embedding", triangle_rule),
    ("closed-triangle", closed_triangle_rule),
]


def classify_configuration(cfg, r, s):
    """``bad`` with the first firing rule, else ``not-derivable``."""
    _check_rs(r, s)
    if not isinstance(cfg, Configuration):
        raise DomainError("expected a Configuration")
    for name, rule in RULES:
        why = rule(cfg, r, s)
        if why:
            return Classification(BAD, name, why)
    for size, a in AXIOMS.get((r, s), ()):
        if cfg.t >= size and cfg.padded()[0] >= a:
            return Classification(BAD, "axiom", f"contains (K_{size}; {a}, ...), stated without proof")
    why = _edge_cap_rule(cfg, r, s)
    if why:
        return Classification(BAD, "derived-edge-cap", why)
    return Classification(NOT_DERIVABLE, None, "no implemented rule applies")


# -------------------------------------------------------- weight-degree chain

def _stalled(r, s, steps, cfg, why):
    steps.append(Step("stalled", cfg, why))
    return BoundDerivation(r, s, steps, None, NOT_DERIVABLE)


def derive_implications(start, r, s):
    """The chain (K_2; a) ~> (K_3; a) ~> (K_3; a, a) ~> (K_3; a, a, a) ~> bad, a = (s-3)/r.

    Each step is re-checked on its leading terms (eps dropped).  The minimum
    weighted degree of a counterexample is ``delta = (s-1)/(2r)`` (density
    above (s-1)/(4r)), and no edge exceeds ``(s-2)/r``.
    """
    _check_rs(r, s)
    if 3 * (s - 2) <= r:
        return BoundDerivation(r, s, [Step("hypothesis", None, f"3(s-2) = {3 * (s - 2)} <= r = {r}")],
                               None, NOT_APPLICABLE)
    a = Fraction(s - 3, r)
    if start != Configuration(2, (a,)):
        raise DomainError(f"the chain starts from (K_2; {a})")
    delta = Fraction(s - 1, 2 * r)
    wmax = Fraction(s - 2, r)
    steps = []

    # two endpoints of weighted degree >= delta, neighbours each carrying <= wmax,
    # have more than n neighbours between them, hence a common one
    reach = 2 * delta / wmax
    if not reach > 1:
        return _stalled(r, s, steps, Configuration(3, (a,)), f"2*delta/wmax = {reach} <= 1")
    steps.append(Step("weight-degree", Configuration(3, (a,)),
                      f"2*delta/wmax = {reach} > 1, so the heavy edge lies in a triangle"))

    # every outside vertex misses one triangle vertex (no K_4) and has at most one
    # further edge above a: it sends at most wmax + a, while the triangle needs 3*delta
    sent, need = wmax + a, 3 * delta
    if sent > need:
        # happens for s >= 8: the counting argument no longer closes
        return _stalled(r, s, steps, Configuration(3, (a, a)), f"outside vertex may send {sent} > {need}")
    tight = sent == need
    note = f"outside vertex sends <= {sent}, triangle needs {need}"
    steps.append(Step("weight-degree", Configuration(3, (a, a)), note, tight))
    steps.append(Step("weight-degree", Configuration(3, (a, a, a)), note, tight))

    # closing: triangle rule with a = s-3, b = c = 3(s-1)/4
    b = c = Fraction(3 * (s - 1), 4)
    lhs = b + (s - 3 + 1) * c / r
    if not lhs > s - 1:
        return _stalled(r, s, steps, Configuration(3, (a, a, a)), f"b + (a+1)c/r = {lhs} <= {s - 1}")
    cls = classify_configuration(Configuration(3, (a, a, a)), r, s)
    steps.append(Step(cls.rule or "closed-triangle", Configuration(3, (a, a, a)),
                      f"b + (a+1)c/r = {lhs} > {s - 1}"))
    steps.append(Step("conclusion", None, f"every edge has weight at most {a} + eps"))
    return BoundDerivation(r, s, steps, a)


# ------------------------------------------------------------ Turan layers

def turan_fraction(f):
    """Edge density of the densest K_f-free graph, normalised by n^2: (1 - 1/(f-1))/2."""
    if f < 2:
        raise DomainError("clique order must be >= 2")
    return Fraction(1, 2) * (1 - Fraction(1, f - 1))


def total_weight_bound(r, s, profile):
    """Layered Turan count: edges above the next cap are K_{f_i}-free and weigh at most cap_i.

    ``profile`` lists ``(f_i, cap_i)`` with f increasing and caps decreasing;
    the result is sum_i (T(f_i) - T(f_{i-1})) * cap_i, normalised by n^2.
    """
    _check_rs(r, s)
    if not profile:
        raise DomainError("empty profile")
    prof = [(int(f), _q(cap)) for f, cap in profile]
    for (f0, c0), (f1, c1) in zip(prof, prof[1:]):
        if not (f1 > f0 and c1 < c0):
            raise DomainError("profile needs increasing clique orders and decreasing caps")
    total = Fraction(0)
    prev = Fraction(0)
    for f, cap in prof:
        layer = turan_fraction(f)
        total += (layer - prev) * cap
        prev = layer
    return total


def upper_bound_derivation(r, s):
    """Full derivation behind :func:`theta_upper`, or None where nothing is known."""
    _check_rs(r, s)
    lower = Fraction(s - 1, 4 * r)
    if s <= min(5, r):
        return BoundDerivation(r, s, [Step("known-bound", None, f"(s-1)/(4r) for s <= min(5, r)")], lower)
    if (r, s) == (10, 6):
        d = derive_implications(Configuration(2, (Fraction(s - 3, r),)), r, s)
        k7 = classify_configuration(Configuration(7), r, s)
        steps = [Step(k7.rule, Configuration(7), "cluster graph is K_7-free (" + k7.detail + ")")]
        steps += d.steps
        total = total_weight_bound(r, s, [(7, d.final_bound)])
        steps.append(Step("turan", None, f"total weight <= T(7) * {d.final_bound} = {total}"))
        status = "ok" if total <= lower else "failed"
        return BoundDerivation(r, s, steps, lower if status == "ok" else None, status)
    if (r, s) == (12, 7):
        d = derive_implications(Configuration(2, (Fraction(s - 3, r),)), r, s)
        steps = list(d.steps)
        axioms = AXIOMS[(r, s)]
        for size, a in axioms:
            steps.append(Step("axiom", Configuration.uniform(size, a), "stated without proof; taken as given"))
        # edges above the cap of the next axiom avoid that axiom's clique
        caps = [d.final_bound] + [a for _, a in axioms[:-1]]
        profile = [(size, cap) for (size, _), cap in zip(axioms, caps)]
        total = total_weight_bound(r, s, profile)
        steps.append(Step("turan", None, f"layered total weight = {total} < {lower}"))
        status = "ok" if total < lower else "failed"
        return BoundDerivation(r, s, steps, lower if status == "ok" else None, status)
    return None


def theta_upper(r, s):
    d = upper_bound_derivation(r, s)
    return None if d is None else d.final_bound


def theta_lower(r, s):
    return compute_ell(r, s)[1]


def bounds_table(pairs):
    """Rows (r, s, lower, upper, equal) for the given (r, s) pairs."""
    rows = []
    for r, s in pairs:
        lo, up = theta_lower(r, s), theta_upper(r, s)
        rows.append((r, s, lo, up, up is not None and lo == up))
    return rows


__all__ = [
    "Configuration", "BoundDerivation", "Classification", "classify_configuration",
    "derive_implications", "total_weight_bound", "theta_upper", "theta_lower",
    "upper_bound_derivation", "turan_fraction", "bounds_table", "BAD", "NOT_DERIVABLE",
    "NOT_APPLICABLE",
]
