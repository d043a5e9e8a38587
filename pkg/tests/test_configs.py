from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given, strategies as st

from ramsey_turan.configs import (
    BAD,
    NOT_APPLICABLE,
    NOT_DERIVABLE,
    Configuration,
    bounds_table,
    classify_configuration,
    derive_implications,
    theta_lower,
    theta_upper,
    total_weight_bound,
    turan_fraction,
    upper_bound_derivation,
)
from ramsey_turan.errors import DomainError
from ramsey_turan.hypercube import compute_ell

F = Fraction


# ------------------------------------------------------------ configurations

def test_configuration_sorts_and_is_exact():
    c = Configuration(3, (0.375, F(3, 10), 0.375))
    assert c.thresholds == (F(3, 10), F(3, 8), F(3, 8))
    assert str(c) == "(K_3; 3/10, 3/8, 3/8)"


@pytest.mark.parametrize("t,th", [(1, ()), (2, (F(1, 2), F(1, 3))), (3, (F(3, 2),)), (3, (F(-1, 5),))])
def test_malformed_configuration(t, th):
    with pytest.raises(DomainError):
        Configuration(t, th)


def test_k7_bad_for_10_6():
    c = classify_configuration(Configuration(7), 10, 6)
    assert c.verdict == BAD and c.rule == "clique-embedding"
    assert "a=0" in c.detail


def test_triangle_rule_example():
    c = classify_configuration(Configuration(3, (F(3, 10), F(375, 1000), F(375, 1000))), 10, 6)
    assert c.verdict == BAD and c.rule == "triangle-embedding"
    assert "21/4" in c.detail


def test_light_edge_not_derivable():
    c = classify_configuration(Configuration(2, (F(1, 10),)), 10, 6)
    assert c.verdict == NOT_DERIVABLE and c.rule is None and not c.bad


def test_classify_domain():
    with pytest.raises(DomainError):
        classify_configuration(Configuration(3), 4, 5)
    with pytest.raises(DomainError):
        classify_configuration((3, ()), 10, 6)


def test_axioms_fire_only_for_12_7():
    k6 = Configuration(6)
    assert classify_configuration(k6, 12, 7).rule == "axiom"
    assert classify_configuration(k6, 12, 8).rule != "axiom"
    assert classify_configuration(Configuration.uniform(5, F(2, 12)), 12, 7).rule == "axiom"
    assert classify_configuration(Configuration(5), 12, 7).verdict == NOT_DERIVABLE
    assert classify_configuration(Configuration(5), 12, 6).verdict == NOT_DERIVABLE


rs_pairs = st.integers(2, 14).flatmap(lambda r: st.tuples(st.just(r), st.integers(2, r)))


@st.composite
def configs(draw):
    t = draw(st.integers(2, 7))
    m = draw(st.integers(0, comb(t, 2)))
    th = draw(st.lists(st.fractions(0, 1, max_denominator=24), min_size=m, max_size=m))
    return Configuration(t, tuple(th))


@given(configs(), rs_pairs, st.data())
def test_raising_a_threshold_keeps_bad(cfg, rs, data):
    r, s = rs
    before = classify_configuration(cfg, r, s)
    assume(before.bad)
    pad = list(cfg.padded())
    i = data.draw(st.integers(0, len(pad) - 1))
    pad[i] = data.draw(st.fractions(pad[i], 1, max_denominator=24))
    raised = Configuration(cfg.t, tuple(pad))
    assert classify_configuration(raised, r, s).bad


@given(configs(), rs_pairs)
def test_extra_vertex_keeps_bad(cfg, rs):
    # a K_{t+1} whose listed thresholds match contains the original K_t
    r, s = rs
    assume(cfg.t < 7 and classify_configuration(cfg, r, s).bad)
    bigger = Configuration(cfg.t + 1, cfg.thresholds)
    assert classify_configuration(bigger, r, s).bad


# ----------------------------------------------------------------- chain

def test_chain_10_6():
    d = derive_implications(Configuration(2, (F(3, 10),)), 10, 6)
    assert d.final_bound == F(3, 10)
    assert [s.config for s in d.steps[:3]] == [
        Configuration(3, (F(3, 10),)),
        Configuration(3, (F(3, 10),) * 2),
        Configuration(3, (F(3, 10),) * 3),
    ]
    assert d.steps[3].rule in ("triangle-embedding", "closed-triangle")
    assert d.steps[-1].rule == "conclusion"


def test_chain_12_7():
    d = derive_implications(Configuration(2, (F(4, 12),)), 12, 7)
    assert d.final_bound == F(4, 12)
    assert d.status == "ok"


def test_chain_tight_step_flagged():
    d = derive_implications(Configuration(2, (F(4, 12),)), 12, 7)
    assert any(s.tight for s in d.steps)
    assert any("[tight]" in line for line in d.lines())
    d = derive_implications(Configuration(2, (F(3, 10),)), 10, 6)
    assert not any(s.tight for s in d.steps)


def test_chain_not_applicable():
    d = derive_implications(Configuration(2, (F(1, 10),)), 10, 4)
    assert d.status == NOT_APPLICABLE and d.final_bound is None


def test_chain_wrong_start():
    with pytest.raises(DomainError):
        derive_implications(Configuration(2, (F(1, 10),)), 10, 6)


@given(rs_pairs)
def test_chain_closes_whenever_applicable(rs):
    r, s = rs
    a = F(s - 3, r) if s >= 3 else F(0)
    d = derive_implications(Configuration(2, (a,)), r, s) if 3 * (s - 2) > r else None
    if d is None:
        return
    if s <= 7:
        assert d.status == "ok" and d.final_bound == F(s - 3, r)
        assert isinstance(d.final_bound, Fraction)
    else:
        # the weight-degree count stops closing once s >= 8
        assert d.status == NOT_DERIVABLE and d.steps[-1].rule == "stalled"


# ------------------------------------------------------------ Turan layers

def test_turan_fraction():
    assert turan_fraction(2) == 0
    assert turan_fraction(3) == F(1, 4)
    assert turan_fraction(7) == F(5, 12)
    with pytest.raises(DomainError):
        turan_fraction(1)


def test_total_10_6():
    assert total_weight_bound(10, 6, [(7, F(3, 10))]) == F(1, 8)


def test_total_12_7():
    profile = [(3, F(4, 12)), (4, F(375, 1200)), (5, F(3, 12)), (6, F(2, 12))]
    total = total_weight_bound(12, 7, profile)
    assert total == F(119, 960) < F(1, 8)
    assert total == F(1, 12) + F(1, 12) * F(375, 1200) + F(1, 24) * F(3, 12) + F(1, 40) * F(2, 12)


def test_total_trivial_profile():
    assert total_weight_bound(5, 3, [(2, F(1, 2))]) == 0


@pytest.mark.parametrize("profile", [[], [(3, F(1, 3)), (4, F(1, 2))], [(4, F(1, 3)), (3, F(1, 4))]])
def test_total_bad_profile(profile):
    with pytest.raises(DomainError):
        total_weight_bound(12, 7, profile)


# ------------------------------------------------------------------ bounds

@pytest.mark.parametrize("r,s,up", [
    (4, 2, F(1, 16)), (3, 3, F(1, 6)), (4, 4, F(3, 16)), (10, 6, F(1, 8)), (12, 7, F(1, 8)),
])
def test_theta_upper(r, s, up):
    assert theta_upper(r, s) == up


def test_theta_upper_unknown():
    assert theta_upper(10, 7) is None
    assert theta_upper(6, 6) is None


def test_upper_equals_lower_for_10_6():
    assert theta_upper(10, 6) == theta_lower(10, 6) == F(1, 8)


def test_12_7_lists_axioms():
    d = upper_bound_derivation(12, 7)
    assert len(d.axioms_used) == 4
    assert [s.config.t for s in d.axioms_used] == [3, 4, 5, 6]
    text = "\n".join(d.lines())
    assert "119/960" in text and "stated without proof" in text


def test_10_6_trace_uses_no_axioms():
    d = upper_bound_derivation(10, 6)
    assert d.axioms_used == []
    assert d.steps[0].config == Configuration(7)


@pytest.mark.parametrize("r", range(2, 200))
def test_sharpness_consistency(r):
    for s in range(2, min(5, r) + 1):
        q = F(4 * r, s - 1)
        if q.denominator == 1 and q.numerator & (q.numerator - 1) == 0:
            assert theta_upper(r, s) == compute_ell(r, s)[1]


def test_bounds_table_rows():
    rows = bounds_table([(4, 2), (3, 2)])
    assert rows[0] == (4, 2, F(1, 16), F(1, 16), True)
    assert rows[1] == (3, 2, F(1, 16), F(1, 12), False)
