import math

import pytest

import polattn


def test_version():
    assert polattn.__version__


def test_entropy_and_gamma():
    assert polattn.entropy([0.25] * 4) == pytest.approx(math.log(4))
    assert polattn.gamma_inverse(4.0) == pytest.approx(math.log(2 + math.sqrt(3)))
    with pytest.raises(ValueError):
        polattn.gamma_inverse(1.0)


def test_table1_voter():
    s = polattn.table1_scenario()
    sol = polattn.solve_attention(polattn.profile_belief(s, [0.01, 0.4], -0.05), 0.09)
    assert sol.regime == polattn.Regime.Interior
    for got, printed in zip(sol.m, [0.296, 0.006, 0.930, 0.148]):
        assert abs(got - printed) <= 0.002


def test_corner_voter():
    s = polattn.table1_scenario()
    b = polattn.profile_belief(s, [0.01, 0.4], -0.2)
    assert not polattn.attention_membership(b, 0.09)
    assert polattn.solve_attention(b, 0.09).regime == polattn.Regime.CornerZero


def test_figure2_equilibria():
    for mu in (0.1, 1.0, 10.0, 100.0):
        recs = polattn.enumerate_equilibria(polattn.figure2_scenario(mu), threads=2)
        assert sorted(tuple(r["beta_policy"]) for r in recs) == [(0.01, 0.2), (0.01, 0.4)]


def test_noisy_enumeration_and_garbling():
    recs = polattn.enumerate_equilibria(polattn.figure3_scenario(0.7))
    assert recs
    f = polattn.NewsTechnology.slant(0.6, [0.1, 0.5, 0.9])
    g = polattn.garble(f, polattn.slant_garbling_kernel(0.6, 0.7))
    direct = polattn.NewsTechnology.slant(0.7, [0.1, 0.5, 0.9])
    for r1, r2 in zip(g.rows, direct.rows):
        assert r1 == pytest.approx(r2, abs=1e-14)
    assert f.is_log_supermodular()


def test_scenario_round_trip():
    s = polattn.figure2_scenario(1.0)
    back = polattn.parse_scenario(s.to_json())
    assert back.hash() == s.hash()
    with pytest.raises(ValueError, match="line"):
        polattn.parse_scenario('{"schema_version": 2}')


def test_reproduce_reports_mismatch():
    assert polattn.reproduce("table1") == []
    assert len(polattn.reproduce("table2")) == 1
