import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxrep.gns import build_gram
from coxrep.multipliers import (
    approximate_identity_demo,
    char_bound,
    char_bound_chain,
    chi_coefficient,
    closed_form_deviation,
    fejer_closed_form,
    fejer_eval,
    fejer_weights,
    parse_schedule,
    psi_Nr,
    psi_Nr_quadrature,
    series_tail_bound,
)
from coxrep.presets import load_preset
from oracles import fejer_direct

SCHEDULE = [(10, 0.9), (50, 0.98), (200, 0.995)]


@pytest.fixture(scope="module")
def iinf_space():
    g = load_preset("iinf").group()
    return g, build_gram(g.enumerate_ball(6), 0.7, g)


def test_chi_coefficients_pick_the_length(iinf_space):
    g, sp = iinf_space
    for x in sp.ball.elements:
        for n in range(9):
            expected = 0.7**n if n == len(x) else 0.0
            assert abs(chi_coefficient(x, n, 0.7, sp) - expected) < 1e-12


def test_chi_coefficient_arguments(iinf_space):
    g, sp = iinf_space
    with pytest.raises(ValueError):
        chi_coefficient(g.identity, -1, 0.7, sp)
    with pytest.raises(ValueError):
        chi_coefficient(g.identity, 2, 0.7, sp, Q=96)
    with pytest.raises(ValueError):
        chi_coefficient(g.identity, 40, 0.7, sp, Q=64)


def test_char_bound_values():
    assert char_bound(0, 1.0) == pytest.approx(2 * math.pi * math.e)
    assert char_bound(0, 1.0) == pytest.approx(17.0795, abs=1e-4)
    assert char_bound(1, 1.0) == pytest.approx(231.70, abs=1e-2)
    # affine in n
    a, b, c = (char_bound(n, 0.5) for n in (3, 4, 5))
    assert b - a == pytest.approx(c - b)
    with pytest.raises(ValueError):
        char_bound(1, 0.0)


@pytest.mark.parametrize("n", [1, 2, 8, 50])
def test_char_bound_chain_dominated(n):
    chain = char_bound_chain(n, 0.7)
    assert chain["r_pow_minus_n"] == pytest.approx(math.e)
    assert chain["staged"] == pytest.approx(chain["final"])


def test_char_bound_chain_zero():
    assert char_bound_chain(0, 1.0)["final"] == pytest.approx(2 * math.pi * math.e)


@pytest.mark.parametrize("z, n0", [(0.5, 0), (0.5, 3), (0.9j, 10), (-0.2, 1)])
def test_series_tail_closed_form(z, n0):
    direct = sum(char_bound(n, 1.3) * abs(z) ** n for n in range(n0, 3000))
    assert series_tail_bound(z, n0, 1.3) == pytest.approx(direct, rel=1e-10)


def test_series_tail_validation():
    with pytest.raises(ValueError):
        series_tail_bound(1.0, 0)
    with pytest.raises(ValueError):
        series_tail_bound(0.5, -1)


def test_fejer_weights():
    w = fejer_weights(3)
    assert [w[k] for k in range(-4, 5)] == pytest.approx([0, 0.25, 0.5, 0.75, 1, 0.75, 0.5, 0.25, 0])
    with pytest.raises(ValueError):
        fejer_weights(-1)


@pytest.mark.parametrize("N", [0, 1, 5, 32])
def test_fejer_against_direct_and_closed_form(N):
    t = np.linspace(-math.pi, math.pi, 101)
    np.testing.assert_allclose(fejer_eval(N, t), fejer_direct(N, t), atol=1e-11)
    np.testing.assert_allclose(fejer_closed_form(N, t), fejer_eval(N, t), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 256))
def test_fejer_positive_with_unit_mean(N):
    t = 2 * math.pi * np.arange(4096) / 4096
    vals = fejer_eval(N, t)
    assert vals.min() >= -1e-10
    assert abs(vals.mean() - 1.0) < 1e-12


def test_psi_values(iinf_space):
    g, sp = iinf_space
    x = g.element("s0.s1")
    assert psi_Nr(x, 4, 0.9) == pytest.approx(0.6 * 0.81)
    assert psi_Nr(x, 1, 0.9) == 0.0
    assert psi_Nr_quadrature(x, 4, 0.7, sp) == pytest.approx(0.6 * 0.49, abs=1e-12)
    for y in sp.ball.elements:
        assert psi_Nr_quadrature(y, 5, 0.7, sp) == pytest.approx(psi_Nr(y, 5, 0.7), abs=1e-12)


def test_closed_form_deviation():
    assert closed_form_deviation(3, 2, 0.5) == 1.0
    assert closed_form_deviation(0, 5, 0.5) == pytest.approx(0.0)
    assert closed_form_deviation(10, 200, 0.995) == pytest.approx(1 - (191 / 201) * 0.995**10)


def test_parse_schedule():
    assert parse_schedule("10:0.9, 50:0.98") == [(10, 0.9), (50, 0.98)]
    for bad in ("", "10", "a:0.5"):
        with pytest.raises(ValueError):
            parse_schedule(bad)


def test_demo_on_infinite_dihedral():
    g = load_preset("iinf").group()
    rep = approximate_identity_demo(g, 10, SCHEDULE)
    assert rep.strictly_decreasing and rep.non_increasing
    assert rep.final == pytest.approx(1 - (191 / 201) * 0.995**10, abs=1e-10)
    assert rep.entries[-1].argmax_length == 10
    assert rep.quadrature_gap < 1e-12
    assert rep.to_json()["entries"][0]["N"] == 10


def test_demo_requires_schedule():
    g = load_preset("a2").group()
    with pytest.raises(ValueError):
        approximate_identity_demo(g, 2, [])
