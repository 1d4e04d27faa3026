import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxrep.errors import NotHermitian, NotPositiveSemidefinite
from coxrep.kernels import (
    DiscreteFn,
    HermitianKernelMatrix,
    StepFunction,
    apply_dtheta_cont,
    apply_dtheta_disc,
    bound_constant,
    corollary_schur,
    form_continuous,
    form_discrete,
    min_kernel_cells,
    principal_arg,
    psd_check,
    verify_continuous_bound,
    verify_discrete_bound,
)
from oracles import direct_discrete_form, midpoint_form


# --- continuous form ----------------------------------------------------------


def test_indicator_form_closed_form():
    f = StepFunction.indicator(0.0, 1.0)
    assert form_continuous(f, f, math.e).real == pytest.approx(2 * (math.e - 2), abs=1e-12)


def test_indicator_form_matches_midpoint_oracle():
    f = StepFunction.indicator(0.0, 1.0)
    oracle = midpoint_form(f, f, math.e, 0.0, 1.0, n=2000)
    assert abs(form_continuous(f, f, math.e) - oracle) < 1e-6


def test_alpha_close_to_one():
    f = StepFunction.indicator(0.0, 1.0)
    assert form_continuous(f, f, 1 + 1e-6).real == pytest.approx(1.0, abs=1e-5)


@pytest.mark.parametrize("alpha", [1.2, 2.0, 5.0])
def test_step_form_against_midpoint(alpha):
    f = StepFunction.make([0.0, 0.5, 1.25, 2.0], [1.0, -2.0 + 1j, 0.5j])
    h = StepFunction.make([0.25, 1.0, 2.0], [3.0, -1.0])
    oracle = midpoint_form(f, h, alpha, 0.0, 2.0, n=2000)
    assert abs(form_continuous(f, h, alpha) - oracle) < 1e-5 * max(1.0, abs(oracle))


def test_cell_kernel_is_symmetric_and_psd():
    grid = np.array([0.0, 0.3, 1.0, 1.1, 4.0])
    K = min_kernel_cells(grid, 3.0)
    np.testing.assert_allclose(K, K.T)
    assert np.linalg.eigvalsh(K).min() > 0


def test_twisted_with_zero_phase_matches_exact():
    f = StepFunction.make([0.0, 1.0, 3.0], [1.0, -0.5j])
    exact = form_continuous(f, f, 2.0)
    quad = form_continuous(apply_dtheta_cont(f, 0.0), apply_dtheta_cont(f, 0.0), 2.0)
    assert abs(exact - quad) < 1e-9 * abs(exact)


@pytest.mark.parametrize("psi", [math.pi / 4, math.pi, -2.0])
def test_twisted_form_against_midpoint(psi):
    f = StepFunction.make([0.0, 0.7, 2.0], [1.0, -1.0 + 0.5j])
    Df = apply_dtheta_cont(f, psi)
    oracle = midpoint_form(Df, Df, 1.7, 0.0, 2.0, n=2000)
    assert abs(form_continuous(Df, Df, 1.7) - oracle) < 1e-5 * max(1.0, abs(oracle))


def test_twisted_integral():
    f = StepFunction.indicator(0.0, 1.0)
    assert abs(apply_dtheta_cont(f, math.pi).integral()) == pytest.approx(2 / math.pi, abs=1e-14)


def test_bound_constant_values():
    assert bound_constant(math.pi, math.e) == pytest.approx(1 + 2 * math.pi)
    assert bound_constant(math.pi / 4, math.e) == pytest.approx(1 + math.pi / 2)
    assert bound_constant(-1.0, math.e) == bound_constant(1.0, math.e)


@pytest.mark.parametrize("bad", [1.0, 0.5, -2.0])
def test_alpha_must_exceed_one(bad):
    f = StepFunction.indicator(0.0, 1.0)
    with pytest.raises(ValueError):
        form_continuous(f, f, bad)
    with pytest.raises(ValueError):
        form_discrete(DiscreteFn.delta(0), DiscreteFn.delta(0), bad)
    with pytest.raises(ValueError):
        bound_constant(1.0, bad)


@pytest.mark.parametrize(
    "breaks, values", [([0.0, 0.0], [1.0]), ([1.0, 0.5], [1.0]), ([-1.0, 1.0], [1.0]), ([0.0, 1.0], [1.0, 2.0])]
)
def test_step_function_validation(breaks, values):
    with pytest.raises(ValueError):
        StepFunction.make(breaks, values)


def test_step_function_evaluation():
    f = StepFunction.make([1.0, 2.0, 3.0], [5.0, 7.0])
    np.testing.assert_array_equal(f([0.5, 1.0, 1.5, 2.0, 3.0, 9.0]), [0, 5, 5, 7, 0, 0])
    assert f.integral() == 12.0


steps = st.lists(
    st.tuples(st.floats(0.05, 1.0), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)),
    min_size=1,
    max_size=5,
)


@settings(max_examples=25, deadline=None)
@given(steps, st.floats(-math.pi, math.pi), st.floats(1.1, 4.0))
def test_continuous_phase_bound_property(cells, psi, alpha):
    widths = [w for w, _ in cells]
    breaks = np.concatenate([[0.0], np.cumsum(widths)])
    f = StepFunction.make(breaks, [v for _, v in cells])
    if all(v == 0 for _, v in cells):
        return
    rep = verify_continuous_bound(f, psi, alpha)
    assert rep.passed, rep


# --- discrete form ------------------------------------------------------------


def test_discrete_examples():
    assert form_discrete(DiscreteFn({0: 1, 1: 1}), DiscreteFn({0: 1, 1: 1}), 2.0) == pytest.approx(5.0)
    assert form_discrete(DiscreteFn({0: 1, 1: -1}), DiscreteFn({0: 1, 1: -1}), 2.0) == pytest.approx(1.0)
    f = apply_dtheta_disc(DiscreteFn({0: 1, 1: 1}), 1j)
    assert form_discrete(f, f, 2.0) == pytest.approx(3.0)


def test_discrete_against_direct_sum():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = {int(k): complex(*rng.normal(size=2)) for k in rng.choice(12, 5, replace=False)}
        h = {int(k): complex(*rng.normal(size=2)) for k in rng.choice(12, 4, replace=False)}
        a = float(rng.uniform(1.1, 3.0))
        assert abs(form_discrete(DiscreteFn(f), DiscreteFn(h), a) - direct_discrete_form(f, h, a)) < 1e-9


def test_discrete_validation():
    with pytest.raises(ValueError):
        DiscreteFn({-1: 1.0})
    with pytest.raises(ValueError):
        apply_dtheta_disc(DiscreteFn.delta(0), 1.1)


def test_empty_discrete_form_is_zero():
    assert form_discrete(DiscreteFn(), DiscreteFn(), 2.0) == 0


@pytest.mark.parametrize("z, expected", [(1, 0.0), (-1, -math.pi), (1j, math.pi / 2), (-1j, -math.pi / 2)])
def test_principal_arg(z, expected):
    assert principal_arg(z) == pytest.approx(expected)


def test_discrete_phase_bound_sweep():
    rng = np.random.default_rng(11)
    thetas = [cmath.exp(1j * t) for t in np.linspace(-math.pi, math.pi, 16, endpoint=False)]
    for _ in range(200):
        n = int(rng.integers(1, 12))
        f = DiscreteFn.from_dense(rng.normal(size=n) + 1j * rng.normal(size=n))
        for th in thetas:
            for a in (1.1, 1.5, 3.0):
                assert verify_discrete_bound(f, th, a).passed


def test_first_power_bound_can_fail():
    # a witness where only the squared constant holds
    th = cmath.exp(-1j * math.pi / 4)
    worst = None
    rng = np.random.default_rng(0)
    for _ in range(400):
        f = DiscreteFn.from_dense(rng.normal(size=6) + 1j * rng.normal(size=6))
        rep = verify_discrete_bound(f, th, 1.5)
        assert rep.passed
        if not rep.first_power_passed:
            worst = rep
            break
    assert worst is not None and worst.lhs > worst.constant * worst.rhs


# --- Hermitian matrices and the Schur corollary ------------------------------


def test_hermitian_check():
    with pytest.raises(NotHermitian):
        HermitianKernelMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotHermitian):
        HermitianKernelMatrix(np.ones((2, 3)))
    HermitianKernelMatrix(np.array([[1.0, 1j], [-1j, 1.0]]))


def test_psd_check():
    assert psd_check(np.eye(3)).passed
    res = psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not res.passed and res.min_eig == pytest.approx(-1.0)


def test_corollary_identity():
    rep = corollary_schur(np.eye(3), 1j, 2.0)
    assert rep.lhs == pytest.approx(7.0) and rep.rhs == pytest.approx(7.0) and rep.passed


def test_corollary_rank_one_matches_discrete():
    v = np.array([1.0, -2.0 + 1j, 0.5])
    theta = cmath.exp(0.8j)
    rep = corollary_schur(np.outer(v, np.conj(v)), theta, 1.7)
    f = DiscreteFn.from_dense(v)
    direct = verify_discrete_bound(f, theta, 1.7)
    assert rep.lhs == pytest.approx(direct.lhs, rel=1e-12)
    assert rep.rhs == pytest.approx(direct.rhs, rel=1e-12)


def test_corollary_rejects_indefinite():
    with pytest.raises(NotPositiveSemidefinite):
        corollary_schur(np.array([[1.0, 2.0], [2.0, 1.0]]), 1j, 2.0)


def test_corollary_random_psd():
    rng = np.random.default_rng(5)
    for _ in range(50):
        A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        L = A @ A.conj().T
        th = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        assert corollary_schur(L, th, float(rng.uniform(1.1, 3))).passed
