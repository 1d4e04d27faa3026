import math

import numpy as np
import pytest

from coxrep.errors import ToleranceError
from coxrep.geometry import (
    ReflectionTable,
    act,
    apply_sigma,
    build_form,
    enumerate_reflections,
    is_descent,
    root_sign,
    simple_root,
)
from coxrep.matrix import CoxeterMatrix
from coxrep.presets import PRESET_NAMES, load_preset
from oracles import length_oracle


def test_form_entries():
    b = build_form(load_preset("a3").matrix).b
    assert b[0, 1] == -0.5
    assert b[0, 2] == 0.0
    assert np.allclose(np.diag(b), 1.0)
    b = build_form(load_preset("b2").matrix).b
    assert math.isclose(b[0, 1], -math.sqrt(2) / 2)
    assert build_form(load_preset("iinf").matrix).b[0, 1] == -1.0


def test_form_is_read_only():
    b = build_form(load_preset("a2").matrix).b
    with pytest.raises(ValueError):
        b[0, 0] = 2.0


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_generators_are_involutions_preserving_the_form(name):
    form = build_form(load_preset(name).matrix)
    n = form.rank
    for s in range(n):
        S = np.column_stack([apply_sigma(s, simple_root(k, n), form) for k in range(n)])
        assert np.allclose(S @ S, np.eye(n))
        assert np.allclose(S.T @ form.b @ S, form.b)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7])
def test_dihedral_product_has_order_m(m):
    form = build_form(CoxeterMatrix.from_rows([[1, m], [m, 1]]))
    n = 2
    st = np.column_stack([act((0, 1), simple_root(k, n), form) for k in range(n)])
    assert np.allclose(np.linalg.matrix_power(st, m), np.eye(2))
    for k in range(1, m):
        assert not np.allclose(np.linalg.matrix_power(st, k), np.eye(2))


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_descent_matches_length_oracle(name):
    p = load_preset(name)
    g = p.group()
    oracle = length_oracle(name)
    for x in g.enumerate_ball(6 if p.matrix.rank < 3 else 5).elements:
        for s in range(p.matrix.rank):
            expected = oracle((s,) + x.word) < oracle(x.word)
            assert is_descent(x, s, g.form) == expected
            assert g.is_descent(x, s) == expected


def test_root_sign():
    assert root_sign(np.array([0.0, 1.0])) == 1
    assert root_sign(np.array([-2.0, 0.0])) == -1
    with pytest.raises(ToleranceError):
        root_sign(np.array([1.0, -1.0]))
    with pytest.raises(ToleranceError):
        root_sign(np.array([1e-12, 0.0]))


def _names(refl):
    return sorted(str(r) for r in refl)


def test_reflection_examples():
    a2 = load_preset("a2").group()
    assert _names(enumerate_reflections(a2.enumerate_ball(3), a2)) == ["s0", "s0.s1.s0", "s1"]
    a1 = load_preset("a1").group()
    assert _names(enumerate_reflections(a1.enumerate_ball(1), a1)) == ["s0"]
    iinf = load_preset("iinf").group()
    assert _names(enumerate_reflections(iinf.enumerate_ball(3), iinf)) == ["s0", "s0.s1.s0", "s1", "s1.s0.s1"]


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_reflection_invariants(name):
    g = load_preset(name).group()
    ball = g.enumerate_ball(5)
    table = ReflectionTable.from_ball(ball, g)
    n = g.rank
    for k, r in enumerate(table.reflections):
        t = r.element
        assert g.multiply(t, t) == g.identity
        assert len(t) % 2 == 1
        root = np.array(r.root)
        assert root.min() >= -1e-9
        assert math.isclose(root @ g.form.b @ root, 1.0, rel_tol=1e-9)
        # sigma(t) is the reflection in its stored root
        for j in range(n):
            e = simple_root(j, n)
            expected = e - 2.0 * (root @ g.form.b @ e) * root
            assert np.allclose(act(t.word, e, g.form), expected, atol=1e-9)
        assert table.position(t) == k
    keys = [r.element.key for r in table.reflections]
    assert keys == sorted(keys)


def test_finite_group_reflection_counts():
    # number of reflections = number of positive roots
    for name, count in [("a2", 3), ("a3", 6), ("b2", 4), ("g2", 6)]:
        g = load_preset(name).group()
        ball = g.enumerate_ball(30)
        assert len(enumerate_reflections(ball, g)) == count
