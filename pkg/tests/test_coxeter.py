import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxrep.coxeter import (
    CoxeterGroup,
    Element,
    braid_neighbours,
    enumerate_ball,
    parse_word,
    reduce_fast,
    reduce_reference,
    reduced_words,
)
from coxrep.errors import BallCapExceeded
from coxrep.presets import PRESET_NAMES, load_preset
from oracles import all_words, length_oracle


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_lengths_match_concrete_model(name):
    p = load_preset(name)
    oracle = length_oracle(name)
    g = p.group()
    for w in all_words(p.matrix.rank, 6):
        assert len(g.reduce(w)) == oracle(w), w


@pytest.mark.parametrize("name", ["a2", "b2", "g2", "iinf"])
def test_fast_equals_reference_rank2(name):
    M = load_preset(name).matrix
    for w in all_words(2, 10):
        assert reduce_fast(w, M) == reduce_reference(w, M)


def test_normal_form_is_shortlex_least(a2):
    for w in all_words(2, 5):
        g = a2.reduce(w)
        assert g.word == min(reduced_words(g, a2.matrix), key=lambda x: (len(x), x))


def test_parse_word():
    assert parse_word("s0.s1.s0", 2) == (0, 1, 0)
    assert parse_word("", 2) == ()
    assert parse_word("e", 2) == ()
    with pytest.raises(ValueError):
        parse_word("s2", 2)
    with pytest.raises(ValueError):
        parse_word("t0", 2)


def test_element_rendering(iinf):
    g = iinf.element("s0.s1")
    assert str(g) == "s0.s1"
    assert str(iinf.identity) == ""
    assert len(g) == 2


def test_multiply_inverse_distance(a2):
    s, t = a2.generators
    assert a2.multiply(s, s) == a2.identity
    sts = a2.multiply(s, t, s)
    assert a2.multiply(t, s, t) == sts
    assert a2.inverse(a2.multiply(s, t)) == a2.multiply(t, s)
    assert a2.distance(s, t) == 2
    assert a2.distance(sts, sts) == 0


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_generator_step_changes_length_by_one(name):
    g = load_preset(name).group()
    for x in g.enumerate_ball(4).elements:
        for s in g.generators:
            assert abs(len(g.multiply(x, s)) - len(x)) == 1


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_braid_neighbours_reduce_back(name):
    p = load_preset(name)
    g = p.group()
    for x in g.enumerate_ball(4).elements:
        for w in braid_neighbours(x.word, p.matrix):
            assert g.reduce(w) == x


@pytest.mark.parametrize(
    "name, order", [("a1", 2), ("a2", 6), ("b2", 8), ("g2", 12), ("a3", 24)]
)
def test_finite_presets_saturate(name, order):
    g = load_preset(name).group()
    assert len(g.enumerate_ball(order)) == order


def test_infinite_dihedral_ball_growth(iinf):
    for R in range(8):
        assert len(iinf.enumerate_ball(R)) == 2 * R + 1


def test_ball_examples(iinf, a2):
    assert [str(x) for x in iinf.enumerate_ball(3).elements] == [
        "", "s0", "s1", "s0.s1", "s1.s0", "s0.s1.s0", "s1.s0.s1"
    ]
    assert len(iinf.enumerate_ball(0)) == 1
    assert len(a2.enumerate_ball(3)) == 6


def test_ball_sorted_and_indexed():
    g = load_preset("ra3").group()
    b = g.enumerate_ball(4)
    assert list(b.elements) == sorted(b.elements)
    assert all(b.position(x) == i for i, x in enumerate(b.elements))
    assert b.sphere_sizes() == [1, 3, 5, 8, 13]


def test_ball_cap():
    g = load_preset("u3").group()
    with pytest.raises(BallCapExceeded) as info:
        g.enumerate_ball(10, cap=100)
    assert info.value.radius_reached < 10


def test_module_level_helpers():
    M = load_preset("b2").matrix
    assert len(enumerate_ball(M, 4)) == 8


def test_lengths_matrix_matches_distance():
    g = load_preset("ra3").group()
    els = g.enumerate_ball(3).elements
    D = g.lengths_matrix(els)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            assert D[i, j] == g.distance(a, b)


words = st.lists(st.integers(0, 2), max_size=12).map(tuple)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_ra3_length_is_subadditive_and_inverse_invariant(u, v):
    g = load_preset("ra3").group()
    a, b = g.reduce(u), g.reduce(v)
    ab = g.multiply(a, b)
    assert len(ab) <= len(a) + len(b)
    assert len(g.inverse(ab)) == len(ab)
    assert (len(ab) - len(a) - len(b)) % 2 == 0


@settings(max_examples=200, deadline=None)
@given(words)
def test_u3_fast_equals_reference(w):
    M = load_preset("u3").matrix
    assert reduce_fast(w, M) == reduce_reference(w, M)


def test_element_order_is_shortlex():
    assert Element((1,)) < Element((0, 1))
    assert Element((0, 1)) < Element((1, 0))


def test_group_tolerance_fallback_is_used(monkeypatch):
    from coxrep import coxeter
    from coxrep.errors import ToleranceError

    def boom(*a, **k):
        raise ToleranceError("forced")

    g = CoxeterGroup(load_preset("a2").matrix)
    monkeypatch.setattr(coxeter._backend, "normal_form", boom)
    assert g.reduce((0, 1, 0, 1)) == Element((1, 0))
