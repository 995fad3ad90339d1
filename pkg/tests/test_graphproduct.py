import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import c33_normal_form
from wtits.graphproduct import GraphProductGroup

C33 = GraphProductGroup(2, [], (3, 3))
SQUARE = GraphProductGroup(3, [(0, 2)], (3, 2, 3))


@pytest.mark.parametrize("radius", [0, 1, 2, 6])
def test_free_product_ball_size(radius):
    assert len(C33.ball(radius)) == 2 ** (radius + 2) - 3


def test_multiply_matches_oracle():
    rng = random.Random(0)
    for _ in range(300):
        word = [(rng.randrange(2), rng.randrange(1, 3)) for _ in range(rng.randint(0, 12))]
        g = ()
        for v, a in word:
            g = C33.mul_syllable(g, v, a)
        assert g == c33_normal_form(word)


def test_commuting_vertices_are_sorted():
    g = SQUARE.multiply(((2, 1),), ((0, 1),))
    assert g == ((0, 1), (2, 1))
    assert SQUARE.multiply(((0, 1), (2, 1)), ((0, 2),)) == ((2, 1),)
    assert SQUARE.type_word(((0, 1), (1, 1))) == (0, 1)


def test_finiteness():
    assert not C33.is_finite() and C33.order() is None
    cube = GraphProductGroup(2, [(0, 1)], (3, 2))
    assert cube.is_finite() and cube.order() == 6
    assert len(cube.ball(5)) == 6


def test_bad_input():
    with pytest.raises(ValueError):
        GraphProductGroup(2, [], (3,))
    with pytest.raises(ValueError):
        GraphProductGroup(1, [], (1,))
    with pytest.raises(ValueError):
        GraphProductGroup(2, [(1, 1)], (2, 2))


syllable = st.tuples(st.integers(0, 2), st.integers(1, 2))
element = st.lists(syllable, max_size=8).map(lambda w: SQUARE.multiply((), [(v, a % SQUARE.sizes[v] or 1) for v, a in w]))


@settings(max_examples=80, deadline=None)
@given(element, element, element)
def test_group_axioms(a, b, c):
    m = SQUARE.multiply
    assert m(m(a, b), c) == m(a, m(b, c))
    assert m(a, SQUARE.inverse(a)) == ()
    assert m(SQUARE.inverse(a), a) == ()
    assert SQUARE.canonical(a) == a
