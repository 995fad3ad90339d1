from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wtits import catalog
from wtits.building import ThinBuilding
from wtits.dynamics import (
    ActionError,
    NotThin,
    PermutationAction,
    StateSpace,
    TrivialAction,
    action_from_generators,
    check_balance,
    check_geometric,
    find_recurrence,
    free_reduce,
    inverse_word,
    left_multiplication,
    quotient_graph,
    rho_map,
    validate_action,
)

T33 = catalog.t33(12)
ACT = left_multiplication(T33)
SPACE = StateSpace(T33, (0, 1))
X, Y = ((0, 1),), ((1, 1),)


def test_word_helpers():
    assert free_reduce(((0, 1), (0, -1), (1, 1))) == ((1, 1),)
    assert inverse_word(((0, 1), (1, 1))) == ((1, -1), (0, -1))
    assert ACT.format_word(((0, 1), (0, 1), (1, 1), (0, -1))) == "x^2 y x^-1"


def test_transition_probabilities():
    assert SPACE.transition_prob(((), 0), (X, 1)) == Fraction(1, 2)
    assert SPACE.transition_prob(((), 0), (X, 0)) == 0
    assert SPACE.transition_prob(((), 0), (Y, 1)) == 0
    assert SPACE.transition_prob(((), 0), ((), 1)) == 0
    thin = StateSpace(ThinBuilding(catalog.d_infinity(), 6), (0, 1))
    assert thin.transition_prob(((), 0), ((0,), 1)) == 1


def test_period_must_be_even():
    with pytest.raises(ValueError):
        StateSpace(T33, (0, 1, 0))


def test_balance():
    rep = check_balance(StateSpace(catalog.t33(5), (0, 1)))
    assert rep.passed
    assert rep.stats["states"] > 0
    assert rep.warnings


def test_cylinder_measures():
    assert SPACE.cylinder_measure([((), 0)]) == 1
    path = [((), 0), (X, 1), (X + Y, 0)]
    assert SPACE.cylinder_measure(path) == Fraction(1, 4)
    assert SPACE.cylinder_measure([((), 0), (Y, 1)]) == 0


letters = st.tuples(st.integers(0, 1), st.sampled_from([1, -1]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=5), st.lists(letters, max_size=4))
def test_cylinders_are_invariant(choices, word):
    word = tuple(word)
    path = [((), 0)]
    for ch in choices:
        succ = sorted(SPACE.successors(path[-1]))
        path.append(succ[ch])
    moved = [SPACE.act(ACT, word, a) for a in path]
    assert SPACE.cylinder_measure(path) == SPACE.cylinder_measure(moved) == Fraction(1, 2 ** len(choices))


def test_orbit_graph_of_t33():
    graph = quotient_graph(SPACE, ACT)
    assert graph.nodes == [((), 0), ((), 1)]
    assert [len(a) for a in graph.arcs] == [2, 2]
    assert all(arc.prob == Fraction(1, 2) for arcs in graph.arcs for arc in arcs)


def test_recurrences_t33():
    rec = find_recurrence(SPACE, ACT, (), X)
    assert rec.n == 2
    assert ACT.format_word(rec.g) == "x y"
    assert rec.gallery_type(SPACE) == (1,)
    rec2 = find_recurrence(SPACE, ACT, (), ((0, 2),))
    assert ACT.format_word(rec2.g) == "x^2 y"


def test_recurrence_needs_a_positive_first_step():
    with pytest.raises(ValueError):
        find_recurrence(SPACE, ACT, (), Y)


def test_recurrence_thin_dinf():
    bld = ThinBuilding(catalog.d_infinity(), 10)
    act = left_multiplication(bld)
    rec = find_recurrence(StateSpace(bld, (0, 1)), act, (), (0,))
    assert act.format_word(rec.g) == "r s"
    assert act.act(rec.g, ()) == (0, 1)


@pytest.mark.parametrize("system", [catalog.d_infinity(), catalog.s3()])
def test_rho_is_the_identity_table(system):
    bld = ThinBuilding(system, 4)
    table = rho_map(bld, left_multiplication(bld))
    assert table.report.passed
    assert table.table["r"] == (0,) and table.table["s"] == (1,)
    assert table.report.stats["kernel"] == table.report.stats["stabilizer"] == 1


def test_rho_refuses_thick_buildings():
    with pytest.raises(NotThin):
        rho_map(T33, ACT)


def test_geometric_check():
    rep = check_geometric(T33, ACT)
    assert rep.passed
    assert rep.stats["orbits"] == 1
    assert rep.stats["stabilizer_size"] == 1
    assert not check_geometric(T33, TrivialAction(T33)).passed


def test_type_swapping_permutation_rejected():
    bld = ThinBuilding(catalog.s3(), 3)
    sys = bld.system
    swap = {c: sys.reduce(tuple(1 - s for s in c)) for c in bld.chambers()}
    assert not validate_action(PermutationAction(bld, [swap], ["f"])).passed
    with pytest.raises(ActionError):
        action_from_generators(bld, [swap], ["f"])


def test_explicit_building_has_no_left_multiplication():
    with pytest.raises(ActionError):
        left_multiplication(catalog.fano_building())
