import pytest

from wtits import catalog
from wtits.building import ProductBuilding, verify_building
from wtits.coxeter import CoxeterMatrix, new_system
from wtits.quotient import (
    QuotientError,
    check_delta2_welldefined,
    check_metric_bound,
    finite_factor,
    induced_action,
    quotient_building,
)


def test_finite_factor():
    assert finite_factor(catalog.s3()) == (0, 1)
    assert finite_factor(catalog.d_infinity()) is None
    assert finite_factor(catalog.t33(2).system) is None
    assert finite_factor(catalog.c2_x_dinf()) == (2,)
    assert finite_factor(catalog.product_example(2).system) == (0,)


def test_rejects_non_factor():
    # r-s has m = 3 so {r} is not a union of components
    sys = new_system(CoxeterMatrix.from_pairs(3, {(0, 1): 3}), names="rst")
    bld = catalog.thin(sys, 3)
    with pytest.raises(QuotientError, match="not a union"):
        quotient_building(bld, (0,))
    with pytest.raises(QuotientError):
        quotient_building(bld, ())
    with pytest.raises(QuotientError):
        quotient_building(bld, (7,))


def test_infinite_s1_rejected():
    bld = catalog.thin_c2_x_dinf(4)
    with pytest.raises(QuotientError):
        quotient_building(bld, (0, 1))


def test_product_example_quotient():
    bld = catalog.product_example(6)
    data = quotient_building(bld, (0,))
    assert data.M == 1
    assert len(data.W1) == 2
    assert len(data.members) == len(bld.second.chambers())
    assert all(len(m) == 3 for m in data.members)
    assert data.quotient.system.names == ("x", "y")
    assert verify_building(data.quotient, 4).passed
    assert check_delta2_welldefined(data, 1000).passed
    assert check_metric_bound(data, 1000).passed
    # the quotient is the second factor again
    for a in range(0, len(data.members), 17):
        for b in range(0, len(data.members), 23):
            x, y = data.rep(a)[1], data.rep(b)[1]
            if bld.second.safe(x, 0) and bld.second.safe(y, 0):
                assert data.quotient.wdist(a, b) == bld.second.wdist(x, y)


def test_fano_factor_has_m_three():
    data = quotient_building(catalog.fano_times_t33(6), (0, 1))
    assert data.M == 3
    assert len(data.W1) == 6
    assert all(len(m) == 21 for m in data.members)
    assert verify_building(data.quotient, 3).passed
    assert check_metric_bound(data, 500).passed


def test_thin_quotient():
    data = quotient_building(catalog.thin_c2_x_dinf(6), (2,))
    assert data.M == 1
    assert len(data.members) == 13
    assert verify_building(data.quotient, 3).passed


def test_corrupted_class_map_is_caught():
    data = quotient_building(catalog.product_example(6), (0,))
    q = dict(data.q)
    # move one member of a deep class into a neighbouring class
    a, b = 0, 1
    victim = data.members[a][1]
    q[victim] = b
    rep = check_delta2_welldefined(data, 2000, q=q)
    assert not rep.passed


def test_quotients_compose():
    inner = ProductBuilding(catalog.rank_one(3), catalog.rank_one(2, "v"))
    bld = ProductBuilding(inner, catalog.t33(4))
    at_once = quotient_building(bld, (0, 1))
    first = quotient_building(bld, (0,))
    second = quotient_building(first.quotient, (0,))
    assert at_once.M == 2 and first.M == 1 and second.M == 1
    assert len(at_once.members) == len(second.members)
    two_step = {c: second.q[first.q[c]] for c in bld.chambers()}
    assert two_step == at_once.q
    n = len(at_once.members)
    for a in range(0, n, 5):
        for b in range(0, n, 7):
            assert at_once.quotient.wdist(a, b) == second.quotient.wdist(a, b)


def test_induced_action_on_product():
    bld = catalog.product_example(6)
    data = quotient_building(bld, (0,))
    ind = induced_action(data, catalog.product_example_action(bld))
    assert ind.names == ["z", "x", "y"]
    for a in range(len(data.members)):
        if data.quotient.margin(a) >= 1:
            # the rotation of the rank one factor disappears downstairs
            assert ind.apply(0, a) == a
            x = data.rep(a)[1]
            image = ind.apply(1, a)
            assert data.rep(image)[1] == bld.second.group.multiply(((0, 1),), x)


class SplittingAction:
    """Moves the second coordinate only for one chamber of the first factor."""

    names = ["bad"]
    n_generators = 1

    def __init__(self, bld):
        self.bld = bld

    def apply(self, i, c, inverse=False):
        a, x = c
        if a != 0:
            return c
        g = self.bld.second.group
        return (a, g.multiply(((0, 2 if inverse else 1),), x))


def test_induced_action_must_preserve_classes():
    bld = catalog.product_example(6)
    data = quotient_building(bld, (0,))
    with pytest.raises(QuotientError):
        induced_action(data, SplittingAction(bld))
