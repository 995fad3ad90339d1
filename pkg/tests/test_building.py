import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import FANO_LINES, bfs_distances, c33_normal_form, fano_delta
from wtits import catalog
from wtits.building import (
    BuildingError,
    ExplicitBuilding,
    Gallery,
    OutsideSafeRadius,
    ThinBuilding,
    ball_around,
    galleries_of_type,
    is_gallery,
    residue,
    sample_region,
    trivial_building,
    verify_building,
)


def fano_flags(bld):
    out = []
    for label in bld.labels:
        p, line = label.split("|")
        out.append((int(p), frozenset(int(x) for x in line)))
    return out


def test_fano_is_the_flag_complex():
    bld = catalog.fano_building()
    flags = fano_flags(bld)
    assert len(flags) == 21
    assert all(L in FANO_LINES and p in L for p, L in flags)
    for s in range(2):
        blocks = bld.partitions()[s]
        assert len(blocks) == 7
        assert all(len(b) == 3 for b in blocks)


def test_fano_delta_matches_incidence():
    bld = catalog.fano_building()
    flags = fano_flags(bld)
    sys = bld.system
    for x in range(21):
        for y in range(21):
            assert bld.wdist(x, y) == sys.parse_word(fano_delta(flags[x], flags[y]))


def test_fano_verifies():
    rep = verify_building(catalog.fano_building(), 3)
    assert rep.passed, rep.failures
    assert rep.stats["chambers"] == 21


@pytest.mark.parametrize(
    "make,max_len",
    [
        (lambda: ThinBuilding(catalog.d_infinity(), 6), 4),
        (lambda: catalog.t33(6), 4),
        (lambda: catalog.rank3_graph_product(5), 4),
        (lambda: catalog.product_example(6), 4),
        (lambda: ThinBuilding(catalog.s3(), 3), 3),
        (lambda: ThinBuilding(catalog.a3(), 6), 3),
    ],
)
def test_examples_verify(make, max_len):
    rep = verify_building(make(), max_len)
    assert rep.passed, rep.failures[:3]


def test_ball_sizes():
    # C3 * C3 has 2^(d+1) elements of syllable length d
    assert len(catalog.t33(6).chambers()) == 2 ** 8 - 3
    assert len(ThinBuilding(catalog.d_infinity(), 6).chambers()) == 13


def test_t33_delta_is_type_of_normal_form():
    bld = catalog.t33(6)
    rng = random.Random(3)
    chambers = bld.chambers()
    for _ in range(200):
        x, y = rng.choice(chambers), rng.choice(chambers)
        inv = tuple((v, (3 - a) % 3) for v, a in reversed(x))
        nf = c33_normal_form(inv + y)
        assert bld.wdist(x, y) == tuple(v for v, _ in nf)


def test_singleton_panel_fails():
    sys = catalog.d_infinity()
    bld = ExplicitBuilding(sys, 2, [[[0, 1]], [[0], [1]]])
    rep = verify_building(bld, 2)
    assert not rep.passed
    assert any("1 chamber" in f for f in rep.failures)


def test_overlapping_blocks_rejected():
    sys = catalog.d_infinity()
    with pytest.raises(BuildingError, match="equivalence"):
        ExplicitBuilding(sys, 2, [[[0, 1]], [[0, 1], [1]]])
    with pytest.raises(BuildingError, match="missing"):
        ExplicitBuilding(sys, 3, [[[0, 1]], [[0, 1], [2]]])


def test_hexagon_typed_as_dinf_fails():
    # a 6-cycle of alternating r/s adjacencies is a thin A2 building, not a D-infinity one
    sys = catalog.d_infinity()
    bld = ExplicitBuilding(sys, 6, [[[0, 1], [2, 3], [4, 5]], [[1, 2], [3, 4], [5, 0]]])
    assert not verify_building(bld, 3).passed


def test_radius_zero_has_no_interior():
    rep = verify_building(ThinBuilding(catalog.d_infinity(), 0), 2)
    assert not rep.passed


def test_outside_safe_radius():
    bld = catalog.t33(2)
    edge = ((0, 1), (1, 1))
    assert bld.contains(edge)
    with pytest.raises(OutsideSafeRadius):
        bld.panel(edge, 0)
    assert len(bld.panel_in_ball(edge, 0)) == 1


def test_panels_and_residues():
    bld = catalog.t33(4)
    assert bld.panel((), 0) == ((), ((0, 1),), ((0, 2),))
    assert len(residue(bld, (), [0])) == 3
    gals = galleries_of_type(bld, (), (0, 1))
    assert len(gals) == 4
    assert all(is_gallery(bld, g) for g in gals)
    assert not is_gallery(bld, Gallery(((), ()), (0,)))
    assert not bld.is_thin()
    assert ThinBuilding(catalog.d_infinity(), 3).is_thin()


def test_product_building_metric():
    bld = catalog.product_example(3)
    x, y = (0, ()), (2, ((0, 1), (1, 2)))
    assert bld.wdist(x, y) == (0, 1, 2)
    assert bld.distance(x, y) == 3
    assert bld.margin(x) == 3


def test_trivial_building():
    t = trivial_building()
    assert t.system.rank == 0
    assert t.chambers() == [0]


def test_sample_region_is_bounded():
    region = sample_region(catalog.t33(40), 50)
    assert 50 <= len(region) < 200
    assert region[0] == ()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 252), st.integers(0, 252))
def test_t33_distance_is_gallery_distance(i, j):
    bld = catalog.t33(6)
    chambers = bld.chambers()
    x, y = chambers[i], chambers[j]
    if bld.depth(x) > 3:
        return
    dist = ball_around(bld, x, 3)
    if y in dist:
        assert bld.distance(x, y) == dist[y]
    assert bld.wdist(y, x) == bld.system.invert(bld.wdist(x, y))


def test_bfs_oracle_on_fano():
    bld = catalog.fano_building()
    dist = bfs_distances(0, bld.neighbours)
    assert max(dist.values()) == 3
    assert all(bld.distance(0, y) == d for y, d in dist.items())
