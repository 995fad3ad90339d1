import itertools

import pytest

from oracles import c33_normal_form
from wtits import catalog
from wtits.apartments import NoBranchingPanel, NoParallelWall
from wtits.building import Gallery, ThinBuilding, is_gallery
from wtits.dynamics import left_multiplication
from wtits.freesub import (
    G,
    G_PRIME,
    FreeWord,
    NotFreelyReduced,
    certify_free,
    find_dumbbell,
    free_words,
    normalize_gallery_type,
    word_to_gallery,
)

BLD = catalog.t33(40)
ACT = left_multiplication(BLD)
WIT = find_dumbbell(BLD, ACT)


def syllables_of(word):
    """Action word over x, y as C3 * C3 syllables for the oracle."""
    return tuple((i, e % 3) for i, e in word)


def test_witness_values():
    fmt = ACT.format_word
    assert WIT.period == (0, 1)
    assert (WIT.s0, WIT.k) == (0, 1)
    assert (WIT.c1, WIT.c2, WIT.c3) == ((), ((0, 1),), ((0, 2),))
    assert fmt(WIT.g) == "x y"
    assert fmt(WIT.g_dprime) == "x^2 y"
    assert fmt(WIT.h) == "x^2 y x^-1"
    assert fmt(WIT.g_prime) == "x^2 y x^2 y x^-1 y^-1 x^-2"
    assert set(WIT.sigma()) == {(), ((0, 1),), ((0, 2),)}
    assert WIT.check().passed


def test_endpoint_equations():
    assert WIT.omega.start == WIT.c2
    assert WIT.omega.end == ACT.act(WIT.g, WIT.c1)
    assert WIT.omega_dprime.start == WIT.c3
    assert WIT.omega_dprime.end == ACT.act(WIT.g_dprime, WIT.c1)
    assert WIT.omega_prime.start == ACT.act(WIT.g_dprime, WIT.c3)
    assert WIT.omega_prime.end == ACT.act(WIT.g_prime + WIT.g_dprime, WIT.c2)


@pytest.mark.parametrize("text,periods", [("g", 1), ("g^3", 3), ("g'^-2", 4)])
def test_word_to_gallery(text, periods):
    u = FreeWord.parse(text)
    gal = word_to_gallery(WIT, u)
    assert is_gallery(BLD, gal)
    assert gal.start in WIT.sigma()
    end_panel = BLD.panel(ACT.act(WIT.element(u), WIT.c1), WIT.s0)
    assert gal.end in end_panel
    n, ok = normalize_gallery_type(WIT, gal)
    assert ok and n == periods


def test_normalize_negative_controls():
    gal = word_to_gallery(WIT, FreeWord.parse("g^2"))
    bent = Gallery(gal.chambers, gal.type[:-1] + (0,))
    assert normalize_gallery_type(WIT, bent) == (0, False)
    short = Gallery(gal.chambers[:-1], gal.type[:-1])
    assert normalize_gallery_type(WIT, short) == (0, False)
    assert normalize_gallery_type(WIT, Gallery(((),), ())) == (0, False)


def test_free_word_validation():
    with pytest.raises(NotFreelyReduced):
        FreeWord(((G, 1), (G, 2)))
    with pytest.raises(NotFreelyReduced):
        FreeWord(((G, 0),))
    with pytest.raises(NotFreelyReduced):
        FreeWord(())
    with pytest.raises(NotFreelyReduced):
        FreeWord.parse("g h")
    assert str(FreeWord.parse("g^2 g'^-1 g")) == "g^2 g'^-1 g"
    assert FreeWord.parse("g'").syllables == ((G_PRIME, 1),)


def test_free_word_count():
    # 2 * 4^n words with n syllables and exponents in {+-1, +-2}
    assert sum(1 for _ in free_words(3, 2)) == 2 * (4 + 16 + 64)


def test_stabilizer_of_sigma_matches_coset_oracle():
    sigma = set(WIT.sigma())
    gens = [((0, 1),), ((0, -1),), ((1, 1),), ((1, -1),)]
    for n in range(5):
        for word in itertools.product(gens, repeat=n):
            word = sum(word, ())
            nf = c33_normal_form(syllables_of(word))
            fixes = {ACT.act(word, c) for c in sigma} == sigma
            assert fixes == (nf == () or (len(nf) == 1 and nf[0][0] == 0))


def test_free_words_move_sigma_and_are_distinct():
    sigma = set(WIT.sigma())
    seen = set()
    for u in free_words(3, 2):
        nf = c33_normal_form(syllables_of(WIT.element(u)))
        assert not (nf == () or (len(nf) == 1 and nf[0][0] == 0)), str(u)
        assert ACT.act(WIT.element(u), WIT.c1) not in sigma
        assert nf not in seen
        seen.add(nf)


def test_certificate_t33():
    cert = certify_free(WIT, 4, 2)
    assert cert.passed, cert.failures[:3]
    assert cert.words_total == cert.words_checked == 680
    assert cert.n_max == 19
    assert cert.to_json()["passed"]


def test_reserve_shrinks_the_horizon():
    cert = certify_free(WIT, 2, 2, reserve=30)
    assert cert.n_max == 4
    assert cert.beyond_horizon > 0
    assert cert.passed


def test_rank3_graph_product():
    bld = catalog.rank3_graph_product(24)
    wit = find_dumbbell(bld, left_multiplication(bld))
    assert wit.check().passed
    assert certify_free(wit, 3, 2).passed


def test_thin_and_finite_factor_gates():
    bld = ThinBuilding(catalog.d_infinity(), 10)
    with pytest.raises(NoBranchingPanel):
        find_dumbbell(bld, left_multiplication(bld))
    prod = catalog.product_example(6)
    with pytest.raises(NoParallelWall):
        find_dumbbell(prod, catalog.product_example_action(prod))


def test_pipeline_on_product_quotient():
    from wtits.quotient import induced_action, quotient_building

    bld = catalog.product_example(10)
    data = quotient_building(bld, (0,))
    act = induced_action(data, catalog.product_example_action(bld))
    wit = find_dumbbell(data.quotient, act)
    assert wit.check().passed
    cert = certify_free(wit, 3, 2)
    assert cert.passed
    assert cert.words_checked > 0 and cert.beyond_horizon > 0
