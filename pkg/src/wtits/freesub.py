"""Two translations generating a free group, certified word by word.

Starting from a branching panel, a wall through it and a parallel wall give
a period word w.  Three returns of the period walk produce group elements
g, g' and galleries whose concatenations, for any freely reduced word u in
g and g', have type s_0 w^N.  Those types are geodesic, so u moves the
panel sigma off itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian

from .apartments import (
    NoBranchingPanel,
    NoParallelWall,
    WallGalleryData,
    certify_geodesic_power,
    check_branching_propagation,
    find_apartment,
    find_parallel_wall,
    min_wall_gallery,
    wall_through_panel,
)
from .building import Building, BuildingError, Gallery, OutsideSafeRadius, ball_around, is_gallery
from .dynamics import (
    GroupAction,
    StateSpace,
    find_recurrence,
    free_reduce,
    inverse_word,
    quotient_graph,
)
from .report import Report

G, G_PRIME = 0, 1
SYMBOLS = ("g", "g'")


class NotFreelyReduced(ValueError):
    pass


@dataclass(frozen=True)
class FreeWord:
    syllables: tuple  # ((symbol, exponent), ...)

    def __post_init__(self):
        if not self.syllables:
            raise NotFreelyReduced("the empty word is trivial")
        for i, (sym, e) in enumerate(self.syllables):
            if sym not in (G, G_PRIME):
                raise NotFreelyReduced(f"unknown symbol {sym!r}")
            if e == 0:
                raise NotFreelyReduced("zero exponent")
            if i and self.syllables[i - 1][0] == sym:
                raise NotFreelyReduced("adjacent syllables use the same symbol")

    @classmethod
    def parse(cls, text: str) -> "FreeWord":
        """Parse e.g. ``"g^2 g'^-1 g"``."""
        out = []
        for part in text.split():
            base, _, exp = part.partition("^")
            if base not in SYMBOLS:
                raise NotFreelyReduced(f"unknown symbol {base!r}")
            out.append((SYMBOLS.index(base), int(exp) if exp else 1))
        return cls(tuple(out))

    def __str__(self) -> str:
        return " ".join(SYMBOLS[s] if e == 1 else f"{SYMBOLS[s]}^{e}" for s, e in self.syllables)


def free_words(max_syllables: int, max_exponent: int):
    """Every freely reduced word with at most the given syllable count and |exponent|."""
    exps = [e for n in range(1, max_exponent + 1) for e in (n, -n)]
    for length in range(1, max_syllables + 1):
        for first in (G, G_PRIME):
            symbols = tuple((first + i) % 2 for i in range(length))
            for combo in cartesian(exps, repeat=length):
                yield FreeWord(tuple(zip(symbols, combo)))


@dataclass
class DumbbellWitness:
    building: Building
    action: GroupAction
    data: WallGalleryData
    sigma_type: int
    c1: object
    c2: object
    c3: object
    g: tuple
    g_dprime: tuple
    h: tuple  # from the (c2, c3) return; g' = g'' h g''^-1
    omega: Gallery  # c2 -> g c1
    omega_dprime: Gallery  # c3 -> g'' c1
    omega_prime: Gallery  # g'' c3 -> g' g'' c2
    apartment: object = None
    wall: object = None
    parallel: object = None
    reports: list = field(default_factory=list)

    @property
    def period(self) -> tuple:
        return tuple(self.data.period)

    @property
    def s0(self) -> int:
        return self.data.s0

    @property
    def k(self) -> int:
        return len(self.period) // 2

    @property
    def g_prime(self) -> tuple:
        return free_reduce(self.g_dprime + self.h + inverse_word(self.g_dprime))

    def sigma(self) -> tuple:
        return self.building.panel(self.c1, self.s0)

    def element(self, u: FreeWord) -> tuple:
        gens = {G: self.g, G_PRIME: self.g_prime}
        word = ()
        for sym, e in u.syllables:
            piece = gens[sym] if e > 0 else inverse_word(gens[sym])
            word += piece * abs(e)
        return free_reduce(word)

    def periods_of(self, gallery: Gallery) -> int:
        return (len(gallery.type) + 1) // (2 * self.k)

    def check(self) -> Report:
        """Endpoint equations and gallery types of the three galleries."""
        rep = Report("dumbbell")
        act = self.action.act
        sigma = self.sigma()
        if len(sigma) < 3:
            rep.fail(f"sigma has degree {len(sigma)}")
        if len({self.c1, self.c2, self.c3}) != 3 or not all(c in sigma for c in (self.c2, self.c3)):
            rep.fail("c1, c2, c3 are not three distinct chambers of sigma")
        want = [
            ("omega", self.omega, self.c2, act(self.g, self.c1)),
            ("omega''", self.omega_dprime, self.c3, act(self.g_dprime, self.c1)),
            ("omega'", self.omega_prime, act(self.g_dprime, self.c3),
             act(self.g_prime + self.g_dprime, self.c2)),
        ]
        for name, gal, start, end in want:
            if gal.start != start or gal.end != end:
                rep.fail(f"{name} has the wrong endpoints")
            if not is_gallery(self.building, gal):
                rep.fail(f"{name} is not a gallery")
            n, ok = normalize_gallery_type(self, gal)
            if not ok:
                rep.fail(f"{name} does not have type s0 w^m")
            elif not certify_geodesic_power(self.building.system, self.data, n):
                rep.fail(f"{name}: s0 w^{n} is not geodesic")
        return rep


def _branching_panel(bld: Building, max_depth: int):
    seen = set()
    for depth in range(max_depth + 1):
        if not bld.safe(bld.base, depth):
            break
        shell = ball_around(bld, bld.base, depth)
        layer = sorted((c for c, d in shell.items() if d == depth and c not in seen), key=bld.sort_key)
        seen.update(layer)
        for c in layer:
            if not bld.safe(c, 1):
                continue
            for s in range(bld.system.rank):
                if len(bld.panel(c, s)) >= 3:
                    return c, s
    return None


def _recurrence_gallery(space: StateSpace, rec) -> Gallery:
    return Gallery(tuple(a[0] for a in rec.states), rec.gallery_type(space))


def find_dumbbell(
    bld: Building,
    action: GroupAction,
    apartment_radius: int = 4,
    order_cap: int = 64,
    search_depth: int = 6,
    budget: int = 10_000,
) -> DumbbellWitness:
    sys = bld.system
    dec = sys.decompose_diagram()
    if dec.has_finite_factor():
        names = [sys.format_word(c) for c, f in zip(dec.components, dec.finite_flags) if f]
        raise NoParallelWall(f"W has a finite factor on {names}: quotient it first")
    if bld.is_thin():
        raise NoBranchingPanel("the building is thin: use the rho homomorphism instead")
    found = _branching_panel(bld, search_depth)
    if found is None:
        raise NoBranchingPanel(f"no branching panel within distance {search_depth} of the base")
    c, s = found
    other = next(x for x in sorted(bld.panel(c, s), key=bld.sort_key) if x != c)
    A = find_apartment(bld, c, other, apartment_radius)
    wall = wall_through_panel(A, c, s)
    reports = [check_branching_propagation(bld, A, wall)]
    parallel = find_parallel_wall(A, wall, cap=order_cap)
    data = min_wall_gallery(A, wall, parallel)

    c1 = data.gallery.start
    sigma = sorted(bld.panel(c1, data.s0), key=bld.sort_key)
    if len(sigma) < 3:
        raise AssertionError("the wall panel at the start of the minimal gallery does not branch")
    c2, c3 = [x for x in sigma if x != c1][:2]

    space = StateSpace(bld, data.period)
    graph = quotient_graph(space, action, budget=budget)
    r1 = find_recurrence(space, action, c1, c2, graph)
    r3 = find_recurrence(space, action, c1, c3, graph)
    r2 = find_recurrence(space, action, c2, c3, graph)
    beta = _recurrence_gallery(space, r2)
    e = action.compile(r3.g)
    omega_prime = Gallery(tuple(action.apply_element(e, x) for x in beta.chambers), beta.type)
    wit = DumbbellWitness(
        bld, action, data, data.s0, c1, c2, c3,
        g=r1.g, g_dprime=r3.g, h=r2.g,
        omega=_recurrence_gallery(space, r1),
        omega_dprime=_recurrence_gallery(space, r3),
        omega_prime=omega_prime,
        apartment=A, wall=wall, parallel=parallel, reports=reports,
    )
    check = wit.check()
    if not check:
        raise AssertionError("; ".join(check.failures))
    wit.reports.append(check)
    return wit


def _translate(wit: DumbbellWitness, word, gallery: Gallery) -> Gallery:
    e = wit.action.compile(word)
    return Gallery(tuple(wit.action.apply_element(e, x) for x in gallery.chambers), gallery.type)


def _power(word, n: int) -> tuple:
    return free_reduce((word if n > 0 else inverse_word(word)) * abs(n))


def segments(wit: DumbbellWitness, u: FreeWord) -> list:
    """The translated galleries whose concatenation joins sigma to u sigma."""
    out = []
    prefix = ()
    gp = wit.g_prime
    for sym, n in u.syllables:
        if sym == G:
            if n > 0:
                out += [_translate(wit, prefix + _power(wit.g, j), wit.omega) for j in range(n)]
            else:
                inv = wit.omega.inverse()
                out += [_translate(wit, prefix + _power(wit.g, -j), inv) for j in range(1, -n + 1)]
            prefix = free_reduce(prefix + _power(wit.g, n))
        else:
            out.append(_translate(wit, prefix, wit.omega_dprime))
            if n > 0:
                out += [_translate(wit, prefix + _power(gp, j), wit.omega_prime) for j in range(n)]
            else:
                inv = wit.omega_prime.inverse()
                out += [_translate(wit, prefix + _power(gp, -j), inv) for j in range(1, -n + 1)]
            out.append(_translate(wit, prefix + _power(gp, n), wit.omega_dprime.inverse()))
            prefix = free_reduce(prefix + _power(gp, n))
    return out


def word_to_gallery(wit: DumbbellWitness, u: FreeWord) -> Gallery:
    bld = wit.building
    parts = segments(wit, u)
    chambers = list(parts[0].chambers)
    types = list(parts[0].type)
    for seg in parts[1:]:
        end, start = chambers[-1], seg.start
        if end == start:
            raise BuildingError("consecutive segments share an endpoint")
        if start not in bld.panel(end, wit.s0):
            raise BuildingError("consecutive segments are not joined across an s0-panel")
        types.append(wit.s0)
        chambers.extend(seg.chambers)
        types.extend(seg.type)
    return Gallery(tuple(chambers), tuple(types))


def normalize_gallery_type(wit: DumbbellWitness, gallery: Gallery) -> tuple:
    """(N, True) when the gallery type spells s0 w^N after cancelling s0 s0; else (0, False)."""
    t = tuple(gallery.type)
    size = 2 * wit.k
    if not t or (len(t) + 1) % size:
        return 0, False
    n = (len(t) + 1) // size
    if t != (wit.period * n)[1:]:
        return 0, False
    return n, True


@dataclass
class Certificate:
    max_syllables: int
    max_exponent: int
    n_max: int
    reserve: int = 0
    words_total: int = 0
    words_checked: int = 0
    beyond_horizon: int = 0
    gallery_verdicts: int = 0
    direct_verdicts: int = 0
    disagreements: int = 0
    injective: bool = True
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.failures
            and self.words_checked > 0
            and self.gallery_verdicts == self.words_checked
            and self.direct_verdicts == self.words_checked
            and self.injective
        )

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_syllables": self.max_syllables,
            "max_exponent": self.max_exponent,
            "n_max": self.n_max,
            "reserve": self.reserve,
            "words_total": self.words_total,
            "words_checked": self.words_checked,
            "beyond_horizon": self.beyond_horizon,
            "gallery_verdicts": self.gallery_verdicts,
            "direct_verdicts": self.direct_verdicts,
            "disagreements": self.disagreements,
            "injective": self.injective,
            "failures": sorted(self.failures),
        }


def _periods(wit: DumbbellWitness, u: FreeWord) -> int:
    m1, m2, m3 = (wit.periods_of(x) for x in (wit.omega, wit.omega_prime, wit.omega_dprime))
    total = 0
    for sym, n in u.syllables:
        total += abs(n) * m1 if sym == G else 2 * m3 + abs(n) * m2
    return total


def certify_free(wit: DumbbellWitness, max_syllables: int, max_exponent: int = 2, reserve: int = 0) -> Certificate:
    """Check every freely reduced word up to the given size whose galleries fit in the ball.

    ``reserve`` keeps that many extra chambers between the galleries and the ball boundary.
    """
    bld = wit.building
    sys = bld.system
    act = wit.action
    margin = bld.margin(wit.c1)
    n_max = int(min(margin - 1 - reserve, 10**9) // (2 * wit.k))
    cert = Certificate(max_syllables, max_exponent, n_max, reserve)
    sigma = set(wit.sigma())
    test_set = sorted(sigma, key=bld.sort_key)
    images = {tuple(test_set): "1"}
    for u in free_words(max_syllables, max_exponent):
        cert.words_total += 1
        if _periods(wit, u) > n_max:
            cert.beyond_horizon += 1
            continue
        name = str(u)
        elem = act.compile(wit.element(u))
        try:
            uc1 = act.apply_element(elem, wit.c1)
            end_panel = bld.panel(uc1, wit.s0)
            gal = word_to_gallery(wit, u)
        except OutsideSafeRadius:
            # the period count underestimates reach when margins are not 1-Lipschitz (quotients)
            cert.beyond_horizon += 1
            continue
        except BuildingError as exc:
            cert.words_checked += 1
            cert.failures.append(f"{name}: gallery does not build ({exc})")
            continue
        cert.words_checked += 1
        if not is_gallery(bld, gal):
            cert.failures.append(f"{name}: consecutive chambers are not adjacent")
            continue
        if gal.start not in sigma or gal.end not in end_panel:
            cert.failures.append(f"{name}: gallery does not join sigma to u sigma")
        n, typed = normalize_gallery_type(wit, gal)
        via_gallery = (
            typed
            and certify_geodesic_power(sys, wit.data, n)
            and sys.reduce((wit.s0,) + wit.period * n) not in ((), (wit.s0,))
        )
        direct = uc1 not in sigma
        cert.gallery_verdicts += bool(via_gallery)
        cert.direct_verdicts += bool(direct)
        if bool(via_gallery) != direct:
            cert.disagreements += 1
            cert.failures.append(f"{name}: gallery verdict {bool(via_gallery)} but direct verdict {direct}")
        elif not direct:
            cert.failures.append(f"{name}: u sigma = sigma")
        key = tuple(act.apply_element(elem, c) for c in test_set)
        if key in images:
            cert.injective = False
            cert.failures.append(f"{name} and {images[key]} act identically on sigma")
        else:
            images[key] = name
    return cert
