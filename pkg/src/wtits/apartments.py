"""Apartments, walls, roots, and the period word between parallel walls.

An apartment is represented by a finite piece of an isometry W -> building:
the ball of radius R around the identity, mapped chamber by chamber.  All
wall and root computations are relative to that ball.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .building import Building, BuildingError, Gallery, galleries_of_type
from .coxeter import CoxeterSystem, Finite, InfiniteCertified, UnknownBeyond
from .report import Report


class ApartmentNotFound(BuildingError):
    pass


class ApartmentTooSmall(BuildingError):
    pass


class NoBranchingPanel(ValueError):
    pass


class NoParallelWall(ValueError):
    pass


class Uncertified(ValueError):
    pass


class SearchHorizon(ValueError):
    pass


@dataclass
class ApartmentMap:
    building: Building
    radius: int
    image: dict  # W-element -> chamber
    preimage: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.preimage:
            self.preimage = {c: w for w, c in self.image.items()}

    @property
    def system(self) -> CoxeterSystem:
        return self.building.system

    @property
    def domain(self) -> list:
        return sorted(self.image, key=lambda w: (len(w), w))

    def __call__(self, w):
        return self.image[w]

    def inv(self, c):
        try:
            return self.preimage[c]
        except KeyError:
            raise BuildingError(f"{self.building.describe(c)} is not in the apartment") from None

    def __contains__(self, c) -> bool:
        return c in self.preimage

    def check_isometry(self, pairs=None) -> Report:
        sys = self.system
        rep = Report("apartment_isometry")
        dom = self.domain
        if pairs is None:
            pairs = [(u, w) for u in dom for w in dom]
        for u, w in pairs:
            rep.count("pairs")
            got = self.building.wdist(self(u), self(w))
            want = sys.multiply(sys.invert(u), w)
            if got != want:
                rep.fail(f"delta(A({sys.format_word(u)}), A({sys.format_word(w)})) = "
                         f"{sys.format_word(got)}, expected {sys.format_word(want)}")
        return rep


def find_apartment(bld: Building, x, y, radius: int, budget: int = 200_000) -> ApartmentMap:
    """An apartment ball with A(1) = x containing y, by backtracking extension."""
    sys = bld.system
    d = bld.wdist(x, y)
    if len(d) > radius:
        raise ApartmentTooSmall(f"d(x, y) = {len(d)} exceeds the apartment radius {radius}")
    seeds = [g for g in galleries_of_type(bld, x, d) if g.end == y]
    if not seeds:
        raise ApartmentNotFound("no gallery of type delta(x, y) joins x to y: not a building")
    image = {}
    for i, c in enumerate(seeds[0].chambers):
        image[sys.reduce(d[:i])] = c
    domain = sys.ball(radius)
    todo = [w for w in domain if w not in image]
    used = set(image.values())
    steps = 0

    def consistent(w, c) -> bool:
        for u, cu in image.items():
            if bld.wdist(cu, c) != sys.multiply(sys.invert(u), w):
                return False
        return True

    def extend(i: int) -> bool:
        nonlocal steps
        if i == len(todo):
            return True
        w = todo[i]
        v, s = w[:-1], w[-1]
        here = image[v]
        for c in bld.panel(here, s):
            steps += 1
            if steps > budget:
                raise ApartmentNotFound(f"apartment search exceeded {budget} steps")
            if c == here or c in used or not consistent(w, c):
                continue
            image[w] = c
            used.add(c)
            if extend(i + 1):
                return True
            del image[w]
            used.discard(c)
        return False

    if not extend(0):
        raise ApartmentNotFound("isometric extension exhausted: input violates the building axioms")
    return ApartmentMap(bld, radius, dict(image))


# --- walls and roots ----------------------------------------------------------


@dataclass(frozen=True)
class WallPanel:
    type: int
    elements: tuple  # (w, r w) in the domain, shortlex ordered
    chambers: tuple


@dataclass(frozen=True)
class Wall:
    reflection: tuple
    anchor: tuple  # u with r = u s u^-1
    generator: int  # s
    panels: tuple

    def panel_containing(self, w) -> WallPanel | None:
        for p in self.panels:
            if w in p.elements:
                return p
        return None

    def elements(self) -> set:
        return {w for p in self.panels for w in p.elements}


@dataclass(frozen=True)
class Root:
    sign: int
    elements: frozenset


def wall_of_reflection(A: ApartmentMap, u, s: int) -> Wall:
    sys = A.system
    r = sys.reflection(u, s)
    key = lambda w: (len(w), w)
    panels = {}
    for w in A.image:
        rw = sys.multiply(r, w)
        if rw == w or rw not in A.image:
            continue
        step = sys.multiply(sys.invert(w), rw)
        if len(step) != 1:
            continue
        pair = tuple(sorted((w, rw), key=key))
        if pair not in panels:
            panels[pair] = WallPanel(step[0], pair, (A(pair[0]), A(pair[1])))
    ordered = tuple(panels[p] for p in sorted(panels, key=lambda p: (key(p[0]), key(p[1]))))
    return Wall(r, u, s, ordered)


def wall_through_panel(A: ApartmentMap, c, s: int) -> Wall:
    """The wall of the reflection fixing the s-panel of chamber c."""
    u = A.inv(c)
    return wall_of_reflection(A, u, s)


def roots_of(A: ApartmentMap, wall: Wall) -> tuple[Root, Root]:
    sys = A.system
    u = wall.anchor
    us = sys.right_mul(u, wall.generator)
    plus, minus = set(), set()
    for w in A.image:
        a = len(sys.multiply(sys.invert(w), u))
        b = len(sys.multiply(sys.invert(w), us))
        if a == b:
            raise AssertionError("a chamber is equidistant from both sides of a wall")
        (plus if a < b else minus).add(w)
    return Root(+1, frozenset(plus)), Root(-1, frozenset(minus))


def all_walls(A: ApartmentMap, max_depth: int | None = None) -> list:
    """Distinct walls crossing panels of the apartment ball (optionally near the identity)."""
    sys = A.system
    seen = {}
    for w in A.domain:
        if max_depth is not None and len(w) > max_depth:
            continue
        for s in range(sys.rank):
            if sys.right_mul(w, s) not in A.image:
                continue
            r = sys.reflection(w, s)
            if r not in seen:
                seen[r] = wall_of_reflection(A, w, s)
    return [seen[r] for r in sorted(seen, key=lambda r: (len(r), r))]


def check_branching_propagation(bld: Building, A: ApartmentMap, wall: Wall) -> Report:
    """Every panel of a wall with one branching panel must branch."""
    rep = Report("branching_propagation")
    degrees = []
    for p in wall.panels:
        c = p.chambers[0]
        if not bld.safe(c, 1):
            rep.warn(f"panel at {bld.describe(c)} skipped: beyond the exact ball")
            continue
        degrees.append((p, len(bld.panel(c, p.type))))
    if not any(deg >= 3 for _, deg in degrees):
        raise NoBranchingPanel("the wall has no branching panel; nothing to propagate")
    for p, deg in degrees:
        rep.count("panels")
        if deg < 3:
            rep.fail(
                f"{bld.system.names[p.type]}-panel at {bld.describe(p.chambers[0])} has degree {deg}"
            )
    return rep


def _distance_to_wall(sys: CoxeterSystem, w, wall: Wall) -> int:
    return min(len(sys.multiply(sys.invert(w), p)) for p in wall.elements())


def find_parallel_wall(A: ApartmentMap, wall: Wall, radius_schedule=None, cap: int = 64) -> Wall:
    """A wall whose reflection generates an infinite dihedral group with ``wall``'s."""
    sys = A.system
    dec = sys.decompose_diagram()
    if dec.has_finite_factor():
        names = [sys.format_word(c) for c, f in zip(dec.components, dec.finite_flags) if f]
        raise NoParallelWall(f"W has a finite factor on {names}: quotient it first")
    if radius_schedule is None:
        radius_schedule, rho = [], 1
        while rho < A.radius:
            radius_schedule.append(rho)
            rho *= 2
        radius_schedule.append(A.radius)
    dist = {w: _distance_to_wall(sys, w, wall) for w in A.image}
    candidates = {}
    for w in A.image:
        for t in range(sys.rank):
            if sys.right_mul(w, t) not in A.image:
                continue
            r2 = sys.reflection(w, t)
            if r2 == wall.reflection:
                continue
            key = (dist[w], len(r2), r2)
            if r2 not in candidates or key < candidates[r2][0]:
                candidates[r2] = (key, w, t)
    ordered = sorted(candidates.values())
    unknown = 0
    tested = set()
    for rho in radius_schedule:
        for key, w, t in ordered:
            if key[0] > rho:
                break
            r2 = key[2]
            if r2 in tested:
                continue
            tested.add(r2)
            verdict = sys.order_of(sys.multiply(wall.reflection, r2), cap)
            if isinstance(verdict, InfiniteCertified):
                return wall_of_reflection(A, w, t)
            if isinstance(verdict, UnknownBeyond):
                unknown += 1
    if unknown:
        raise Uncertified(f"{unknown} candidate walls had products of unknown order (cap {cap})")
    raise SearchHorizon(f"no parallel wall within apartment radius {A.radius}")


@dataclass(frozen=True)
class WallGalleryData:
    gallery: Gallery
    start: tuple  # W-element of the first chamber
    end: tuple
    s0: int
    sk: int
    k: int
    period: tuple  # s_0 ... s_{2k-1}

    @property
    def interior(self) -> tuple:
        return self.gallery.type


def period_word(s0: int, interior, sk: int) -> tuple:
    interior = tuple(interior)
    return (s0,) + interior + (sk,) + tuple(reversed(interior))


def min_wall_gallery(A: ApartmentMap, wall: Wall, other: Wall) -> WallGalleryData:
    """Shortest gallery from a chamber of a panel of ``wall`` to one of ``other``."""
    sys = A.system
    bld = A.building
    if wall.reflection == other.reflection:
        raise ValueError("the two walls coincide")
    if not wall.panels or not other.panels:
        raise ApartmentTooSmall("a wall has no panel inside the apartment ball")
    best = None
    for p in sorted(wall.elements(), key=lambda w: (len(w), w)):
        for q in sorted(other.elements(), key=lambda w: (len(w), w)):
            d = sys.multiply(sys.invert(p), q)
            key = (len(d), d, bld.sort_key(A(p)), bld.sort_key(A(q)))
            if best is None or key < best[0]:
                best = (key, p, q, d)
    _, p, q, d = best
    elems = [p]
    for letter in d:
        elems.append(sys.right_mul(elems[-1], letter))
    if any(w not in A.image for w in elems):
        raise ApartmentTooSmall("the minimal gallery leaves the apartment ball")
    gallery = Gallery(tuple(A(w) for w in elems), tuple(d))
    s0 = wall.panel_containing(p).type
    sk = other.panel_containing(q).type
    k = len(d) + 1
    return WallGalleryData(gallery, p, q, s0, sk, k, period_word(s0, d, sk))


def certify_geodesic_power(sys: CoxeterSystem, data, n: int) -> bool:
    """Whether s_0 w^n reduces to length 2kn - 1, i.e. the displayed word is geodesic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    period = tuple(data.period)
    k = len(period) // 2
    word = (data.s0,) + period * n
    return len(sys.reduce(word)) == 2 * k * n - 1
