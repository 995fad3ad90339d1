"""Buildings as typed chamber systems with a W-metric.

Four backends share one interface:

* ``ExplicitBuilding`` - finitely many integer chambers, one partition per
  generator.  The W-metric comes from breadth-first search over galleries
  (the type of a shortest gallery, reduced), or from a supplied function.
* ``ThinBuilding`` - a ball in the Coxeter complex of W itself.
* ``GraphProductBuilding`` - the right-angled building of a graph product
  of cyclic groups; chambers are group elements in normal form.
* ``ProductBuilding`` - chambers are pairs, the type is W1 x W2.

Ball backends only promise exact answers in their interior: ``panel``
raises :class:`OutsideSafeRadius` for chambers whose panels may be cut by
the ball boundary instead of returning a truncated panel.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .coxeter import CoxeterError, CoxeterMatrix, CoxeterSystem, INF, product_system
from .graphproduct import GraphProductGroup
from .report import Report


class BuildingError(ValueError):
    pass


class OutsideSafeRadius(LookupError):
    """A query needs chambers beyond the exact part of a ball backend."""


@dataclass(frozen=True)
class Gallery:
    chambers: tuple
    type: tuple

    def __post_init__(self):
        if len(self.chambers) != len(self.type) + 1:
            raise BuildingError("a gallery of type length k has k+1 chambers")

    def __len__(self) -> int:
        return len(self.type)

    @property
    def start(self):
        return self.chambers[0]

    @property
    def end(self):
        return self.chambers[-1]

    def inverse(self) -> "Gallery":
        return Gallery(tuple(reversed(self.chambers)), tuple(reversed(self.type)))


@dataclass(frozen=True)
class Panel:
    type: int
    chambers: tuple

    @property
    def degree(self) -> int:
        return len(self.chambers)

    @property
    def branching(self) -> bool:
        return self.degree >= 3

    def __contains__(self, c) -> bool:
        return c in self.chambers


class Building:
    """Common interface; subclasses implement ``_panel`` and ``wdist``."""

    system: CoxeterSystem
    base: object
    radius: int | None  # None: every chamber is represented

    def chambers(self) -> list:
        raise NotImplementedError

    def contains(self, c) -> bool:
        raise NotImplementedError

    def depth(self, c) -> int:
        """Gallery distance from the base chamber."""
        return len(self.wdist(self.base, c))

    def margin(self, c) -> float:
        """Largest k such that every chamber within distance k of c is represented."""
        if self.radius is None:
            return math.inf
        return self.radius - self.depth(c)

    def safe(self, c, k: int = 1) -> bool:
        return self.contains(c) and k <= self.margin(c)

    def _panel(self, c, s) -> tuple:
        raise NotImplementedError

    def panel(self, c, s: int) -> tuple:
        if not 0 <= s < self.system.rank:
            raise CoxeterError(f"invalid generator {s!r}")
        if not self.safe(c, 1):
            raise OutsideSafeRadius(f"panel of {self.describe(c)} may be truncated by the ball")
        return self._panel(c, s)

    def panel_in_ball(self, c, s: int) -> tuple:
        """The panel intersected with the represented chambers; never raises."""
        return tuple(x for x in self._panel(c, s) if self.contains(x))

    def panel_of(self, c, s: int) -> Panel:
        return Panel(s, self.panel(c, s))

    def wdist(self, x, y) -> tuple:
        raise NotImplementedError

    def distance(self, x, y) -> int:
        return len(self.wdist(x, y))

    def is_thin(self) -> bool:
        raise NotImplementedError

    def sort_key(self, c):
        return c

    def describe(self, c) -> str:
        return repr(c)

    def encode(self, c):
        return c

    def decode(self, obj):
        return obj

    def neighbours(self, c) -> list:
        out = []
        for s in range(self.system.rank):
            out.extend(x for x in self.panel(c, s) if x != c)
        return out


# --- explicit -------------------------------------------------------------------


class ExplicitBuilding(Building):
    def __init__(
        self,
        system: CoxeterSystem,
        n_chambers: int,
        partitions: Sequence[Sequence[Sequence[int]]],
        labels: Sequence[str] | None = None,
        base: int = 0,
        radius: int | None = None,
        metric: Callable | None = None,
        margins: Sequence | None = None,
    ):
        self.system = system
        self.n = n_chambers
        if n_chambers < 1:
            raise BuildingError("a building needs at least one chamber")
        if len(partitions) != system.rank:
            raise BuildingError(f"expected {system.rank} partitions, got {len(partitions)}")
        self._block = []
        for s, blocks in enumerate(partitions):
            where = {}
            for block in blocks:
                block = tuple(sorted(block))
                if not block:
                    raise BuildingError(f"empty block for generator {system.names[s]}")
                for c in block:
                    if not (isinstance(c, int) and 0 <= c < n_chambers):
                        raise BuildingError(f"chamber {c!r} out of range")
                    if c in where:
                        raise BuildingError(
                            f"chamber {c} lies in two {system.names[s]}-blocks: adjacency is not an equivalence"
                        )
                    where[c] = block
            missing = set(range(n_chambers)) - set(where)
            if missing:
                raise BuildingError(
                    f"chambers {sorted(missing)[:5]} are missing from the {system.names[s]}-partition"
                )
            self._block.append(where)
        self.labels = list(labels) if labels is not None else None
        self.base = base
        self.radius = radius
        self._metric = metric
        self._margins = None if margins is None else list(margins)
        self._bfs_cache: dict = {}
        self._depth = None

    def chambers(self) -> list:
        return list(range(self.n))

    def contains(self, c) -> bool:
        return isinstance(c, int) and 0 <= c < self.n

    def _panel(self, c, s):
        return self._block[s][c]

    def partitions(self) -> list:
        return [sorted(set(blocks.values())) for blocks in self._block]

    def depth(self, c) -> int:
        if self._depth is None:
            self._depth = {y: d for y, (d, _) in self._bfs(self.base).items()}
        return self._depth[c]

    def _bfs(self, x):
        hit = self._bfs_cache.get(x)
        if hit is not None:
            return hit
        out = {x: (0, ())}
        queue = deque([x])
        while queue:
            c = queue.popleft()
            d, word = out[c]
            for s in range(self.system.rank):
                for y in self._block[s][c]:
                    if y not in out:
                        out[y] = (d + 1, word + (s,))
                        queue.append(y)
        self._bfs_cache[x] = out
        return out

    def margin(self, c) -> float:
        if self._margins is not None:
            return self._margins[c]
        return super().margin(c)

    def gallery_distance(self, x, y) -> int | None:
        hit = self._bfs(x).get(y)
        return None if hit is None else hit[0]

    def wdist(self, x, y):
        if not (self.contains(x) and self.contains(y)):
            raise BuildingError(f"unknown chamber in ({x!r}, {y!r})")
        if self._metric is not None:
            return self._metric(x, y)
        hit = self._bfs(x).get(y)
        if hit is None:
            raise BuildingError(f"chambers {x} and {y} are not connected")
        d, word = hit
        if d > max(self.margin(x), self.margin(y)):
            raise OutsideSafeRadius(f"a geodesic from {x} to {y} may leave the ball")
        return self.system.reduce(word)

    def is_complete(self) -> bool:
        return self._margins is None and self.radius is None

    def is_thin(self) -> bool:
        return all(
            len(self._block[s][c]) <= 2
            for s in range(self.system.rank)
            for c in range(self.n)
            if self.safe(c, 1)
        )

    def describe(self, c) -> str:
        if self.labels:
            return f"{c}:{self.labels[c]}"
        return str(c)


# --- thin -----------------------------------------------------------------------


class ThinBuilding(Building):
    """The ball of radius R in W with x ~_s xs and delta(x, y) = x^-1 y."""

    def __init__(self, system: CoxeterSystem, radius: int):
        if radius < 0:
            raise BuildingError("radius must be >= 0")
        self.system = system
        self.base = ()
        self.ball_radius = radius
        longest = system.longest_length()
        self.radius = None if longest is not None and radius >= longest else radius
        self._chambers = None

    def chambers(self) -> list:
        if self._chambers is None:
            self._chambers = self.system.ball(self.ball_radius)
        return list(self._chambers)

    def contains(self, c) -> bool:
        return isinstance(c, tuple) and len(c) <= self.ball_radius

    def depth(self, c) -> int:
        return len(c)

    def _panel(self, c, s):
        return tuple(sorted((c, self.system.right_mul(c, s)), key=self.sort_key))

    def wdist(self, x, y):
        if not (self.contains(x) and self.contains(y)):
            raise OutsideSafeRadius("chamber outside the ball")
        sys = self.system
        return sys.multiply(sys.invert(x), y)

    def is_thin(self) -> bool:
        return True

    def sort_key(self, c):
        return (len(c), c)

    def describe(self, c) -> str:
        return self.system.format_word(c)

    def encode(self, c):
        return [self.system.names[i] for i in c]

    def decode(self, obj):
        return self.system.reduce(self.system.parse_word(obj))


# --- graph product --------------------------------------------------------------


def right_angled_system(n: int, edges, names=()) -> CoxeterSystem:
    pairs = {}
    edge_set = {frozenset(e) for e in edges}
    for i in range(n):
        for j in range(i + 1, n):
            pairs[(i, j)] = 2 if frozenset((i, j)) in edge_set else INF
    from .coxeter import new_system

    return new_system(CoxeterMatrix.from_pairs(n, pairs), names)


class GraphProductBuilding(Building):
    """Right-angled building of a graph product of cyclic groups (chambers = group elements)."""

    def __init__(self, n_vertices: int, edges, sizes, radius: int, names=()):
        edges = [tuple(e) for e in edges]
        self.group = GraphProductGroup(n_vertices, edges, sizes)
        self.edges = sorted(tuple(sorted(e)) for e in edges)
        self.system = right_angled_system(n_vertices, edges, names)
        self.base = ()
        self.ball_radius = radius
        self.radius = None if self.group.is_finite() and radius >= n_vertices else radius
        self._chambers = None

    def chambers(self) -> list:
        if self._chambers is None:
            self._chambers = self.group.ball(self.ball_radius)
        return list(self._chambers)

    def contains(self, c) -> bool:
        return isinstance(c, tuple) and len(c) <= self.ball_radius

    def depth(self, c) -> int:
        return len(c)

    def _panel(self, c, s):
        g = self.group
        return tuple(sorted((g.mul_syllable(c, s, a) for a in range(g.sizes[s])), key=self.sort_key))

    def wdist(self, x, y):
        if not (self.contains(x) and self.contains(y)):
            raise OutsideSafeRadius("chamber outside the ball")
        g = self.group
        return g.type_word(g.multiply(g.inverse(x), y))

    def is_thin(self) -> bool:
        return all(q == 2 for q in self.group.sizes)

    def sort_key(self, c):
        return (len(c), c)

    def describe(self, c) -> str:
        if not c:
            return "1"
        names = self.system.names
        return "".join(names[v] if a == 1 else f"{names[v]}^{a}" for v, a in c)

    def encode(self, c):
        return [[self.system.names[v], a] for v, a in c]

    def decode(self, obj):
        out = ()
        for name, a in obj:
            out = self.group.mul_syllable(out, self.system.index(name), int(a))
        return out


# --- products -------------------------------------------------------------------


class ProductBuilding(Building):
    def __init__(self, first: Building, second: Building):
        self.first = first
        self.second = second
        self.system = product_system(first.system, second.system)
        self.split = first.system.rank
        self.base = (first.base, second.base)
        if first.radius is None and second.radius is None:
            self.radius = None
        else:
            # informational only: safety is decided per factor
            self.radius = (first.radius or 0) + (second.radius or 0)
        self._chambers = None

    def chambers(self) -> list:
        if self._chambers is None:
            self._chambers = [(a, b) for a in self.first.chambers() for b in self.second.chambers()]
        return list(self._chambers)

    def contains(self, c) -> bool:
        return (
            isinstance(c, tuple)
            and len(c) == 2
            and self.first.contains(c[0])
            and self.second.contains(c[1])
        )

    def depth(self, c) -> int:
        return self.first.depth(c[0]) + self.second.depth(c[1])

    def margin(self, c) -> float:
        return min(self.first.margin(c[0]), self.second.margin(c[1]))

    def _panel(self, c, s):
        a, b = c
        if s < self.split:
            return tuple((x, b) for x in self.first._panel(a, s))
        return tuple((a, y) for y in self.second._panel(b, s - self.split))

    def panel(self, c, s: int):
        if not 0 <= s < self.system.rank:
            raise CoxeterError(f"invalid generator {s!r}")
        a, b = c
        if s < self.split:
            return tuple((x, b) for x in self.first.panel(a, s))
        return tuple((a, y) for y in self.second.panel(b, s - self.split))

    def wdist(self, x, y):
        d1 = self.first.wdist(x[0], y[0])
        d2 = self.second.wdist(x[1], y[1])
        # factor-one letters are smaller and commute with factor two: this is shortlex
        return tuple(d1) + tuple(s + self.split for s in d2)

    def is_thin(self) -> bool:
        return self.first.is_thin() and self.second.is_thin()

    def sort_key(self, c):
        return (self.first.sort_key(c[0]), self.second.sort_key(c[1]))

    def describe(self, c) -> str:
        return f"({self.first.describe(c[0])}, {self.second.describe(c[1])})"

    def encode(self, c):
        return [self.first.encode(c[0]), self.second.encode(c[1])]

    def decode(self, obj):
        return (self.first.decode(obj[0]), self.second.decode(obj[1]))


def trivial_building() -> ExplicitBuilding:
    """One chamber, rank 0: the neutral factor for products."""
    sys = CoxeterSystem(CoxeterMatrix(0, ()), ())
    return ExplicitBuilding(sys, 1, [])


# --- constructors ---------------------------------------------------------------


def thin_building(system: CoxeterSystem, radius: int) -> ThinBuilding:
    return ThinBuilding(system, radius)


def graph_product_building(n_vertices: int, edges, sizes, radius: int, names=()) -> GraphProductBuilding:
    return GraphProductBuilding(n_vertices, edges, sizes, radius, names)


def product_building(first: Building, second: Building) -> ProductBuilding:
    return ProductBuilding(first, second)


# --- generic operations ---------------------------------------------------------


def residue(bld: Building, c, J: Iterable[int]) -> set:
    J = sorted(set(J))
    seen = {c}
    queue = deque([c])
    while queue:
        x = queue.popleft()
        for s in J:
            for y in bld.panel(x, s):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen


def galleries_of_type(bld: Building, x, f: Sequence[int]) -> list:
    """Every gallery starting at ``x`` whose type is exactly ``f``."""
    f = tuple(f)
    out = []
    stack = [(x,)]
    while stack:
        path = stack.pop()
        i = len(path) - 1
        if i == len(f):
            out.append(Gallery(path, f))
            continue
        here = path[-1]
        for y in reversed(bld.panel(here, f[i])):
            if y != here:
                stack.append(path + (y,))
    return out


def is_gallery(bld: Building, gallery: Gallery) -> bool:
    for a, b, s in zip(gallery.chambers, gallery.chambers[1:], gallery.type):
        if a == b or b not in bld.panel(a, s):
            return False
    return True


def ball_around(bld: Building, x, k: int) -> dict:
    """Chambers within gallery distance k of x, with their distances."""
    dist = {x: 0}
    queue = deque([x])
    while queue:
        c = queue.popleft()
        if dist[c] == k:
            continue
        for y in bld.neighbours(c):
            if y not in dist:
                dist[y] = dist[c] + 1
                queue.append(y)
    return dist


def sample_region(bld: Building, size: int = 200) -> list:
    """Chambers near the base, breadth first, without enumerating a large ball."""
    if isinstance(bld, ExplicitBuilding):
        return [c for c in bld.chambers() if bld.safe(c, 0)]
    out = [bld.base]
    seen = {bld.base}
    level = [bld.base]
    while level and len(out) < size:
        nxt = []
        for c in level:
            if not bld.safe(c, 1):
                continue
            for y in sorted(bld.neighbours(c), key=bld.sort_key):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        out.extend(nxt)
        level = nxt
    return out


def verify_building(bld: Building, max_len: int) -> Report:
    """Brute-force check of the building axioms on the exact part of ``bld``.

    (a) every panel has >= 2 chambers and the panels partition the chambers;
    (b) for every reduced word f with |f| <= max_len, delta(x, y) = f iff a
        gallery of type f joins x to y;
    (c) delta(x, x) = 1 and delta(y, x) = delta(x, y)^-1.
    """
    sys = bld.system
    rep = Report("verify_building")
    chambers = bld.chambers()
    interior = [c for c in chambers if bld.safe(c, 1)]
    rep.stats["chambers"] = len(chambers)
    rep.stats["interior_chambers"] = len(interior)
    if not interior:
        rep.fail("no chamber has complete panels")
        return rep
    for c in interior:
        for s in range(sys.rank):
            block = bld.panel(c, s)
            rep.count("panels_checked")
            if c not in block:
                rep.fail(f"{bld.describe(c)} is missing from its own {sys.names[s]}-panel")
            if len(block) < 2:
                rep.fail(
                    f"{sys.names[s]}-panel {{{', '.join(bld.describe(x) for x in block)}}} "
                    f"has {len(block)} chamber(s)"
                )
            for x in block:
                if bld.safe(x, 1) and tuple(bld.panel(x, s)) != tuple(block):
                    rep.fail(f"{sys.names[s]}-adjacency is not transitive at {bld.describe(x)}")

    words_by_elem = {a: sorted(sys.reduced_words(a)) for a in sys.ball(max_len)}
    deep = [c for c in chambers if bld.safe(c, max_len)]
    rep.stats["deep_chambers"] = len(deep)
    rep.stats["reduced_words"] = sum(len(v) for v in words_by_elem.values())
    if not deep:
        rep.fail(f"no chamber is at least {max_len} away from the ball boundary")
        return rep
    for x in deep:
        region = ball_around(bld, x, max_len)
        delta = {}
        for y, d in region.items():
            a = bld.wdist(x, y)
            delta[y] = a
            rep.count("pairs_checked")
            if len(a) != d:
                rep.fail(f"d({bld.describe(x)}, {bld.describe(y)}) = {d} but |delta| = {len(a)}")
            if bld.wdist(y, x) != sys.invert(a):
                rep.fail(f"delta({bld.describe(y)}, {bld.describe(x)}) is not the inverse")
        if delta[x] != ():
            rep.fail(f"delta({bld.describe(x)}, itself) is not trivial")
        by_elem = {}
        for y, a in delta.items():
            by_elem.setdefault(a, set()).add(y)
        for a, words in words_by_elem.items():
            expected = by_elem.get(a, set())
            for f in words:
                ends = {g.end for g in galleries_of_type(bld, x, f)}
                rep.count("gallery_types_checked")
                if ends != expected:
                    extra = sorted(bld.describe(c) for c in ends - expected)[:3]
                    lost = sorted(bld.describe(c) for c in expected - ends)[:3]
                    rep.fail(
                        f"from {bld.describe(x)}, type {sys.format_word(f)}: "
                        f"gallery ends not at delta=f {extra}, delta=f not reached {lost}"
                    )
    return rep
