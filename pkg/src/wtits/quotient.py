"""Collapsing a finite standard factor of the type.

When W = W1 x W2 with W1 finite, the W1-residues of a building are the
chambers of a building of type W2.  Its W2-distance is the W2-part of the
old distance, and old distances exceed new ones by at most the longest
length M in W1.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .building import Building, ExplicitBuilding, OutsideSafeRadius
from .coxeter import CoxeterError, CoxeterSystem, INF
from .dynamics import GroupAction, _orbit_table
from .report import Report


class QuotientError(ValueError):
    pass


def finite_factor(sys: CoxeterSystem) -> tuple | None:
    """Union of the finite components of the Coxeter diagram, or None."""
    dec = sys.decompose_diagram()
    gens = dec.finite_generators
    return tuple(gens) if gens else None


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass
class QuotientData:
    source: Building
    S1: tuple
    S2: tuple
    quotient: ExplicitBuilding
    q: dict  # source chamber -> quotient chamber (class index)
    members: list  # class index -> sorted source chambers
    M: int
    W1: list = field(default_factory=list)

    @property
    def reps(self) -> list:
        return [m[0] for m in self.members]

    def rep(self, a: int):
        return self.members[a][0]

    def proj(self, a) -> tuple:
        """W2-part of a W-element, as an element of the quotient's system."""
        where = {s: i for i, s in enumerate(self.S2)}
        return self.quotient.system.reduce([where[s] for s in a if s in where])

    def summary(self) -> dict:
        names = self.source.system.names
        return {
            "S1": [names[s] for s in self.S1],
            "S2": [names[s] for s in self.S2],
            "M": self.M,
            "W1_order": len(self.W1),
            "classes": len(self.members),
            "source_chambers": len(self.q),
        }


def _check_factor(sys: CoxeterSystem, S1) -> tuple:
    S1 = tuple(sorted(set(S1)))
    if not S1:
        raise QuotientError("S1 must be nonempty")
    for s in S1:
        if not 0 <= s < sys.rank:
            raise QuotientError(f"invalid generator {s!r}")
    rest = [s for s in range(sys.rank) if s not in S1]
    for a in S1:
        for b in rest:
            if sys.m(a, b) != 2:
                m = "inf" if sys.m(a, b) == INF else sys.m(a, b)
                raise QuotientError(
                    f"m({sys.names[a]}, {sys.names[b]}) = {m}: S1 is not a union of diagram components"
                )
    return S1


def quotient_building(bld: Building, S1) -> QuotientData:
    sys = bld.system
    S1 = _check_factor(sys, S1)
    S2 = tuple(s for s in range(sys.rank) if s not in S1)
    try:
        W1, M = sys.enumerate_finite_subgroup(S1)
    except CoxeterError as exc:
        raise QuotientError(str(exc)) from None

    chambers = sorted(bld.chambers(), key=bld.sort_key)
    uf = _UnionFind(chambers)
    for c in chambers:
        for s in S1:
            for y in bld.panel_in_ball(c, s):
                uf.union(c, y)
    groups: dict = {}
    for c in chambers:
        groups.setdefault(uf.find(c), []).append(c)
    members = [sorted(g, key=bld.sort_key) for g in groups.values()]
    base_root = uf.find(bld.base)
    members.sort(key=lambda g: (uf.find(g[0]) != base_root, bld.sort_key(g[0])))
    q = {c: i for i, g in enumerate(members) for c in g}

    partitions = []
    for s in S2:
        cuf = _UnionFind(range(len(members)))
        for c in chambers:
            for y in bld.panel_in_ball(c, s):
                cuf.union(q[c], q[y])
        blocks: dict = {}
        for a in range(len(members)):
            blocks.setdefault(cuf.find(a), []).append(a)
        partitions.append(sorted(blocks.values()))

    sys2 = sys.subsystem(S2)
    margins = None
    if any(math.isfinite(bld.margin(c)) for c in chambers):
        margins = [max(bld.margin(c) for c in g) - M for g in members]

    data = QuotientData(bld, S1, S2, None, q, members, M, W1)

    def metric(a, b):
        return data.proj(bld.wdist(data.rep(a), data.rep(b)))

    labels = [bld.describe(g[0]) for g in members]
    data.quotient = ExplicitBuilding(
        sys2, len(members), partitions, labels=labels, base=0, metric=metric, margins=margins
    )
    return data


def check_delta2_welldefined(data: QuotientData, samples: int = 1000, seed: int = 0, q=None) -> Report:
    """Re-choose representatives and compare projected distances.

    ``q`` may override the class map (used to test that corruption is caught).
    """
    rng = random.Random(seed)
    rep = Report("delta2_welldefined")
    bld = data.source
    classes = data.members
    if q is not None:
        groups: dict = {}
        for c, a in q.items():
            groups.setdefault(a, []).append(c)
        classes = [sorted(groups.get(a, []), key=bld.sort_key) for a in range(max(groups) + 1)]
    ok = [a for a in range(len(classes)) if classes[a] and data.quotient.margin(a) >= 0]
    for _ in range(samples):
        a, b = rng.choice(ok), rng.choice(ok)
        x, x2 = rng.choice(classes[a]), rng.choice(classes[a])
        y, y2 = rng.choice(classes[b]), rng.choice(classes[b])
        try:
            one = data.proj(bld.wdist(x, y))
            two = data.proj(bld.wdist(x2, y2))
        except OutsideSafeRadius:
            rep.count("skipped_outside_ball")
            continue
        rep.count("pairs")
        if one != two:
            fmt = data.quotient.system.format_word
            rep.fail(
                f"class pair ({a}, {b}): representatives {bld.describe(x)},{bld.describe(y)} give "
                f"{fmt(one)} but {bld.describe(x2)},{bld.describe(y2)} give {fmt(two)}"
            )
    return rep


def check_metric_bound(data: QuotientData, samples: int = 1000, seed: int = 0) -> Report:
    """d(x, y) <= M + d2(q x, q y) on sampled source pairs."""
    rng = random.Random(seed)
    rep = Report("metric_bound")
    rep.stats["M"] = data.M
    bld = data.source
    quo = data.quotient
    chambers = [c for c in data.q if quo.margin(data.q[c]) >= 0]
    for _ in range(samples):
        x, y = rng.choice(chambers), rng.choice(chambers)
        try:
            d = bld.distance(x, y)
        except OutsideSafeRadius:
            rep.count("skipped_outside_ball")
            continue
        a, b = data.q[x], data.q[y]
        d2 = len(quo.wdist(a, b))
        rep.count("pairs")
        walked = quo.gallery_distance(a, b)
        if walked is not None and walked <= max(quo.margin(a), quo.margin(b)) and walked != d2:
            rep.fail(f"quotient gallery distance {walked} disagrees with |delta2| = {d2} at ({a}, {b})")
        if d > data.M + d2:
            rep.fail(f"d({bld.describe(x)}, {bld.describe(y)}) = {d} > M + d2 = {data.M} + {d2}")
    return rep


class InducedAction(GroupAction):
    """The action g q(x) = q(g x) on the quotient."""

    def __init__(self, data: QuotientData, action):
        self.data = data
        self.upstream = action
        self.building = data.quotient
        self.names = list(action.names)
        self._orbits = None

    def apply(self, i: int, a: int, inverse: bool = False) -> int:
        x = self.upstream.apply(i, self.data.rep(a), inverse)
        try:
            return self.data.q[x]
        except KeyError:
            raise OutsideSafeRadius(f"image of class {a} leaves the source ball") from None

    def orbit_rep(self, a: int):
        if self._orbits is None:
            self._orbits = _orbit_table(self, range(len(self.data.members)))
        return self._orbits[a]


def induced_action(data: QuotientData, action, samples: int = 200, seed: int = 0) -> InducedAction:
    """Push an action down to the quotient, checking it is well defined and type preserving."""
    rng = random.Random(seed)
    bld = data.source
    quo = data.quotient
    ind = InducedAction(data, action)
    good = [a for a in range(len(data.members)) if quo.margin(a) >= 1]
    for i in range(ind.n_generators):
        for sign in (1, -1):
            for a in good:
                images = set()
                for x in data.members[a]:
                    try:
                        images.add(data.q[action.apply(i, x, sign < 0)])
                    except KeyError:
                        images = None
                        break
                if images is not None and len(images) > 1:
                    raise QuotientError(
                        f"generator {ind.names[i]} sends class {a} to several classes {sorted(images)}"
                    )
            for _ in range(samples if good else 0):
                a, b = rng.choice(good), rng.choice(good)
                try:
                    ga, gb = ind.apply(i, a, sign < 0), ind.apply(i, b, sign < 0)
                    before, after = quo.wdist(a, b), quo.wdist(ga, gb)
                except OutsideSafeRadius:
                    continue
                if before != after:
                    raise QuotientError(
                        f"generator {ind.names[i]} is not type preserving on classes ({a}, {b})"
                    )
    return ind
