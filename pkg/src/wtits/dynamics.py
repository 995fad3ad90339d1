"""Group actions on buildings and the random walk along a period word.

States are pairs (chamber, phase) with the phase taken mod 2k.  From
(c, j) the walk moves to a different chamber of the s_j-panel of c, each
with probability 1/(deg - 1), and the phase goes up by one.

Group elements are words of ``(generator, +1 | -1)`` pairs, read as a
product from left to right; acting on a chamber applies the last letter
first.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from .building import (
    Building,
    GraphProductBuilding,
    OutsideSafeRadius,
    ProductBuilding,
    ThinBuilding,
    sample_region,
)
from .report import Report


class ActionError(ValueError):
    pass


class NoReturnPath(RuntimeError):
    pass


class NotThin(ValueError):
    pass


def inverse_word(word) -> tuple:
    return tuple((i, -e) for i, e in reversed(word))


def free_reduce(word) -> tuple:
    out = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


class GroupAction:
    """Generators act on chambers; subclasses override ``apply`` and ``orbit_rep``."""

    building: Building
    names: list

    @property
    def n_generators(self) -> int:
        return len(self.names)

    def apply(self, i: int, c, inverse: bool = False):
        raise NotImplementedError

    # elements default to plain words; subclasses may compile to something faster
    def compile(self, word):
        return tuple(word)

    def compose(self, e1, e2):
        return tuple(e1) + tuple(e2)

    def apply_element(self, e, c):
        for i, sign in reversed(e):
            c = self.apply(i, c, sign < 0)
        return c

    def act(self, word, c):
        return self.apply_element(self.compile(word), c)

    def orbit_rep(self, c):
        """(rep, h) with c = h . rep and rep the same for a whole orbit."""
        raise NotImplementedError

    def format_word(self, word) -> str:
        if not word:
            return "1"
        runs = []
        for i, e in word:
            if runs and runs[-1][0] == i:
                runs[-1][1] += e
            else:
                runs.append([i, e])
        return " ".join(self.names[i] if e == 1 else f"{self.names[i]}^{e}" for i, e in runs if e)

    def same_element(self, w1, w2, test_set) -> bool:
        e1, e2 = self.compile(w1), self.compile(w2)
        return all(self.apply_element(e1, c) == self.apply_element(e2, c) for c in test_set)


class ThinLeftMultiplication(GroupAction):
    """W acting on its own Coxeter complex."""

    def __init__(self, bld: ThinBuilding):
        self.building = bld
        self.names = list(bld.system.names)

    def apply(self, i, c, inverse=False):
        return self.building.system.left_mul(i, c)

    def compile(self, word):
        return self.building.system.reduce([i for i, _ in word])

    def compose(self, e1, e2):
        return self.building.system.multiply(e1, e2)

    def apply_element(self, e, c):
        return self.building.system.multiply(e, c)

    def orbit_rep(self, c):
        return (), tuple((i, 1) for i in c)


class GraphProductLeftMultiplication(GroupAction):
    """A graph product acting on its right-angled building; one generator per vertex."""

    def __init__(self, bld: GraphProductBuilding):
        self.building = bld
        self.group = bld.group
        self.names = list(bld.system.names)

    def apply(self, i, c, inverse=False):
        a = -1 if inverse else 1
        return self.group.multiply(((i, a % self.group.sizes[i]),), c)

    def compile(self, word):
        g = ()
        for i, e in word:
            g = self.group.mul_syllable(g, i, e)
        return g

    def compose(self, e1, e2):
        return self.group.multiply(e1, e2)

    def apply_element(self, e, c):
        return self.group.multiply(e, c)

    def orbit_rep(self, c):
        return (), tuple((v, 1) for v, a in c for _ in range(a))


class PermutationAction(GroupAction):
    """Generators given as explicit chamber maps on a finite building."""

    def __init__(self, bld: Building, perms, names=None):
        self.building = bld
        chambers = bld.chambers()
        self.perms = []
        self.inverses = []
        for n, p in enumerate(perms):
            fwd = dict(zip(chambers, p)) if isinstance(p, (list, tuple)) else dict(p)
            if set(fwd) != set(chambers) or set(fwd.values()) != set(chambers):
                raise ActionError(f"generator {n} is not a permutation of the chambers")
            self.perms.append(fwd)
            self.inverses.append({v: k for k, v in fwd.items()})
        self.names = list(names) if names else [f"g{n}" for n in range(len(self.perms))]
        self._orbits = None

    def apply(self, i, c, inverse=False):
        return (self.inverses if inverse else self.perms)[i][c]

    def orbit_rep(self, c):
        if self._orbits is None:
            self._orbits = _orbit_table(self, self.building.chambers())
        return self._orbits[c]


def _orbit_table(action, chambers) -> dict:
    """Breadth-first orbit representatives with connecting words, for finite chamber sets."""
    chambers = sorted(chambers, key=action.building.sort_key)
    table: dict = {}
    for c in chambers:
        if c in table:
            continue
        table[c] = (c, ())
        frontier = [c]
        while frontier:
            nxt = []
            for x in frontier:
                _, h = table[x]
                for i in range(action.n_generators):
                    for sign in (1, -1):
                        try:
                            y = action.apply(i, x, sign < 0)
                        except OutsideSafeRadius:
                            continue
                        if y not in table:
                            table[y] = (c, ((i, sign),) + h)
                            nxt.append(y)
            frontier = nxt
    return table


class TrivialAction(GroupAction):
    def __init__(self, bld: Building):
        self.building = bld
        self.names = []

    def apply(self, i, c, inverse=False):
        raise ActionError("the trivial group has no generators")

    def orbit_rep(self, c):
        return c, ()


class ProductAction(GroupAction):
    """G1 x G2 on a product building; generators of G1 come first."""

    def __init__(self, bld: ProductBuilding, first: GroupAction, second: GroupAction):
        self.building = bld
        self.first = first
        self.second = second
        self.split = first.n_generators
        self.names = list(first.names) + list(second.names)

    def apply(self, i, c, inverse=False):
        a, b = c
        if i < self.split:
            return (self.first.apply(i, a, inverse), b)
        return (a, self.second.apply(i - self.split, b, inverse))

    def orbit_rep(self, c):
        r1, h1 = self.first.orbit_rep(c[0])
        r2, h2 = self.second.orbit_rep(c[1])
        return (r1, r2), tuple(h1) + tuple((i + self.split, e) for i, e in h2)


def left_multiplication(bld: Building) -> GroupAction:
    if isinstance(bld, ThinBuilding):
        return ThinLeftMultiplication(bld)
    if isinstance(bld, GraphProductBuilding):
        return GraphProductLeftMultiplication(bld)
    if isinstance(bld, ProductBuilding):
        return ProductAction(bld, left_multiplication(bld.first), left_multiplication(bld.second))
    if bld.system.rank == 0:
        return TrivialAction(bld)
    raise ActionError(f"left multiplication is not defined for {type(bld).__name__}")


def validate_action(action: GroupAction, samples: int = 300, seed: int = 0) -> Report:
    """Generators preserve the W-distance and are undone by their inverses."""
    rng = random.Random(seed)
    bld = action.building
    rep = Report("action")
    chambers = sample_region(bld)
    if len(chambers) ** 2 <= samples:
        pairs = list(cartesian(chambers, chambers))
    else:
        pairs = [(rng.choice(chambers), rng.choice(chambers)) for _ in range(samples)]
    for i in range(action.n_generators):
        for inverse in (False, True):
            for x, y in pairs:
                gx, gy = action.apply(i, x, inverse), action.apply(i, y, inverse)
                if action.apply(i, gx, not inverse) != x:
                    rep.fail(f"generator {action.names[i]} is not undone by its inverse at {bld.describe(x)}")
                if not (bld.contains(gx) and bld.contains(gy)):
                    rep.count("pairs_leaving_ball")
                    continue
                rep.count("pairs")
                try:
                    before, after = bld.wdist(x, y), bld.wdist(gx, gy)
                except OutsideSafeRadius:
                    rep.count("pairs_leaving_ball")
                    continue
                if before != after:
                    fmt = bld.system.format_word
                    rep.fail(
                        f"generator {action.names[i]}{'^-1' if inverse else ''} maps the pair "
                        f"({bld.describe(x)}, {bld.describe(y)}) at distance {fmt(before)} "
                        f"to distance {fmt(after)}"
                    )
    return rep


def action_from_generators(bld: Building, perms="left-multiplication", names=None, samples: int = 300) -> GroupAction:
    if perms is None or perms == "left-multiplication":
        action = left_multiplication(bld)
    elif perms == "trivial":
        action = TrivialAction(bld)
    else:
        action = PermutationAction(bld, perms, names)
    rep = validate_action(action, samples)
    if not rep:
        raise ActionError(rep.failures[0])
    return action


def element_ball(action: GroupAction, radius: int, test_set) -> list:
    """Distinct elements (as words) of word length <= radius, told apart by their effect on test_set."""
    test_set = list(test_set)
    letters = [(i, e) for i in range(action.n_generators) for e in (1, -1)]
    seen = {tuple(test_set): ()}
    out = [()]
    level = [()]
    for _ in range(radius):
        nxt = []
        for w in level:
            for letter in letters:
                v = free_reduce(w + (letter,))
                if len(v) <= len(w):
                    continue
                try:
                    key = tuple(action.act(v, c) for c in test_set)
                except OutsideSafeRadius:
                    continue
                if key not in seen:
                    seen[key] = v
                    out.append(v)
                    nxt.append(v)
        level = nxt
    return out


def check_geometric(bld: Building, action: GroupAction, word_radius: int = 3, region: int = 400) -> Report:
    """Finitely many chamber orbits, finite stabilizers (both at desk scale)."""
    rep = Report("geometric")
    chambers = sample_region(bld, region)
    shells = sorted({bld.depth(c) for c in chambers})
    counts = []
    for r in (shells[len(shells) // 2], shells[-1]) if len(shells) > 1 else shells:
        reps = set()
        for c in chambers:
            if bld.depth(c) <= r:
                reps.add(action.orbit_rep(c)[0])
        counts.append((r, len(reps)))
    rep.stats["orbits"] = counts[-1][1]
    rep.stats["orbit_counts_by_radius"] = counts
    if len(counts) > 1 and counts[-1][1] > counts[0][1]:
        rep.fail(
            f"orbit count grows with radius ({counts[0][1]} within {counts[0][0]}, "
            f"{counts[-1][1]} within {counts[-1][0]}): no evidence of a cocompact action"
        )
    test_set = _test_set(bld)
    elems = element_ball(action, word_radius, test_set)
    stab = [w for w in elems if action.act(w, bld.base) == bld.base]
    rep.stats["elements_explored"] = len(elems)
    rep.stats["stabilizer_size"] = len(stab)
    return rep


def _test_set(bld: Building) -> list:
    out = [bld.base]
    if bld.safe(bld.base, 1):
        out.extend(sorted(set(bld.neighbours(bld.base)), key=bld.sort_key))
    return out


# --- states and transitions ------------------------------------------------------


class StateSpace:
    """States (c, j) for a period word s_0 ... s_{2k-1}."""

    def __init__(self, bld: Building, period):
        period = tuple(period)
        if not period or len(period) % 2:
            raise ValueError("the period word must have positive even length")
        self.building = bld
        self.period = period
        self.k = len(period) // 2

    @property
    def n_phases(self) -> int:
        return len(self.period)

    def states(self):
        for c in self.building.chambers():
            for j in range(self.n_phases):
                yield (c, j)

    def visible(self, a) -> bool:
        return self.building.safe(a[0], 2)

    def successors(self, a) -> list:
        c, j = a
        nxt = (j + 1) % self.n_phases
        return [(y, nxt) for y in self.building.panel(c, self.period[j]) if y != c]

    def predecessors(self, a) -> list:
        c, j = a
        prev = (j - 1) % self.n_phases
        return [(y, prev) for y in self.building.panel(c, self.period[prev]) if y != c]

    def transition_prob(self, a, b) -> Fraction:
        (c, j), (d, i) = a, b
        if i != (j + 1) % self.n_phases or c == d:
            return Fraction(0)
        block = self.building.panel(c, self.period[j])
        if d not in block:
            return Fraction(0)
        return Fraction(1, len(block) - 1)

    def cylinder_measure(self, seq, anchor: int = 0) -> Fraction:
        """Product of the transition probabilities; the anchor is irrelevant (shift invariance)."""
        del anchor
        out = Fraction(1)
        for a, b in zip(seq, seq[1:]):
            out *= self.transition_prob(a, b)
            if not out:
                break
        return out

    def act(self, action: GroupAction, word, a):
        return (action.act(word, a[0]), a[1])


def state_space(bld: Building, period) -> StateSpace:
    return StateSpace(bld, period)


def check_balance(space: StateSpace, states=None) -> Report:
    rep = Report("balance")
    if states is None:
        states = space.states()
    for a in states:
        if not space.visible(a):
            rep.count("excluded_near_boundary")
            continue
        rep.count("states")
        out = sum((space.transition_prob(a, b) for b in space.successors(a)), Fraction(0))
        inn = sum((space.transition_prob(b, a) for b in space.predecessors(a)), Fraction(0))
        if out != 1 or inn != 1:
            rep.fail(f"state ({space.building.describe(a[0])}, {a[1]}): out {out}, in {inn}")
    if rep.stats.get("excluded_near_boundary"):
        rep.warn(f"{rep.stats['excluded_near_boundary']} states near the ball boundary were excluded")
    return rep


# --- the orbit graph --------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    source: int
    target: int
    prob: Fraction
    successor: tuple  # the actual state reached from the source representative
    lift: tuple  # word h with successor = h . (target representative)


@dataclass
class QuotientGraph:
    space: StateSpace
    action: GroupAction
    nodes: list = field(default_factory=list)  # representative states
    index: dict = field(default_factory=dict)
    arcs: list = field(default_factory=list)  # per node

    def locate(self, a):
        """(node, h) with a = h . nodes[node]."""
        rep, h = self.action.orbit_rep(a[0])
        return self.index.get((rep, a[1])), h


def quotient_graph(space: StateSpace, action: GroupAction, seeds=None, budget: int = 10_000) -> QuotientGraph:
    graph = QuotientGraph(space, action)
    if seeds is None:
        rep, _ = action.orbit_rep(space.building.base)
        seeds = [(rep, j) for j in range(space.n_phases)]

    def add(state) -> int:
        if state not in graph.index:
            if len(graph.nodes) >= budget:
                raise NoReturnPath(f"orbit graph exceeded {budget} nodes: is the action cocompact?")
            graph.index[state] = len(graph.nodes)
            graph.nodes.append(state)
            graph.arcs.append(None)
        return graph.index[state]

    queue = deque(add(s) for s in seeds)
    while queue:
        n = queue.popleft()
        if graph.arcs[n] is not None:
            continue
        src = graph.nodes[n]
        if not space.visible(src):
            raise OutsideSafeRadius(
                f"orbit representative {space.building.describe(src[0])} is too close to the ball boundary"
            )
        arcs = []
        for b in sorted(space.successors(src), key=lambda s: space.building.sort_key(s[0])):
            rep, h = action.orbit_rep(b[0])
            m = add((rep, b[1]))
            arcs.append(Arc(n, m, space.transition_prob(src, b), b, tuple(h)))
            if graph.arcs[m] is None:
                queue.append(m)
        graph.arcs[n] = arcs
    return graph


@dataclass
class Recurrence:
    states: list  # a_1 ... a_n
    g: tuple  # word with a_n = g . (d, 0)
    d: object
    d_next: object

    @property
    def n(self) -> int:
        return len(self.states)

    def gallery_type(self, space: StateSpace) -> tuple:
        return tuple(space.period[a[1]] for a in self.states[:-1])


def find_recurrence(space: StateSpace, action: GroupAction, d, d_next, graph: QuotientGraph | None = None) -> Recurrence:
    """A positive path from (d_next, 1) to a translate g.(d, 0)."""
    start_state, goal_state = (d_next, 1 % space.n_phases), (d, 0)
    if space.transition_prob(goal_state, start_state) <= 0:
        raise ValueError("the first step (d, 0) -> (d', 1) has probability zero")
    if graph is None:
        graph = quotient_graph(space, action)
    start, h0 = graph.locate(start_state)
    goal, hd = graph.locate(goal_state)
    if start is None or goal is None:
        raise NoReturnPath("a state lies outside the explored orbit graph")

    prev = {start: None}
    queue = deque([start])
    while queue and goal not in prev:
        n = queue.popleft()
        for arc in graph.arcs[n]:
            if arc.prob > 0 and arc.target not in prev:
                prev[arc.target] = arc
                queue.append(arc.target)
    if goal not in prev:
        raise NoReturnPath("no positive path returns to the orbit of (d, 0): the action is not geometric")
    path = []
    n = goal
    while prev[n] is not None:
        path.append(prev[n])
        n = prev[n].source
    path.reverse()

    H = tuple(h0)
    states = [start_state]
    for arc in path:
        states.append((action.act(H, arc.successor[0]), arc.successor[1]))
        H = free_reduce(H + arc.lift)
    g = free_reduce(H + inverse_word(hd))
    rec = Recurrence(states, g, d, d_next)
    _check_recurrence(space, action, rec)
    return rec


def _check_recurrence(space: StateSpace, action: GroupAction, rec: Recurrence) -> None:
    for a, b in zip(rec.states, rec.states[1:]):
        if space.transition_prob(a, b) <= 0:
            raise AssertionError(f"recurrence step {a} -> {b} has probability zero")
    last = rec.states[-1]
    if last[1] != 0 or action.act(rec.g, rec.d) != last[0]:
        raise AssertionError("recurrence does not end at g.(d, 0)")
    if rec.n % space.n_phases:
        raise AssertionError("recurrence length is not a multiple of 2k")


# --- the thin case ----------------------------------------------------------------


@dataclass
class RhoTable:
    base: object
    table: dict  # generator name -> W-element (and inverses as name^-1)
    report: Report


def rho_map(bld: Building, action: GroupAction, c=None, word_radius: int = 3, samples: int = 100, seed: int = 0) -> RhoTable:
    """g -> delta(c, g c), checked to be a homomorphism with kernel the stabilizer of c."""
    if not bld.is_thin():
        raise NotThin("the building has a branching panel: rho is only a homomorphism on thin buildings")
    sys = bld.system
    c = bld.base if c is None else c
    rep = Report("rho")
    rng = random.Random(seed)

    def rho(word):
        return bld.wdist(c, action.act(word, c))

    letters = [(i, e) for i in range(action.n_generators) for e in (1, -1)]
    table = {}
    for i, e in letters:
        key = action.names[i] if e == 1 else f"{action.names[i]}^-1"
        table[key] = rho(((i, e),))

    def check(u, v):
        rep.count("pairs")
        try:
            got, want = rho(u + v), sys.multiply(rho(u), rho(v))
        except OutsideSafeRadius:
            rep.count("pairs_outside_ball")
            return
        if got != want:
            rep.fail(
                f"rho({action.format_word(u + v)}) = {sys.format_word(got)} but "
                f"rho({action.format_word(u)}) rho({action.format_word(v)}) = {sys.format_word(want)}"
            )

    for a in letters:
        for b in letters:
            check((a,), (b,))
    for _ in range(samples):
        u = tuple(rng.choice(letters) for _ in range(rng.randint(1, word_radius)))
        v = tuple(rng.choice(letters) for _ in range(rng.randint(1, word_radius)))
        check(u, v)

    test_set = _test_set(bld)
    elems = element_ball(action, word_radius, test_set)
    kernel = {w for w in elems if rho(w) == ()}
    stab = {w for w in elems if action.act(w, c) == c}
    rep.stats["elements_explored"] = len(elems)
    rep.stats["kernel"] = len(kernel)
    rep.stats["stabilizer"] = len(stab)
    if kernel != stab:
        rep.fail(f"kernel ({len(kernel)} elements) differs from the stabilizer ({len(stab)} elements)")
    return RhoTable(c, table, rep)
