"""Coxeter systems and their word problem.

Group elements are plain tuples of generator indices holding the
shortlex-least reduced word of the element (for the declared generator
order).  Equality of tuples is equality in W.

Reducedness is decided with Tits' braid-move closure: a word is reduced
iff no word reachable from it by braid moves has two equal adjacent
letters.  Products are computed one letter at a time using the deletion
condition, so only closures of *reduced* words are ever built.
"""
from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from functools import reduce as _fold
from typing import Iterable, Sequence

INF = math.inf

Element = tuple  # canonical reduced word, tuple[int, ...]

DEFAULT_BRAID_CAP = 200_000


class CoxeterError(ValueError):
    """Invalid Coxeter data or an out-of-range generator."""


class BraidClosureOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric Coxeter matrix; ``math.inf`` marks a missing relation."""

    rank: int
    entries: tuple

    @classmethod
    def from_pairs(cls, rank: int, pairs: dict, default=2) -> "CoxeterMatrix":
        rows = [[1 if i == j else default for j in range(rank)] for i in range(rank)]
        for (i, j), m in pairs.items():
            if i == j:
                raise CoxeterError(f"diagonal entry ({i},{i}) cannot be set")
            if not (0 <= i < rank and 0 <= j < rank):
                raise CoxeterError(f"entry ({i},{j}) out of range for rank {rank}")
            rows[i][j] = m
            if (j, i) not in pairs:
                rows[j][i] = m
        return cls(rank, tuple(tuple(r) for r in rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CoxeterMatrix":
        return cls(len(rows), tuple(tuple(r) for r in rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def validate(self) -> None:
        if self.rank < 1:
            raise CoxeterError("rank must be positive")
        if len(self.entries) != self.rank or any(len(r) != self.rank for r in self.entries):
            raise CoxeterError("matrix shape does not match rank")
        for i in range(self.rank):
            if self.entries[i][i] != 1:
                raise CoxeterError(f"diagonal entry ({i},{i}) must be 1")
            for j in range(self.rank):
                if i == j:
                    continue
                m = self.entries[i][j]
                if m != self.entries[j][i]:
                    raise CoxeterError(f"matrix not symmetric at ({i},{j})")
                if m != INF and (not float(m).is_integer() or m < 2):
                    raise CoxeterError(f"entry ({i},{j}) = {m} is not in {{2,3,...,inf}}")


# --- order results -----------------------------------------------------------


@dataclass(frozen=True)
class Finite:
    n: int


@dataclass(frozen=True)
class InfiniteCertified:
    reason: str = ""


@dataclass(frozen=True)
class UnknownBeyond:
    cap: int


OrderResult = Finite | InfiniteCertified | UnknownBeyond


@dataclass(frozen=True)
class DiagramDecomposition:
    components: tuple  # tuple of tuples of generator indices
    finite_flags: tuple
    finite_type_names: tuple  # name or None per component

    @property
    def finite_generators(self) -> tuple:
        return tuple(sorted(g for c, f in zip(self.components, self.finite_flags) if f for g in c))

    def has_finite_factor(self) -> bool:
        return any(self.finite_flags)


# --- finite type table --------------------------------------------------------


def _classify_component(m, comp: Sequence[int]) -> str | None:
    """Name of the finite Coxeter type of a connected diagram, or None."""
    n = len(comp)
    if n == 1:
        return "A1"
    edges = {}
    for a in comp:
        for b in comp:
            if a < b and m[a][b] != 2:
                if m[a][b] == INF:
                    return None
                edges[(a, b)] = int(m[a][b])
    if len(edges) != n - 1:
        return None  # has a cycle
    if n == 2:
        (label,) = edges.values()
        return {3: "A2", 4: "B2"}.get(label, f"I2({label})")
    adj = {v: [] for v in comp}
    for (a, b), lab in edges.items():
        adj[a].append((b, lab))
        adj[b].append((a, lab))
    degrees = {v: len(adj[v]) for v in comp}
    if max(degrees.values()) <= 2:
        end = next(v for v in comp if degrees[v] == 1)
        labels, prev, cur = [], None, end
        while True:
            nxt = [(b, lab) for b, lab in adj[cur] if b != prev]
            if not nxt:
                break
            prev, (cur, lab) = cur, nxt[0]
            labels.append(lab)
        if all(x == 3 for x in labels):
            return f"A{n}"
        big = [x for x in labels if x != 3]
        if len(big) != 1:
            return None
        if labels[0] != 3:
            labels.reverse()
        if labels[-1] == 4:
            return f"B{n}"
        if labels[-1] == 5 and n in (3, 4):
            return f"H{n}"
        if labels == [3, 4, 3]:
            return "F4"
        return None
    branch = [v for v in comp if degrees[v] == 3]
    if len(branch) != 1 or max(degrees.values()) > 3 or any(x != 3 for x in edges.values()):
        return None
    centre = branch[0]
    arms = []
    for start, _ in adj[centre]:
        length, prev, cur = 1, centre, start
        while degrees[cur] == 2:
            prev, cur = cur, next(b for b, _ in adj[cur] if b != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{n}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{n}"
    return None


def _lcm_of_small_orders(dim: int) -> int:
    """lcm of all n with phi(n) <= dim; bounds the order of a finite-order integer matrix."""
    out = 1
    # phi(n) >= sqrt(n/2), so n <= 2*dim**2 suffices
    for n in range(1, 2 * dim * dim + 3):
        if _phi(n) <= dim:
            out = math.lcm(out, n)
    return out


def _phi(n: int) -> int:
    result, p, k = n, 2, n
    while p * p <= k:
        if k % p == 0:
            while k % p == 0:
                k //= p
            result -= result // p
        p += 1
    if k > 1:
        result -= result // k
    return result


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _matpow(a, e):
    n = len(a)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    while e:
        if e & 1:
            out = _matmul(out, a)
        a = _matmul(a, a)
        e >>= 1
    return out


# --- the system -----------------------------------------------------------------


@dataclass(eq=False)
class CoxeterSystem:
    matrix: CoxeterMatrix
    names: tuple = ()
    braid_cap: int = DEFAULT_BRAID_CAP
    _closures: dict = field(default_factory=dict, repr=False)
    _rmul: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if not self.names:
            self.names = tuple(_default_names(self.matrix.rank))
        self.names = tuple(self.names)
        if len(self.names) != self.matrix.rank or len(set(self.names)) != len(self.names):
            raise CoxeterError("generator names must be distinct and one per generator")
        self._m = self.matrix.entries

    # -- basic data

    @property
    def rank(self) -> int:
        return self.matrix.rank

    def m(self, r: int, s: int):
        return self._m[r][s]

    def same_as(self, other: "CoxeterSystem") -> bool:
        return self.matrix == other.matrix and self.names == other.names

    def index(self, name) -> int:
        if isinstance(name, int) and 0 <= name < self.rank:
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise CoxeterError(f"unknown generator {name!r}") from None

    def parse_word(self, text) -> tuple:
        """Letters from a string of one-character names, a space separated string, or a list."""
        if isinstance(text, str):
            text = text.strip()
            if text in ("", "e", "ε", "1"):
                return ()
            parts = text.split() if " " in text else list(text)
        else:
            parts = list(text)
        return tuple(self.index(p) for p in parts)

    def format_word(self, word: Iterable[int]) -> str:
        word = tuple(word)
        if not word:
            return "ε"
        sep = "" if all(len(n) == 1 for n in self.names) else " "
        return sep.join(self.names[i] for i in word)

    def _check(self, word) -> tuple:
        word = tuple(word)
        for letter in word:
            if not (isinstance(letter, int) and 0 <= letter < self.rank):
                raise CoxeterError(f"letter {letter!r} out of range for rank {self.rank}")
        return word

    # -- word problem

    def braid_closure(self, word: Sequence[int]) -> frozenset:
        """All words reachable from ``word`` by braid moves (no deletions)."""
        word = tuple(word)
        seen = {word}
        todo = [word]
        m = self._m
        while todo:
            w = todo.pop()
            n = len(w)
            for i in range(n - 1):
                a, b = w[i], w[i + 1]
                if a == b:
                    continue
                mab = m[a][b]
                if mab == INF or i + mab > n:
                    continue
                mab = int(mab)
                if all(w[i + j] == (a if j % 2 == 0 else b) for j in range(2, mab)):
                    alt = tuple(b if j % 2 == 0 else a for j in range(mab))
                    v = w[:i] + alt + w[i + mab:]
                    if v not in seen:
                        if len(seen) >= self.braid_cap:
                            raise BraidClosureOverflow(
                                f"braid closure exceeded {self.braid_cap} words"
                            )
                        seen.add(v)
                        todo.append(v)
        return frozenset(seen)

    def is_reduced(self, word: Sequence[int]) -> bool:
        word = self._check(word)
        return not any(
            w[i] == w[i + 1] for w in self.braid_closure(word) for i in range(len(w) - 1)
        )

    def reduced_words(self, a: Element) -> frozenset:
        """Every reduced word of the canonical element ``a``."""
        clo = self._closures.get(a)
        if clo is None:
            clo = self.braid_closure(a)
            with self._lock:
                self._closures[a] = clo
        return clo

    def _canonical_of_reduced(self, word: tuple) -> Element:
        clo = self.braid_closure(word)
        canon = min(clo)
        with self._lock:
            self._closures.setdefault(canon, clo)
        return canon

    def right_mul(self, a: Element, s: int) -> Element:
        key = (a, s)
        hit = self._rmul.get(key)
        if hit is not None:
            return hit
        ending = [w for w in self.reduced_words(a) if w and w[-1] == s]
        if ending:
            res = self._canonical_of_reduced(min(ending)[:-1])
        else:
            res = self._canonical_of_reduced(a + (s,))
        with self._lock:
            self._rmul[key] = res
        return res

    def reduce(self, word: Sequence[int]) -> Element:
        word = self._check(word)
        return _fold(self.right_mul, word, ())

    def multiply(self, a: Element, b: Element) -> Element:
        return _fold(self.right_mul, b, a)

    def invert(self, a: Element) -> Element:
        return min(tuple(reversed(w)) for w in self.reduced_words(a))

    def left_mul(self, s: int, a: Element) -> Element:
        return self.invert(self.right_mul(self.invert(a), s))

    def length(self, a: Element) -> int:
        return len(a)

    def reflection(self, u: Element, s: int) -> Element:
        if not (isinstance(s, int) and 0 <= s < self.rank):
            raise CoxeterError(f"invalid generator {s!r}")
        return self.multiply(self.right_mul(u, s), self.invert(u))

    def power(self, a: Element, n: int) -> Element:
        if n < 0:
            a, n = self.invert(a), -n
        out = ()
        for _ in range(n):
            out = self.multiply(out, a)
        return out

    def right_descents(self, a: Element) -> frozenset:
        return frozenset(w[-1] for w in self.reduced_words(a) if w)

    # -- orders

    def order_of(self, a: Element, cap: int = 64) -> OrderResult:
        """Order of ``a``; exact certificates first, then powers up to ``cap``."""
        if cap < 1:
            raise CoxeterError("cap must be >= 1")
        a = self.reduce(a)
        if a == ():
            return Finite(1)
        support = sorted(set(a))
        if len(support) == 1:
            return Finite(2)
        if len(support) == 2 and self._m[support[0]][support[1]] == INF:
            # D-infinity: nontrivial even-length elements are translations
            if len(a) % 2 == 0:
                return InfiniteCertified("infinite dihedral parabolic")
            return Finite(2)
        if self._rational(support):
            mat = self.geometric_matrix(a, support)
            big = _lcm_of_small_orders(len(support))
            ident = [[int(i == j) for j in range(len(support))] for i in range(len(support))]
            if _matpow(mat, big) != ident:
                return InfiniteCertified("geometric representation")
            for n in sorted(d for d in range(1, big + 1) if big % d == 0):
                if _matpow(mat, n) == ident:
                    return Finite(n)
        p = a
        try:
            for n in range(1, cap + 1):
                if p == ():
                    return Finite(n)
                p = self.multiply(p, a)
        except BraidClosureOverflow:
            pass
        return UnknownBeyond(cap)

    def _rational(self, support) -> bool:
        return all(self._m[i][j] in (1, 2, 3, INF) for i in support for j in support)

    def cartan_entry(self, i: int, j: int) -> int:
        """2B(alpha_i, alpha_j) for m in {1,2,3,inf}."""
        return {1: 2, 2: 0, 3: -1, INF: -2}[self._m[i][j]]

    def geometric_matrix(self, a: Element, support=None) -> list:
        """Integer matrix of ``a`` in the geometric representation of the parabolic on ``support``."""
        support = sorted(set(a)) if support is None else list(support)
        if not self._rational(support):
            raise CoxeterError("geometric representation is only exact for m in {2,3,inf}")
        pos = {g: k for k, g in enumerate(support)}
        n = len(support)
        out = [[int(i == j) for j in range(n)] for i in range(n)]
        for letter in a:
            i = pos[letter]
            sig = [[int(r == c) for c in range(n)] for r in range(n)]
            for j in range(n):
                # sigma_i(alpha_j) = alpha_j - 2B(alpha_i, alpha_j) alpha_i
                sig[i][j] -= self.cartan_entry(support[i], support[j])
            out = _matmul(out, sig)
        return out

    def root_of(self, u: Element, s: int) -> list:
        """Coordinates of u(alpha_s) in the simple-root basis (rational systems only)."""
        support = list(range(self.rank))
        mat = self.geometric_matrix(u, support)
        return [row[s] for row in mat]

    def bilinear(self, x: Sequence[int], y: Sequence[int]):
        """2B(x, y) for root coordinate vectors."""
        n = self.rank
        return sum(x[i] * self.cartan_entry(i, j) * y[j] for i in range(n) for j in range(n))

    # -- diagram

    def decompose_diagram(self, subset: Iterable[int] | None = None) -> DiagramDecomposition:
        gens = sorted(set(range(self.rank) if subset is None else subset))
        parent = {g: g for g in gens}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in gens:
            for b in gens:
                if a < b and self._m[a][b] != 2:
                    parent[find(a)] = find(b)
        groups = {}
        for g in gens:
            groups.setdefault(find(g), []).append(g)
        comps = tuple(sorted(tuple(v) for v in groups.values()))
        names = tuple(_classify_component(self._m, c) for c in comps)
        return DiagramDecomposition(comps, tuple(n is not None for n in names), names)

    def is_finite(self) -> bool:
        return all(self.decompose_diagram().finite_flags)

    def enumerate_finite_subgroup(self, subset: Iterable[int]) -> tuple[list, int]:
        """All elements of the standard subgroup on ``subset`` and its longest length."""
        subset = sorted(set(subset))
        for g in subset:
            self._check((g,))
        dec = self.decompose_diagram(subset)
        if not all(dec.finite_flags):
            raise CoxeterError(f"standard subgroup on {self.format_word(subset)} is infinite")
        seen = {(): None}
        order = [()]
        queue = deque([()])
        while queue:
            a = queue.popleft()
            for s in subset:
                b = self.right_mul(a, s)
                if b not in seen:
                    seen[b] = None
                    order.append(b)
                    queue.append(b)
        return order, max(len(a) for a in order)

    def ball(self, radius: int) -> list:
        """Elements of length <= radius in shortlex order."""
        level = [()]
        out = [()]
        seen = {()}
        for _ in range(radius):
            nxt = set()
            for a in level:
                for s in range(self.rank):
                    b = self.right_mul(a, s)
                    if len(b) > len(a) and b not in seen:
                        nxt.add(b)
            level = sorted(nxt)
            seen.update(level)
            out.extend(level)
        return out

    def longest_length(self) -> int | None:
        """Length of the longest element when W is finite."""
        if not self.is_finite():
            return None
        return self.enumerate_finite_subgroup(range(self.rank))[1]

    def subsystem(self, subset: Sequence[int]) -> "CoxeterSystem":
        subset = list(subset)
        rows = [[self._m[i][j] for j in subset] for i in subset]
        return CoxeterSystem(CoxeterMatrix.from_rows(rows), tuple(self.names[i] for i in subset),
                             braid_cap=self.braid_cap)


def _default_names(rank: int) -> list:
    if rank <= 3:
        return ["r", "s", "t"][:rank]
    if rank <= 26:
        return [chr(ord("a") + i) for i in range(rank)]
    return [f"s{i}" for i in range(rank)]


def new_system(matrix: CoxeterMatrix, names: Sequence[str] = (), braid_cap: int = DEFAULT_BRAID_CAP) -> CoxeterSystem:
    matrix.validate()
    return CoxeterSystem(matrix, tuple(names), braid_cap=braid_cap)


def product_system(a: CoxeterSystem, b: CoxeterSystem) -> CoxeterSystem:
    """W_a x W_b with the generators of ``a`` first; cross entries are 2."""
    n, k = a.rank, b.rank
    rows = [[2] * (n + k) for _ in range(n + k)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = a.m(i, j)
    for i in range(k):
        for j in range(k):
            rows[n + i][n + j] = b.m(i, j)
    names = list(a.names) + list(b.names)
    if len(set(names)) != len(names):
        names = [f"{x}1" for x in a.names] + [f"{x}2" for x in b.names]
    return CoxeterSystem(CoxeterMatrix.from_rows(rows), tuple(names), braid_cap=max(a.braid_cap, b.braid_cap))


def dihedral(m, names=("r", "s")) -> CoxeterSystem:
    return new_system(CoxeterMatrix.from_pairs(2, {(0, 1): m}), names)
