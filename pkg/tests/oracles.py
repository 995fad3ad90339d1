"""Independent reference implementations used as test oracles.

None of these touch the braid-move machinery: finite groups are realised
by permutations, the infinite ones by explicit free-product normal forms.
"""
from __future__ import annotations

from collections import deque


def transposition(n: int, i: int) -> tuple:
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def compose(p: tuple, q: tuple) -> tuple:
    """p after q."""
    return tuple(p[q[i]] for i in range(len(q)))


def permutation_generators(name: str) -> list:
    if name == "S3":
        return [transposition(3, 0), transposition(3, 1)]
    if name == "A3":
        return [transposition(4, 0), transposition(4, 1), transposition(4, 2)]
    if name == "C2xC2":
        return [(1, 0, 2, 3), (0, 1, 3, 2)]
    raise KeyError(name)


def cayley_shortlex(gens: list) -> dict:
    """Permutation -> shortlex-least word, by breadth-first search in letter order."""
    n = len(gens[0])
    ident = tuple(range(n))
    best = {ident: ()}
    level = [ident]
    while level:
        nxt = []
        for p in level:
            for s, g in enumerate(gens):
                q = compose(p, g)
                if q not in best:
                    best[q] = best[p] + (s,)
                    nxt.append(q)
        level = nxt
    return best


def evaluate(gens: list, word) -> tuple:
    p = tuple(range(len(gens[0])))
    for s in word:
        p = compose(p, gens[s])
    return p


def dinf_normal_form(word) -> tuple:
    """Free product of two C2s: cancel equal neighbours with a stack."""
    out = []
    for s in word:
        if out and out[-1] == s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def rank3_normal_form(word) -> tuple:
    """(C2 x C2) * C2 with r=0, t=2 commuting and s=1 free: syllable stack."""
    out = []  # entries: frozenset({0, 2} part) or 1
    for s in word:
        if s == 1:
            if out and out[-1] == 1:
                out.pop()
            else:
                out.append(1)
        else:
            if out and out[-1] != 1:
                merged = out.pop() ^ {s}
                if merged:
                    out.append(merged)
            else:
                out.append(frozenset({s}))
    word_out = []
    for syl in out:
        word_out.extend([1] if syl == 1 else sorted(syl))
    return tuple(word_out)


def c33_normal_form(syllables) -> tuple:
    """C3 * C3 elements as alternating syllables (v, a), a in {1, 2}."""
    out = []
    for v, a in syllables:
        a %= 3
        if not a:
            continue
        if out and out[-1][0] == v:
            b = (out[-1][1] + a) % 3
            out.pop()
            if b:
                out.append((v, b))
        else:
            out.append((v, a))
    return tuple(out)


def bfs_distances(start, neighbours) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in neighbours(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


FANO_LINES = [frozenset(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7)]


def fano_delta(x, y) -> str:
    """W-distance between Fano flags (point, line) read off the incidence."""
    (p, L), (q, M) = x, y
    if (p, L) == (q, M):
        return ""
    if L == M:
        return "r"
    if p == q:
        return "s"
    if q in L:
        return "rs"
    if p in M:
        return "sr"
    return "rsr"
