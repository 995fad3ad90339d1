"""Graph products of finite cyclic groups in shortlex normal form.

An element is a tuple of syllables ``(v, a)`` with ``1 <= a < size[v]``.
Syllables on adjacent vertices commute; the stored form is the
lexicographically least arrangement (by vertex index) of a reduced
syllable sequence, so equal elements are equal tuples.
"""
from __future__ import annotations

import heapq


class GraphProductGroup:
    def __init__(self, n_vertices: int, edges, sizes):
        self.n = n_vertices
        self.sizes = tuple(sizes)
        if len(self.sizes) != n_vertices:
            raise ValueError("one size per vertex required")
        for v, q in enumerate(self.sizes):
            if int(q) != q or q < 2:
                raise ValueError(f"vertex group size at {v} must be an integer >= 2, got {q}")
        self.adjacent = [set() for _ in range(n_vertices)]
        for a, b in edges:
            if a == b:
                raise ValueError("graph loops are not allowed")
            self.adjacent[a].add(b)
            self.adjacent[b].add(a)
        self.has_edges = bool(edges)

    def commute(self, u: int, v: int) -> bool:
        return v in self.adjacent[u]

    def canonical(self, syllables) -> tuple:
        syllables = tuple(syllables)
        if not self.has_edges or len(syllables) < 2:
            return syllables
        n = len(syllables)
        after = [[] for _ in range(n)]
        indegree = [0] * n
        for i in range(n):
            vi = syllables[i][0]
            for j in range(i + 1, n):
                if not self.commute(vi, syllables[j][0]):
                    after[i].append(j)
                    indegree[j] += 1
        ready = [(syllables[i][0], i) for i in range(n) if indegree[i] == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            _, i = heapq.heappop(ready)
            out.append(syllables[i])
            for j in after[i]:
                indegree[j] -= 1
                if indegree[j] == 0:
                    heapq.heappush(ready, (syllables[j][0], j))
        return tuple(out)

    def mul_syllable(self, g: tuple, v: int, a: int) -> tuple:
        a %= self.sizes[v]
        if a == 0:
            return g
        syl = list(g)
        for j in range(len(syl) - 1, -1, -1):
            u, b = syl[j]
            if u == v:
                c = (b + a) % self.sizes[v]
                if c:
                    syl[j] = (v, c)
                else:
                    del syl[j]
                return self.canonical(syl)
            if not self.commute(u, v):
                break
        syl.append((v, a))
        return self.canonical(syl)

    def multiply(self, g: tuple, h: tuple) -> tuple:
        for v, a in h:
            g = self.mul_syllable(g, v, a)
        return g

    def inverse(self, g: tuple) -> tuple:
        return self.canonical(tuple((v, self.sizes[v] - a) for v, a in reversed(g)))

    def type_word(self, g: tuple) -> tuple:
        return tuple(v for v, _ in g)

    def generator(self, v: int) -> tuple:
        return ((v, 1),)

    def ball(self, radius: int) -> list:
        out = [()]
        level = [()]
        seen = {()}
        for _ in range(radius):
            nxt = set()
            for g in level:
                for v in range(self.n):
                    for a in range(1, self.sizes[v]):
                        h = self.mul_syllable(g, v, a)
                        if len(h) > len(g) and h not in seen:
                            nxt.add(h)
            level = sorted(nxt, key=lambda h: (len(h), h))
            seen.update(level)
            out.extend(level)
        return out

    def is_finite(self) -> bool:
        return all(self.commute(u, v) for u in range(self.n) for v in range(self.n) if u != v)

    def order(self) -> int | None:
        if not self.is_finite():
            return None
        out = 1
        for q in self.sizes:
            out *= q
        return out

