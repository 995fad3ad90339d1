"""Graphviz DOT text for chamber graphs, apartments, orbit graphs and dumbbells."""
from __future__ import annotations

from .building import Building

COLORS = ("black", "red", "blue", "darkgreen", "orange", "purple", "brown", "gray40")


def _quote(text) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _color(s: int) -> str:
    return COLORS[s % len(COLORS)]


def chamber_graph(bld: Building, chambers=None, name: str = "chambers") -> str:
    """Chambers as nodes; each panel of degree >= 3 is drawn as a small hub node."""
    if chambers is None:
        chambers = [c for c in bld.chambers() if bld.safe(c, 1)]
    chambers = sorted(chambers, key=bld.sort_key)
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle, fontsize=10];"]
    for c in chambers:
        lines.append(f"  {_quote(bld.describe(c))};")
    seen = set()
    for c in chambers:
        for s in range(bld.system.rank):
            block = bld.panel(c, s)
            if block in seen:
                continue
            seen.add(block)
            label = bld.system.names[s]
            if len(block) == 2:
                a, b = (bld.describe(x) for x in block)
                lines.append(f"  {_quote(a)} -- {_quote(b)} [label={_quote(label)}, color={_color(s)}];")
            else:
                hub = f"{label}:{bld.describe(block[0])}"
                lines.append(f"  {_quote(hub)} [shape=point, color={_color(s)}];")
                for x in block:
                    lines.append(f"  {_quote(hub)} -- {_quote(bld.describe(x))} [color={_color(s)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def apartment(A, walls=(), name: str = "apartment") -> str:
    """The apartment ball as a Cayley graph of W, wall panels drawn bold."""
    sys = A.system
    fmt = sys.format_word
    bold = {}
    for n, wall in enumerate(walls):
        for p in wall.panels:
            bold[p.elements] = COLORS[(n + 1) % len(COLORS)]
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle, fontsize=10];"]
    for w in A.domain:
        lines.append(f"  {_quote(fmt(w))} [tooltip={_quote(A.building.describe(A(w)))}];")
    for w in A.domain:
        for s in range(sys.rank):
            v = sys.right_mul(w, s)
            if v in A.image and (len(v), v) > (len(w), w):
                pair = (w, v)
                style = f", color={bold[pair]}, penwidth=3" if pair in bold else ""
                lines.append(f"  {_quote(fmt(w))} -- {_quote(fmt(v))} [label={_quote(sys.names[s])}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def orbit_graph(graph, name: str = "orbits") -> str:
    bld = graph.space.building
    lines = [f"digraph {_quote(name)} {{", "  node [shape=box, fontsize=10];"]
    for n, (c, j) in enumerate(graph.nodes):
        lines.append(f"  n{n} [label={_quote(f'({bld.describe(c)}, {j})')}];")
    for arcs in graph.arcs:
        for a in arcs:
            lines.append(
                f"  n{a.source} -> n{a.target} "
                f"[label={_quote(f'{a.prob} via {graph.action.format_word(a.lift)}')}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def galleries(bld: Building, named, highlight=(), name: str = "galleries") -> str:
    """Galleries as coloured paths; ``highlight`` chambers (e.g. a panel) are boxed."""
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle, fontsize=10];"]
    boxed = {bld.describe(c) for c in highlight}
    nodes = set(boxed)
    for _, gal in named:
        nodes.update(bld.describe(c) for c in gal.chambers)
    for label in sorted(nodes):
        shape = " [shape=box, style=bold]" if label in boxed else ""
        lines.append(f"  {_quote(label)}{shape};")
    for n, (title, gal) in enumerate(named):
        color = COLORS[(n + 1) % len(COLORS)]
        for a, b, s in zip(gal.chambers, gal.chambers[1:], gal.type):
            lines.append(
                f"  {_quote(bld.describe(a))} -- {_quote(bld.describe(b))} "
                f"[label={_quote(f'{title}:{bld.system.names[s]}')}, color={color}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumbbell(wit, extra=()) -> str:
    named = [("omega", wit.omega), ("omega''", wit.omega_dprime), ("omega'", wit.omega_prime)]
    named.extend(extra)
    return galleries(wit.building, named, highlight=wit.sigma(), name="dumbbell")
