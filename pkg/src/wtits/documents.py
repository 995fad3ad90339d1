"""JSON documents: input (system, building, action, config), quotients, witnesses.

Everything is written with sorted keys and two-space indentation, so a
parse followed by a dump reproduces a dump byte for byte.  Infinite Coxeter
entries are the string ``"inf"``; exact rationals are ``[num, den]``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .apartments import WallGalleryData
from .building import (
    Building,
    BuildingError,
    ExplicitBuilding,
    Gallery,
    GraphProductBuilding,
    ProductBuilding,
    ThinBuilding,
)
from .coxeter import INF, CoxeterError, CoxeterMatrix, CoxeterSystem, new_system
from .dynamics import (
    ActionError,
    GroupAction,
    PermutationAction,
    ProductAction,
    TrivialAction,
    left_multiplication,
)


class DocumentError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def rational(x: Fraction) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


# --- Coxeter systems ---------------------------------------------------------------


def encode_system(sys: CoxeterSystem) -> dict:
    entries = []
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            m = sys.m(i, j)
            entries.append([sys.names[i], sys.names[j], "inf" if m == INF else int(m)])
    return {"rank": sys.rank, "generators": list(sys.names), "entries": entries}


def decode_system(obj) -> CoxeterSystem:
    try:
        rank = int(obj["rank"])
        names = [str(x) for x in obj.get("generators") or []]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad coxeter section: {exc}") from None
    if not names:
        from .coxeter import _default_names

        names = _default_names(rank)
    if len(names) != rank or len(set(names)) != rank:
        raise DocumentError("coxeter.generators must list rank distinct names")
    where = {n: i for i, n in enumerate(names)}
    pairs = {}
    for entry in obj.get("entries", []):
        if len(entry) != 3:
            raise DocumentError(f"coxeter entry {entry!r} is not [a, b, m]")
        a, b, m = entry
        if a not in where or b not in where:
            raise DocumentError(f"coxeter entry {entry!r} names an undeclared generator")
        if m == "inf":
            m = INF
        elif not isinstance(m, int):
            raise DocumentError(f"coxeter entry {entry!r}: m must be an integer or \"inf\"")
        pairs[(where[a], where[b])] = m
    try:
        if rank == 0:
            return CoxeterSystem(CoxeterMatrix(0, ()), ())
        return new_system(CoxeterMatrix.from_pairs(rank, pairs), names)
    except CoxeterError as exc:
        raise DocumentError(str(exc)) from None


# --- buildings ---------------------------------------------------------------------


def _encode_margin(m):
    return None if math.isinf(m) else int(m)


def encode_building(bld: Building) -> dict:
    names = bld.system.names
    if isinstance(bld, ExplicitBuilding):
        out = {
            "backend": "explicit",
            "chambers": bld.n,
            "base": bld.base,
            "radius": bld.radius,
            "partitions": {names[s]: [list(b) for b in blocks] for s, blocks in enumerate(bld.partitions())},
        }
        if bld.labels:
            out["labels"] = list(bld.labels)
        if bld._margins is not None:
            out["margins"] = [_encode_margin(m) for m in bld._margins]
        return out
    if isinstance(bld, ThinBuilding):
        return {"backend": "thin", "radius": bld.ball_radius}
    if isinstance(bld, GraphProductBuilding):
        return {
            "backend": "graph-product",
            "radius": bld.ball_radius,
            "sizes": {names[v]: q for v, q in enumerate(bld.group.sizes)},
        }
    if isinstance(bld, ProductBuilding):
        return {
            "backend": "product",
            "split": bld.split,
            "factors": [encode_building(bld.first), encode_building(bld.second)],
        }
    raise DocumentError(f"cannot serialize {type(bld).__name__}")


def decode_building(obj, sys: CoxeterSystem, radius: int | None = None) -> Building:
    if not isinstance(obj, dict) or "backend" not in obj:
        raise DocumentError("building section needs a backend")
    kind = obj["backend"]
    try:
        if kind == "explicit":
            return _decode_explicit(obj, sys)
        if kind == "thin":
            return ThinBuilding(sys, int(radius if radius is not None else obj["radius"]))
        if kind == "graph-product":
            return _decode_graph_product(obj, sys, radius)
        if kind == "product":
            split = int(obj["split"])
            if not 0 <= split <= sys.rank:
                raise DocumentError("product split out of range")
            f1, f2 = obj["factors"]
            first = decode_building(f1, sys.subsystem(range(split)), radius)
            second = decode_building(f2, sys.subsystem(range(split, sys.rank)), radius)
            bld = ProductBuilding(first, second)
            if bld.system.matrix != sys.matrix:
                raise DocumentError("product factors do not commute: cross entries must be 2")
            bld.system = sys
            return bld
    except (KeyError, TypeError) as exc:
        raise DocumentError(f"bad building section: missing or malformed {exc}") from None
    except (BuildingError, CoxeterError) as exc:
        raise DocumentError(str(exc)) from None
    raise DocumentError(f"unknown building backend {kind!r}")


def _decode_explicit(obj, sys: CoxeterSystem) -> ExplicitBuilding:
    parts = obj.get("partitions", {})
    unknown = set(parts) - set(sys.names)
    if unknown:
        raise DocumentError(f"partitions for undeclared generators {sorted(unknown)}")
    missing = [n for n in sys.names if n not in parts]
    if missing:
        raise DocumentError(f"no partition for generators {missing}")
    margins = obj.get("margins")
    if margins is not None:
        margins = [math.inf if m is None else m for m in margins]
    return ExplicitBuilding(
        sys,
        int(obj["chambers"]),
        [parts[n] for n in sys.names],
        labels=obj.get("labels"),
        base=int(obj.get("base", 0)),
        radius=obj.get("radius"),
        margins=margins,
    )


def _decode_graph_product(obj, sys: CoxeterSystem, radius) -> GraphProductBuilding:
    edges = []
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            m = sys.m(i, j)
            if m == 2:
                edges.append((i, j))
            elif m != INF:
                raise DocumentError("a graph-product building needs a right-angled Coxeter matrix")
    sizes = obj["sizes"]
    if set(sizes) != set(sys.names):
        raise DocumentError("graph-product sizes must list every generator")
    r = int(radius if radius is not None else obj["radius"])
    try:
        return GraphProductBuilding(sys.rank, edges, [sizes[n] for n in sys.names], r, sys.names)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


# --- actions -----------------------------------------------------------------------


def decode_action(spec, bld: Building) -> GroupAction:
    try:
        if spec is None or spec == "left-multiplication":
            return left_multiplication(bld)
        if spec == "trivial":
            return TrivialAction(bld)
        if isinstance(spec, dict) and "product" in spec:
            if not isinstance(bld, ProductBuilding):
                raise DocumentError("a product action needs a product building")
            a1, a2 = spec["product"]
            return ProductAction(bld, decode_action(a1, bld.first), decode_action(a2, bld.second))
        if isinstance(spec, dict) and "generators" in spec:
            if not isinstance(bld, ExplicitBuilding):
                raise DocumentError("explicit permutations need an explicit building")
            gens = spec["generators"]
            names = sorted(gens)
            return PermutationAction(bld, [gens[n] for n in names], names)
    except ActionError as exc:
        raise DocumentError(str(exc)) from None
    raise DocumentError(f"unknown action specification {spec!r}")


# --- input documents ---------------------------------------------------------------


@dataclass
class Document:
    system: CoxeterSystem
    building: Building
    action_spec: object = "left-multiplication"
    config: dict = field(default_factory=dict)
    _action: GroupAction | None = None

    @property
    def action(self) -> GroupAction:
        if self._action is None:
            self._action = decode_action(self.action_spec, self.building)
        return self._action

    def to_json(self) -> dict:
        return {
            "coxeter": encode_system(self.system),
            "building": encode_building(self.building),
            "action": self.action_spec,
            "config": dict(self.config),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def parse_document(obj, radius: int | None = None) -> Document:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "coxeter" not in obj:
        raise DocumentError("a document needs a coxeter section")
    sys = decode_system(obj["coxeter"])
    if "building" not in obj:
        raise DocumentError("a document needs a building section")
    bld = decode_building(obj["building"], sys, radius)
    config = obj.get("config") or {}
    if not isinstance(config, dict):
        raise DocumentError("config must be an object")
    return Document(sys, bld, obj.get("action", "left-multiplication"), dict(config))


def load_document(path, radius: int | None = None) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(str(exc)) from None
    return parse_document(text, radius)


def system_only(obj) -> CoxeterSystem:
    """Accept either a full document or a bare coxeter section."""
    if isinstance(obj, dict) and "coxeter" in obj:
        obj = obj["coxeter"]
    return decode_system(obj)


# --- witnesses ---------------------------------------------------------------------


def encode_word(action: GroupAction, word) -> list:
    return [[action.names[i], e] for i, e in word]


def decode_word(action: GroupAction, obj) -> tuple:
    where = {n: i for i, n in enumerate(action.names)}
    try:
        return tuple((where[n], int(e)) for n, e in obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad generator word {obj!r}: {exc}") from None


def encode_gallery(bld: Building, gal: Gallery) -> dict:
    return {
        "chambers": [bld.encode(c) for c in gal.chambers],
        "type": [bld.system.names[s] for s in gal.type],
    }


def decode_gallery(bld: Building, obj) -> Gallery:
    return Gallery(
        tuple(_freeze(bld.decode(c)) for c in obj["chambers"]),
        tuple(bld.system.index(n) for n in obj["type"]),
    )


def _freeze(x):
    if isinstance(x, list):
        return tuple(_freeze(y) for y in x)
    return x


def encode_witness(wit) -> dict:
    bld, act, sys = wit.building, wit.action, wit.building.system
    data = wit.data
    return {
        "c1": bld.encode(wit.c1),
        "c2": bld.encode(wit.c2),
        "c3": bld.encode(wit.c3),
        "sigma_type": sys.names[wit.sigma_type],
        "period": [sys.names[s] for s in data.period],
        "k": data.k,
        "wall_gallery": {
            "gallery": encode_gallery(bld, data.gallery),
            "start": [sys.names[s] for s in data.start],
            "end": [sys.names[s] for s in data.end],
            "s0": sys.names[data.s0],
            "sk": sys.names[data.sk],
        },
        "g": encode_word(act, wit.g),
        "g_prime": encode_word(act, wit.g_prime),
        "g_dprime": encode_word(act, wit.g_dprime),
        "h": encode_word(act, wit.h),
        "omega": encode_gallery(bld, wit.omega),
        "omega_prime": encode_gallery(bld, wit.omega_prime),
        "omega_dprime": encode_gallery(bld, wit.omega_dprime),
    }


def decode_witness(obj, bld: Building, action: GroupAction):
    from .freesub import DumbbellWitness

    sys = bld.system
    try:
        wg = obj["wall_gallery"]
        data = WallGalleryData(
            decode_gallery(bld, wg["gallery"]),
            sys.reduce(sys.parse_word(wg["start"])),
            sys.reduce(sys.parse_word(wg["end"])),
            sys.index(wg["s0"]),
            sys.index(wg["sk"]),
            int(obj["k"]),
            tuple(sys.index(n) for n in obj["period"]),
        )
        wit = DumbbellWitness(
            bld, action, data, sys.index(obj["sigma_type"]),
            _freeze(bld.decode(obj["c1"])), _freeze(bld.decode(obj["c2"])), _freeze(bld.decode(obj["c3"])),
            g=decode_word(action, obj["g"]),
            g_dprime=decode_word(action, obj["g_dprime"]),
            h=decode_word(action, obj["h"]),
            omega=decode_gallery(bld, obj["omega"]),
            omega_dprime=decode_gallery(bld, obj["omega_dprime"]),
            omega_prime=decode_gallery(bld, obj["omega_prime"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad witness: {exc}") from None
    if wit.g_prime != decode_word(action, obj["g_prime"]):
        raise DocumentError("stored g' does not equal g'' h g''^-1")
    return wit


def encode_quotient_graph(graph) -> dict:
    bld = graph.space.building
    return {
        "nodes": [[bld.encode(c), j] for c, j in graph.nodes],
        "arcs": [
            {
                "source": a.source,
                "target": a.target,
                "prob": rational(a.prob),
                "lift": encode_word(graph.action, a.lift),
            }
            for arcs in graph.arcs
            for a in arcs
        ],
    }
