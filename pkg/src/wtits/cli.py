"""Command line: ``wtits <command> FILE ...``.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 thin building
(use ``rho``), 4 finite factor present (use ``quotient`` first).
"""
from __future__ import annotations

import argparse
import json
import sys

from .apartments import NoBranchingPanel, NoParallelWall
from .building import BuildingError, verify_building
from .coxeter import BraidClosureOverflow, CoxeterError
from .documents import (
    Document,
    DocumentError,
    decode_witness,
    dumps,
    encode_quotient_graph,
    encode_witness,
    load_document,
    parse_document,
    system_only,
)
from .dynamics import ActionError, NotThin, rho_map, validate_action
from .quotient import QuotientError, check_delta2_welldefined, check_metric_bound, finite_factor, quotient_building
from . import dot

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_THIN, EXIT_FINITE = 0, 1, 2, 3, 4


def _emit(obj, out=None) -> None:
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write(path, text) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _config(doc: Document, args, key, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return doc.config.get(key, default)


def _load(args) -> Document:
    doc = load_document(args.file, radius=args.radius)
    if args.braid_cap is not None:
        doc.system.braid_cap = args.braid_cap
        doc.building.system.braid_cap = args.braid_cap
    return doc


def cmd_reduce(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            sys_ = system_only(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(str(exc)) from None
    if args.braid_cap is not None:
        sys_.braid_cap = args.braid_cap
    a = sys_.reduce(sys_.parse_word(args.word))
    print(f"{sys_.format_word(a)}, {len(a)}")
    return EXIT_OK


def cmd_verify_building(args) -> int:
    doc = _load(args)
    max_len = _config(doc, args, "max_len", 3)
    rep = verify_building(doc.building, max_len)
    _emit(rep.to_json(), args.output)
    return EXIT_OK if rep else EXIT_FAIL


def cmd_quotient(args) -> int:
    doc = _load(args)
    s1 = args.s1 if args.s1 is not None else doc.config.get("s1")
    if s1 is None:
        S1 = finite_factor(doc.system)
        if S1 is None:
            raise QuotientError("the Coxeter diagram has no finite component")
    else:
        names = s1.split(",") if isinstance(s1, str) else list(s1)
        S1 = tuple(doc.system.index(n.strip()) for n in names)
    data = quotient_building(doc.building, S1)
    samples = _config(doc, args, "samples", 1000)
    max_len = _config(doc, args, "max_len", 3)
    reports = [
        verify_building(data.quotient, max_len),
        check_delta2_welldefined(data, samples),
        check_metric_bound(data, samples),
    ]
    action_spec = "trivial"
    if doc.action_spec != "trivial":
        try:
            from .quotient import induced_action

            ind = induced_action(data, doc.action)
            n = len(data.members)
            perms = {}
            for i, name in enumerate(ind.names):
                perms[name] = [ind.apply(i, a) for a in range(n)]
            action_spec = {"generators": perms}
        except (ActionError, QuotientError, BuildingError, LookupError):
            action_spec = "trivial"
    qdoc = Document(data.quotient.system, data.quotient, action_spec, {"max_len": max_len})
    passed = all(reports)
    out = {
        "passed": passed,
        "summary": data.summary(),
        "reports": [r.to_json() for r in reports],
    }
    if args.output:
        _write(args.output, qdoc.dumps())
    else:
        out["quotient"] = qdoc.to_json()
    _emit(out)
    return EXIT_OK if passed else EXIT_FAIL


def _freesub_run(doc: Document, args):
    from .freesub import certify_free, find_dumbbell

    action = doc.action
    rep = validate_action(action)
    if not rep:
        raise ActionError(rep.failures[0])
    wit = find_dumbbell(
        doc.building,
        action,
        apartment_radius=_config(doc, args, "apartment_radius", 4),
        order_cap=_config(doc, args, "order_cap", 64),
        search_depth=_config(doc, args, "search_depth", 6),
        budget=_config(doc, args, "budget", 10_000),
    )
    L = _config(doc, args, "L", 4)
    E = _config(doc, args, "max_exponent", 2)
    cert = certify_free(wit, L, E, reserve=_config(doc, args, "margin", 0))
    return wit, cert


def cmd_freesub(args) -> int:
    doc = _load(args)
    try:
        wit, cert = _freesub_run(doc, args)
    except NoParallelWall as exc:
        print(f"finite factor: quotient first ({exc})", file=sys.stderr)
        return EXIT_FINITE
    except NoBranchingPanel as exc:
        print(f"thin case: use rho ({exc})", file=sys.stderr)
        return EXIT_THIN
    from .dynamics import StateSpace, quotient_graph

    graph = quotient_graph(StateSpace(doc.building, wit.period), wit.action)
    out = {
        "kind": "witness",
        "input": doc.to_json(),
        "g": wit.action.format_word(wit.g),
        "g_prime": wit.action.format_word(wit.g_prime),
        "witness": encode_witness(wit),
        "orbit_graph": encode_quotient_graph(graph),
        "reports": [r.to_json() for r in wit.reports],
        "certificate": cert.to_json(),
    }
    _emit(out, args.output)
    if args.dot:
        _write(args.dot, dot.dumbbell(wit))
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_verify_witness(args) -> int:
    from .freesub import certify_free

    try:
        with open(args.file, encoding="utf-8") as fh:
            stored = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(str(exc)) from None
    if stored.get("kind") != "witness":
        raise DocumentError("not a witness document")
    doc = parse_document(stored["input"])
    wit = decode_witness(stored["witness"], doc.building, doc.action)
    check = wit.check()
    old = stored["certificate"]
    cert = certify_free(wit, old["max_syllables"], old["max_exponent"], reserve=old.get("reserve", 0))
    same = dumps(cert.to_json()) == dumps(old)
    out = {"passed": bool(check) and cert.passed and same, "reproduced": same,
           "dumbbell": check.to_json(), "certificate": cert.to_json()}
    _emit(out, args.output)
    return EXIT_OK if out["passed"] else EXIT_FAIL


def cmd_rho(args) -> int:
    doc = _load(args)
    try:
        table = rho_map(doc.building, doc.action, word_radius=_config(doc, args, "word_radius", 3))
    except NotThin as exc:
        print(f"not thin: {exc}", file=sys.stderr)
        return EXIT_THIN
    fmt = doc.building.system.format_word
    out = {
        "base": doc.building.encode(table.base),
        "table": {k: fmt(v) for k, v in sorted(table.table.items())},
        "report": table.report.to_json(),
    }
    _emit(out, args.output)
    return EXIT_OK if table.report else EXIT_FAIL


def cmd_dot(args) -> int:
    doc = _load(args)
    sys.stdout.write(dot.chamber_graph(doc.building))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wtits", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, word=False):
        sp.add_argument("file")
        if word:
            sp.add_argument("word")
        sp.add_argument("--radius", type=int, default=None, help="override the ball radius")
        sp.add_argument("--braid-cap", type=int, default=None)
        sp.add_argument("-o", "--output", default=None)
        return sp

    common(sub.add_parser("reduce", help="canonical form and length of a word"), word=True)
    sp = common(sub.add_parser("verify-building", help="check the building axioms"))
    sp.add_argument("--max-len", dest="max_len", type=int, default=None)
    sp = common(sub.add_parser("quotient", help="collapse a finite factor"))
    sp.add_argument("--s1", default=None, help="comma separated generators (default: all finite components)")
    sp.add_argument("--max-len", dest="max_len", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp = common(sub.add_parser("freesub", help="find and certify a free subgroup"))
    sp.add_argument("-L", dest="L", type=int, default=None, help="maximum syllable length")
    sp.add_argument("--max-exponent", dest="max_exponent", type=int, default=None)
    sp.add_argument("--margin", type=int, default=None, help="chambers kept clear of the ball boundary")
    sp.add_argument("--dot", default=None, help="write the dumbbell as DOT")
    common(sub.add_parser("verify-witness", help="re-check a stored witness"))
    sp = common(sub.add_parser("rho", help="thin case: the homomorphism to W"))
    sp.add_argument("--word-radius", dest="word_radius", type=int, default=None)
    common(sub.add_parser("dot", help="chamber graph as DOT"))
    return p


COMMANDS = {
    "reduce": cmd_reduce,
    "verify-building": cmd_verify_building,
    "quotient": cmd_quotient,
    "freesub": cmd_freesub,
    "verify-witness": cmd_verify_witness,
    "rho": cmd_rho,
    "dot": cmd_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (DocumentError, CoxeterError, BuildingError, QuotientError, ActionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BraidClosureOverflow as exc:
        print(f"input error: {exc} (raise --braid-cap)", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
