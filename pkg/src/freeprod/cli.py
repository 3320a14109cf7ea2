"""Command-line interface.

Exit codes: 0 affirmative/valid, 1 negative answer or invalid certificate,
2 input error (syntax, schema, validation), 3 internal error.
"""

import argparse
import json
import sys

from .actions import CoverAction, subgroup_presentation, validate
from .builders import build_torsion_removal, build_witness, WitnessChain
from .certificate import (WitnessCertificate, certificate_from_chain, load,
                          step_from_json, verify_certificate, verify_witness)
from .core import chi, classify, decide
from .errors import InputError, NotCommensurableError, SchemaError
from .gog import build_gog_cover
from .parser import format_group, parse_gog, parse_group

OK, NEGATIVE, BAD_INPUT, INTERNAL = 0, 1, 2, 3


def _dump(obj):
    return json.dumps(obj, separators=(",", ":"))


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _emit(args, payload, lines):
    if args.pretty:
        print("\n".join(lines))
    else:
        print(_dump(payload))


def cmd_classify(args):
    P = parse_group(args.expr)
    c = classify(P)
    _emit(args, c.to_json(), [f"{format_group(P)}: {c}"])
    return OK


def cmd_decide(args):
    P1, P2 = parse_group(args.expr1), parse_group(args.expr2)
    dec = decide(P1, P2)
    verdict = "commensurable" if dec.commensurable else "not commensurable"
    _emit(args, dec.to_json(), [f"{format_group(P1)}: {dec.class1}",
                                f"{format_group(P2)}: {dec.class2}", verdict])
    return OK if dec.commensurable else NEGATIVE


def cmd_witness(args):
    P1, P2 = parse_group(args.expr1), parse_group(args.expr2)
    try:
        left, right = build_witness(P1, P2)
    except NotCommensurableError as exc:
        payload = {"commensurable": False, "reason": "class mismatch",
                   "class1": exc.class1.to_json(), "class2": exc.class2.to_json()}
        _emit(args, payload, [f"not commensurable: class mismatch ({exc.class1} vs {exc.class2})"])
        return NEGATIVE
    cert = WitnessCertificate(certificate_from_chain(left), certificate_from_chain(right))
    summary = {
        "commensurable": True,
        "finals": [format_group(left.final), format_group(right.final)],
        "indices": [left.total_index, right.total_index],
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(_dump(cert.to_json()) + "\n")
    else:
        summary["witness"] = cert.to_json()
    _emit(args, summary, [f"common subgroup: {summary['finals'][0]}",
                          f"indices: {left.total_index}, {right.total_index}"])
    return OK


def cmd_verify(args):
    doc = load(_load_json(args.path))
    if isinstance(doc, WitnessCertificate):
        report = verify_witness(doc)
    else:
        report = verify_certificate(doc)
    _emit(args, report.to_json(), [str(report)])
    return OK if report.ok else NEGATIVE


def cmd_reduce(args):
    P = parse_group(args.expr)
    cover = build_torsion_removal(P)
    result = subgroup_presentation(cover)
    chain = WitnessChain(P, (cover,), (result,))
    cert = certificate_from_chain(chain)
    payload = {"subgroup": format_group(result), "index": cover.degree, "certificate": cert.to_json()}
    _emit(args, payload, [f"{format_group(result)} (index {cover.degree})"])
    return OK


def cmd_lemma(args):
    spec = parse_gog(_read(args.path))
    graph, P, index = build_gog_cover(spec)
    payload = {
        "subgroup": format_group(P),
        "index": index,
        "vertices": len(graph.vertex_copies),
        "edges": len(graph.edge_copies),
        "cycle_rank": graph.cycle_rank,
    }
    lines = [f"{format_group(P)} (index {index})",
             f"covering graph: V'={payload['vertices']} E'={payload['edges']} cycle rank {graph.cycle_rank}"]
    if args.dot:
        dot = graph.to_dot()
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(dot)
        else:
            payload["dot"] = dot
            lines.append(dot.rstrip())
    _emit(args, payload, lines)
    return OK


def cmd_subgroup(args):
    P = parse_group(args.expr)
    obj = _load_json(args.path)
    if isinstance(obj, dict):
        obj = {"result": "", **obj}  # the claimed result is not used here
    step = step_from_json(obj, 1)
    if step.degree < 1:
        raise SchemaError("'degree' must be positive")
    perms = {}
    for j, ps in step.factors:
        if j >= len(P) or j in perms:
            raise SchemaError(f"bad factor index {j}")
        perms[j] = ps
    cover = CoverAction.from_perms(P, step.degree, perms)
    violation = validate(cover)
    if violation is not None:
        _emit(args, {"valid": False, "violation": violation.kind, "message": str(violation)}, [str(violation)])
        return NEGATIVE
    result = subgroup_presentation(cover)
    payload = {
        "valid": True,
        "subgroup": format_group(result),
        "index": cover.degree,
        "chi_base": str(chi(P)),
        "chi_subgroup": str(chi(result)),
        "chi_check": chi(result) == cover.degree * chi(P),
    }
    _emit(args, payload, [f"{format_group(result)} (index {cover.degree})",
                          f"chi: {chi(result)} = {cover.degree} * {chi(P)}"])
    return OK


def build_parser():
    parser = argparse.ArgumentParser(prog="freeprod", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="commensurability class of a free product")
    p.add_argument("expr", help='free product, e.g. "Z^2 * Z/2"')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decide", parents=[common], help="decide commensurability of two free products")
    p.add_argument("expr1", help='free product, e.g. "Z^2 * Z/2"')
    p.add_argument("expr2", help="second free product")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("witness", parents=[common], help="build a commensurability certificate")
    p.add_argument("expr1", help='free product, e.g. "Z^2 * Z/2"')
    p.add_argument("expr2", help="second free product")
    p.add_argument("-o", "--output", help="write the witness JSON here instead of embedding it in stdout")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", parents=[common], help="verify a certificate or witness file")
    p.add_argument("path", help="certificate or witness JSON file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", parents=[common], help="torsion-free finite-index subgroup")
    p.add_argument("expr", help='free product, e.g. "Z^2 * Z/2"')
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lemma", parents=[common], help="free subgroup of a graph of groups")
    p.add_argument("path", help="graph-of-groups JSON file, or - for stdin")
    p.add_argument("--dot", action="store_true", help="emit the covering graph as DOT")
    p.add_argument("-o", "--output", help="DOT output path (with --dot)")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("subgroup", parents=[common], help="Kurosh decomposition of a user-supplied cover")
    p.add_argument("expr", help='free product, e.g. "Z^2 * Z/2"')
    p.add_argument("path", help="JSON file with one certificate step: degree and factors")
    p.set_defaults(func=cmd_subgroup)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
