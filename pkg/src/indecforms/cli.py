"""Command-line front end.  Every command prints exact JSON (rationals as strings)."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .biquad import BiquadField, make_biquad_field
from .lattice import BudgetExceeded
from .oracle import decompose_form, enumerate_decompositions
from .qform import CATALOG, ParameterError, definiteness, det_class_certificate, form_from_json
from .scubic import CubicField, MonogenicityError, make_scubic_field
from .verify import (
    FAIL,
    SKIPPED,
    ClaimInstance,
    claim_instances,
    lower_bound_tally,
    report_line,
    run_all,
    summary_csv,
)

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_CLAIM = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


def field_from_key(key: str, require_monogenic: bool = False):
    """``"(p,q)"`` names a biquadratic field, an integer string a simplest cubic field."""
    key = key.strip()
    if key.startswith("("):
        p, q = (int(x) for x in key.strip("()").split(","))
        return make_biquad_field(p, q)
    return make_scubic_field(int(key), require_monogenic=require_monogenic)


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2))


def _elem_json(x, debug: bool):
    out = x.to_json()
    out["text"] = str(x)
    if debug:
        out["enclosures"] = [[str(e.lo), str(e.hi)] for e in (x.enclosure(k, 64) for k in range(x.field.degree))]
    return out


# -- subcommands ----------------------------------------------------------------

def cmd_field(args):
    if args.biquad:
        K = make_biquad_field(*args.biquad)
        _dump({
            "field": K.key, "kind": "biquadratic", "p": K.p, "q": K.q, "r": K.r,
            "basis_case": K.basis_case.value,
            "integral_basis": [_elem_json(b, args.debug) for b in K.integral_basis],
            "alternative_roles": [list(alt) for alt in K.alternatives],
        })
    else:
        K = make_scubic_field(args.cubic, require_monogenic=not args.no_monogenic_check)
        _dump({
            "field": K.key, "kind": "simplest_cubic", "a": K.a,
            "disc_factor": K.disc_factor, "monogenic_checked": K.monogenic_checked,
            "rho_images": [_elem_json(x, args.debug) for x in K.rho_images],
            "special_elements": {k: _elem_json(v, args.debug) for k, v in K.special_elements().items()},
        })
    return EXIT_OK


def cmd_indecomposables(args):
    K = make_scubic_field(args.cubic, require_monogenic=not args.no_monogenic_check)
    pts = K.triangle_points()
    _dump({
        "field": K.key, "count": len(pts),
        "elements": [{"v": p.v, "w": p.w, "element": _elem_json(K.alpha_of(p), args.debug)} for p in pts],
    })
    return EXIT_OK


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None


def cmd_decompose(args):
    data = _load_json(args.elem)
    K = field_from_key(data["field"])
    x = K.elem([Fraction(c) for c in data["coords"]])
    if not x.is_integral() or not x.is_totally_positive():
        raise ValidationError(f"{x} must be a totally positive integer")
    tag = None
    if args.subfield:
        if not isinstance(K, BiquadField):
            raise ValidationError("--subfield needs a biquadratic field")
        tag = K.subfield(int(args.subfield))
    decs = enumerate_decompositions(x, include_trivial=args.include_trivial,
                                    up_to_embeddings=args.up_to_embeddings, subfield=tag)
    _dump({
        "element": _elem_json(x, args.debug),
        "subfield": tag.value if tag else None,
        "indecomposable": not any(not d.trivial for d in decs),
        "decompositions": [[_elem_json(d.left, args.debug), _elem_json(d.right, args.debug)] for d in decs],
    })
    return EXIT_OK


def cmd_form_check(args):
    data = _load_json(args.form)
    K = field_from_key(data["field"])
    Q = form_from_json(data, K)
    kind = definiteness(Q)
    out = {"form": Q.to_json(), "text": str(Q), "definiteness": kind.value, "det": _elem_json(Q.det(), args.debug)}
    if kind.value == "TPD":
        dec = decompose_form(Q, classical_only=not args.non_classical)
        out["additively_indecomposable"] = dec is None
        out["decomposition"] = None if dec is None else dec.to_json()
    if isinstance(K, CubicField) and Q.n == 2:
        out["det_certificate"] = det_class_certificate(Q).to_json()
    _dump(out)
    return EXIT_OK


def _parse_params(items):
    params = {}
    for item in items or []:
        if "=" not in item:
            raise ValidationError(f"parameter {item!r} must look like key=value")
        k, v = item.split("=", 1)
        try:
            params[k] = int(v)
        except ValueError:
            params[k] = v.lower() == "true" if v.lower() in ("true", "false") else v
    return params


def cmd_verify(args):
    if args.all:
        instances = claim_instances(args.max_a, args.max_pq)
        if args.claim:
            instances = [i for i in instances if i.claim_id == args.claim]
    elif args.claim:
        params = _parse_params(args.params)
        instances = [ClaimInstance(args.claim, tuple(sorted(params.items())))]
    else:
        raise ValidationError("give --claim or --all")

    def emit(rep):
        print(report_line(rep), flush=True)

    reports = run_all(instances, jobs=args.jobs, force=args.force, on_report=emit)
    summary = summary_csv(reports)
    if args.summary_csv:
        with open(args.summary_csv, "w") as fh:
            fh.write(summary)
    if args.jsonl:
        with open(args.jsonl, "w") as fh:
            for rep in reports:
                fh.write(report_line(rep) + "\n")
    if len(reports) > 1:
        # deterministic sorted summary after the streamed lines
        print(json.dumps({"summary": [{"claim_id": r.claim_id, "params": r.to_json()["params"],
                                        "status": r.status} for r in reports]}))
    if any(r.status == FAIL for r in reports):
        return EXIT_CLAIM
    if any(r.status == SKIPPED for r in reports):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_tally(args):
    t = lower_bound_tally(args.cubic, require_monogenic=not args.no_monogenic_check,
                          oracle_sample=args.oracle_sample)
    _dump(t.to_json(include_forms=args.forms))
    return EXIT_OK if (t.certificates_ok and t.matches_formula) else EXIT_CLAIM


def cmd_catalog(args):
    entries = [{"id": e.key, "family": e.family, "conditions": e.conditions} for e in CATALOG.values()]
    extra = [
        {"id": "L4.4", "family": "biquad", "conditions": "decompositions of 2, 3, 4; params p, q"},
        {"id": "L5.2", "family": "cubic", "conditions": "decompositions of 2, 3; param a >= -1"},
        {"id": "T1.3", "family": "cubic", "conditions": "lower-bound tally; param a >= 6"},
        {"id": "T4.1", "family": "biquad", "conditions": "subfield indecomposables persist; params p, q"},
        {"id": "P5.5", "family": "cubic", "conditions": "alias of P5.5-ternary"},
    ]
    _dump({"claims": sorted(entries + extra, key=lambda e: e["id"])})
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--force", action="store_true", help="allow parameters outside proven ranges")
    common.add_argument("--debug", action="store_true", help="print enclosures and debug logging")

    ap = argparse.ArgumentParser(prog="indecforms", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="describe a field")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--biquad", nargs=2, type=int, metavar=("P", "Q"))
    g.add_argument("--cubic", type=int, metavar="A")
    p.add_argument("--no-monogenic-check", action="store_true")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("indecomposables", parents=[common], help="list the triangle set")
    p.add_argument("--cubic", type=int, required=True, metavar="A")
    p.add_argument("--no-monogenic-check", action="store_true")
    p.set_defaults(func=cmd_indecomposables)

    p = sub.add_parser("decompose", parents=[common], help="all decompositions of an element")
    p.add_argument("--elem", required=True, help='JSON, e.g. {"field": "(2,3)", "coords": ["4","0","0","0"]}')
    p.add_argument("--subfield", help="restrict to Q(sqrt D) for this D")
    p.add_argument("--include-trivial", action="store_true")
    p.add_argument("--up-to-embeddings", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("form-check", parents=[common], help="definiteness, determinant and oracle verdict")
    p.add_argument("--form", required=True, help="JSON as printed by form to_json")
    p.add_argument("--non-classical", action="store_true")
    p.set_defaults(func=cmd_form_check)

    p = sub.add_parser("verify", parents=[common], help="verify claims")
    p.add_argument("--claim")
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    p.add_argument("--all", action="store_true")
    p.add_argument("--max-a", type=int, default=12)
    p.add_argument("--max-pq", type=int, default=40)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--jsonl", help="also write the sorted reports to this file")
    p.add_argument("--summary-csv", help="write the summary CSV to this file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tally", parents=[common], help="lower-bound tally for a simplest cubic field")
    p.add_argument("--cubic", type=int, required=True, metavar="A")
    p.add_argument("--forms", action="store_true", help="include every form and certificate")
    p.add_argument("--oracle-sample", type=int, default=0, metavar="N")
    p.add_argument("--no-monogenic-check", action="store_true")
    p.set_defaults(func=cmd_tally)

    p = sub.add_parser("catalog", parents=[common], help="list claim and form ids")
    p.add_argument("--list", action="store_true", required=True)
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors, which would read as a budget overrun
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(json.dumps({"error": "budget", "message": str(exc)}))
        return EXIT_BUDGET
    except (ValidationError, ParameterError, MonogenicityError, ValueError, KeyError) as exc:
        print(json.dumps({"error": "validation", "message": str(exc)}))
        return EXIT_VALIDATION


def run(argv) -> int:
    """Run one command line (without the program name); returns the exit code."""
    return main(list(argv))


if __name__ == "__main__":
    sys.exit(main())
