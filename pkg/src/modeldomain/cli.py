"""Command line front end.  Every command prints one JSON report.

Exit status: 0 verified, 1 refuted, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from fractions import Fraction

from . import models, suite
from .dsl import ParseError, format_field, format_poly, parse_field, parse_poly
from .exactalg import GaussQ
from .vfield import (
    HoloVectorField,
    annihilator_space,
    straighten_negative_field,
    tangency_residual,
    tangent_field_space,
)
from .wpoly import MixedPoly, Monomial, WeightSystem, balanced_part, signature_decompose

EXIT_OK, EXIT_REFUTED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization


def jsonable(x):
    """Exact values become strings; containers are converted recursively."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, GaussQ):
        return {"re": str(x.re), "im": str(x.im)}
    if isinstance(x, MixedPoly):
        return format_poly(x)
    if isinstance(x, HoloVectorField):
        return format_field(x)
    if isinstance(x, Monomial):
        return format_poly(MixedPoly({x: 1}, len(x.J)))
    if isinstance(x, float):
        return "inf" if math.isinf(x) else repr(x)
    if isinstance(x, (models.MP.mpf, models.MP.mpc)):
        return models.MP.nstr(x, 20)
    if isinstance(x, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# argument helpers


def parse_m(text: str) -> WeightSystem:
    text = text.strip()
    if text.startswith("m="):
        text = text[2:]
    try:
        m = tuple(int(s) for s in text.strip("()").split(","))
    except ValueError:
        raise UsageError(f"--m expects comma-separated positive integers, got {text!r}") from None
    try:
        return WeightSystem(m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_mu(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"weight must be a rational like -1/2, got {text!r}") from None


def read_text(text: str, stdin) -> str:
    return stdin.read() if text == "-" else text


def _report(args, result, ref: str, verified: bool, **inputs):
    inp = {"p": args.p_obj}
    if getattr(args, "ws", None) is not None:
        inp["m"] = list(args.ws.m)
    inp.update(inputs)
    doc = {
        "command": args.command,
        "inputs": inp,
        "result": result,
        "paper_ref": ref,
        "status": "verified" if verified else "refuted",
    }
    return doc, EXIT_OK if verified else EXIT_REFUTED


# ---------------------------------------------------------------------------
# commands


def cmd_check_tangent(args):
    H = parse_field(args.field_text, args.ws)
    rep = tangency_residual(args.p_obj, H, args.ws)
    result = {"residual": rep.residual, "tangent": rep.is_tangent, "witness": rep.witness}
    return _report(args, result, "tangency identity on the boundary graph", rep.is_tangent, field=H)


def cmd_tangent_space(args):
    space = tangent_field_space(args.p_obj, args.ws, args.mu)
    result = {"real_dimension": space.real_dimension, "basis": list(space.basis)}
    return _report(args, result, "weight-graded tangent fields", True, mu=args.mu)


def cmd_signature(args):
    dec = signature_decompose(args.p_obj, args.ws)
    parts = [{"signature": nu, "part": dec.part(nu)} for nu in sorted(dec.signatures)]
    result = {"parts": parts, "balanced": dec.is_balanced}
    return _report(args, result, "signature decomposition", True)


def cmd_balanced_part(args):
    bp = balanced_part(args.p_obj, args.ws)
    result = {"balanced_part": bp, "balanced": bp == args.p_obj}
    return _report(args, result, "balanced part", True)


def cmd_annihilator(args):
    spaces = annihilator_space(args.p_obj, args.ws, args.weight_bound)
    result = {
        "weight_bound": args.weight_bound,
        "holds_up_to_bound": not spaces,
        "spaces": [{"weight": s.weight, "complex_dimension": len(s), "basis": list(s.basis)} for s in spaces],
    }
    return _report(args, result, "no annihilating holomorphic field", not spaces)


def _weights_result(rep):
    return {
        "m": rep.m,
        "deltas": rep.deltas,
        "p": rep.p,
        "admissible": rep.admissible,
        "witness": rep.witness,
        "witness_weight": rep.witness_weight,
        "axis_orders": rep.axis_orders,
        "message": rep.message,
        "warnings": rep.warnings,
    }


def cmd_weights(args):
    rep = models.assign_weights_adapted(args.p_obj)
    return _report(args, _weights_result(rep), "adapted weight assignment", rep.admissible)


def cmd_model_extract(args):
    rep = models.homogeneous_model_extract(args.p_obj, args.ws)
    return _report(args, _weights_result(rep), "homogeneous model", rep.admissible)


def cmd_straighten(args):
    Q = parse_field(args.field_text, args.ws)
    r = straighten_negative_field(args.p_obj, Q, args.ws)
    result = {
        "weight": r.weight,
        "permutation": r.permutation,
        "field_scale": r.field_scale,
        "coordinate_scale": r.coordinate_scale,
        "change": {f"z{k}": v for k, v in sorted(r.change.items())},
        "S": r.S,
        "s0": r.s0,
        "p_tilde": r.p_tilde,
        "p_hat": r.p_hat,
        "field": r.field,
        "c": r.c,
        "m": r.m,
        "alphas": {f"z{k}": v for k, v in sorted(r.alphas.items())},
        "m_k": {f"z{k}": v for k, v in sorted(r.m_k.items())},
        "checks": r.checks,
    }
    return _report(args, result, "straightening a negative-weight field", r.ok, field=Q)


def cmd_cayley_check(args):
    # the residual identity only needs p balanced of weight 1; reuse the sweep
    text = format_poly(args.p_obj)
    ident, trip = suite.cayley_sweep(text, args.ws.m, args.samples, args.seed)
    ok = ident < args.tol and trip < args.tol
    dm = models.DomainModel("bounded", args.p_obj, args.ws)
    result = {
        "samples": args.samples,
        "seed": args.seed,
        "max_identity_residual": ident,
        "max_roundtrip_error": trip,
        "tolerance": repr(args.tol),
        "torus_invariant": models.t2_invariance_check(dm),
        "unbounded_bound": Fraction(0),
        "printed_bound": Fraction(1),
    }
    return _report(args, result, "Cayley-type transform", ok)


def cmd_zero_set_check(args):
    rep = models.zero_set_checks(args.p_obj, args.ws, args.samples, args.seed)
    result = {
        "positivity": rep.positivity,
        "min_sampled_value": rep.min_value,
        "witness": rep.witness if rep.positivity == "refuted" else None,
        "coordinate_lines": rep.axis,
        "vanishing_axes": rep.vanishing_axes,
        "samples": rep.samples,
        "tolerance": repr(rep.tolerance),
    }
    ok = rep.positivity == "supported" and rep.axis == "supported"
    return _report(args, result, "zero set contains no complex line", ok)


def cmd_suite(args):
    results = suite.run_suite(args.filter, jobs=args.jobs)
    ok = all(r.passed for r in results)
    doc = {
        "command": "suite",
        "inputs": {"filter": args.filter},
        "result": [{"tag": r.tag, "fixture": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        "paper_ref": "reproduction suite",
        "status": "verified" if ok else "refuted",
    }
    if not args.json:
        return suite.format_table(results), EXIT_OK if ok else EXIT_REFUTED
    return doc, EXIT_OK if ok else EXIT_REFUTED


# ---------------------------------------------------------------------------
# parser

COMMANDS = {
    "check-tangent": (cmd_check_tangent, "tangency residual of a field", ("field",)),
    "tangent-space": (cmd_tangent_space, "basis of tangent fields of one weight", ("mu",)),
    "signature": (cmd_signature, "signature decomposition", ()),
    "balanced-part": (cmd_balanced_part, "signature-zero part", ()),
    "annihilator": (cmd_annihilator, "holomorphic fields annihilating a polynomial", ("bound",)),
    "weights": (cmd_weights, "assign weights from axis orders", ("no-m",)),
    "model-extract": (cmd_model_extract, "weight-one part and admissibility", ()),
    "straighten": (cmd_straighten, "straighten a negative-weight field", ("field",)),
    "cayley-check": (cmd_cayley_check, "numeric check of the Cayley-type transform", ("samples",)),
    "zero-set-check": (cmd_zero_set_check, "positivity and coordinate-line checks", ("samples",)),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modeldomain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text, extras) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--p", required=True, help="polynomial text, or - for stdin")
        if "no-m" not in extras:
            sp.add_argument("--m", required=True, help="weights m_j, e.g. 4,3")
        if "field" in extras:
            sp.add_argument("--field", required=True, help="field text, e.g. '(1) d/dw'")
        if "mu" in extras:
            sp.add_argument("--mu", required=True, help="field weight, e.g. -1/2")
        if "bound" in extras:
            sp.add_argument("--weight-bound", default="1", help="largest field weight searched")
        if "samples" in extras:
            sp.add_argument("--samples", type=int, default=1000)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--tol", type=float, default=1e-12 if name == "cayley-check" else 1e-8)
    sp = sub.add_parser("suite", help="run the reproduction suite")
    sp.add_argument("--filter", default=None, help="substring of fixture tag or name")
    sp.add_argument("--jobs", type=int, default=4)
    sp.add_argument("--json", action="store_true", help="emit a JSON report instead of a table")
    return parser


def run_command(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "suite":
            out, code = cmd_suite(args)
            print(out if isinstance(out, str) else dumps(out), file=stdout)
            return code
        handler = COMMANDS[args.command][0]
        args.ws = parse_m(args.m) if hasattr(args, "m") else None
        args.p_obj = parse_poly(read_text(args.p, stdin), args.ws)
        if hasattr(args, "field"):
            args.field_text = read_text(args.field, stdin)
        if hasattr(args, "mu"):
            args.mu = parse_mu(args.mu)
        if hasattr(args, "weight_bound"):
            args.weight_bound = parse_mu(args.weight_bound)
        doc, code = handler(args)
    except (UsageError, ParseError, ValueError, TypeError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    print(dumps(doc), file=stdout)
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
