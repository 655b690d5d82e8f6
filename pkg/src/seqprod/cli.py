"""Command-line entry point.

Exit codes: 0 success, 1 property or verification failure, 2 usage or
input-validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import effects as fx
from .equivalence import build_witness, verify_witness
from .errors import SeqProdError
from .matrix_core import matrix_to_json
from .properties import DEFAULT_TOL, LOG_FLOOR, run_suite, run_theorem1_suite
from .sequential import STATE_EPS, luders_apply, parse_family, parse_product

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dims(text):
    try:
        dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dims expects comma-separated integers, got {text!r}")
    if not dims or any(d < 1 or d > 64 for d in dims):
        raise argparse.ArgumentTypeError("every dimension must lie in [1, 64]")
    return dims


def _positive_int(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return x


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--dims", type=_dims, default=[2, 3, 4, 5, 6])
    shared.add_argument("--trials", type=_positive_int, default=200)
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    shared.add_argument("--out", default=None, help="output file (default stdout)")
    shared.add_argument("--format", choices=("json", "text"), default="json")

    p = argparse.ArgumentParser(prog="seqprod", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    vp = sub.add_parser("verify-properties", parents=[shared],
                        help="randomised S1-S5 suite for a sequential product")
    vp.add_argument("--product", required=True,
                    help="standard | twisted | family:<zero|const:x|log:x|linear:x>")
    vp.add_argument("--spectral-floor", type=float, default=None,
                    help=f"lower eigenvalue bound for random effects "
                         f"(default {LOG_FLOOR} for log-phase products, else 0)")

    vt = sub.add_parser("verify-theorem1", parents=[shared],
                        help="conditions (i), (ii) and the phase-function lemma for a family")
    vt.add_argument("--family", required=True)
    vt.add_argument("--spectral-floor", type=float, default=None)

    w = sub.add_parser("witness", parents=[shared], help="build and verify the unitary witness")
    w.add_argument("--effect", required=True, help="effect matrix JSON")
    w.add_argument("--family", required=True)
    w.set_defaults(trials=100)

    s = sub.add_parser("seqprod", parents=[shared], help="evaluate a sequential product")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--product", default="standard")

    m = sub.add_parser("measure", parents=[shared], help="outcome probability and post-state")
    m.add_argument("--state", required=True)
    m.add_argument("--effect", required=True)
    return p


def _emit(args, payload, text):
    out = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _config(args, **extra):
    return {"command": args.command, "dims": args.dims, "trials": args.trials,
            "seed": args.seed, "tolerance": args.tol, **extra}


def _suite_text(reports):
    lines = []
    for r in reports:
        lines.append(f"{r.product}  dim={r.dim}  trials={r.trials}  seed={r.seed}  tol={r.tolerance:g}")
        for t in r.results:
            status = "PASS" if t.failed == 0 else "FAIL"
            lines.append(f"  {t.property:8s} {status}  pass={t.passed:<5d} fail={t.failed:<5d} "
                         f"max_residual={t.max_residual:.3e}")
    return "\n".join(lines) + "\n"


def _suite(args, reports, **extra):
    ok = all(r.all_passed for r in reports)
    payload = {"config": _config(args, **extra), "pass": ok,
               "reports": [r.to_dict() for r in reports]}
    _emit(args, payload, _suite_text(reports))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_properties(args):
    prod = parse_product(args.product)
    reports = run_suite(prod, args.dims, args.trials, args.seed, args.tol, args.spectral_floor)
    return _suite(args, reports, product=str(prod), spectral_floor=reports[0].spectral_floor)


def cmd_verify_theorem1(args):
    fam = parse_family(args.family)
    reports = run_theorem1_suite(fam, args.dims, args.trials, args.seed, args.tol,
                                 args.spectral_floor)
    return _suite(args, reports, family=str(fam), spectral_floor=reports[0].spectral_floor)


def cmd_witness(args):
    fam = parse_family(args.family)
    A = fx.load_operator(args.effect, "effect")
    w = build_witness(fam, A)
    check = verify_witness(w, args.trials, args.seed, tolerance=args.tol)
    payload = {**w.to_dict(), "verification": {"trials": args.trials, "seed": args.seed, **check}}
    text = (f"family={fam} dim={A.dim} unitarity={w.residuals['unitarity']:.3e} "
            f"commutation={w.residuals['commutation']:.3e} "
            f"factorization={w.residuals['factorization']:.3e} "
            f"max_residual={check['max_residual']:.3e} {'PASS' if check['pass'] else 'FAIL'}\n")
    _emit(args, payload, text)
    return EXIT_OK if check["pass"] else EXIT_FAIL


def cmd_seqprod(args):
    prod = parse_product(args.product)
    A = fx.load_operator(args.a, "effect")
    B = fx.load_operator(args.b, "effect")
    M = prod(A, B).matrix
    _emit(args, matrix_to_json(M), f"{M}\n")
    return EXIT_OK


def cmd_measure(args):
    W = fx.load_operator(args.state, "density")
    E = fx.load_operator(args.effect)
    post, p = luders_apply(E, W.matrix)
    payload = {"probability": p}
    if p <= STATE_EPS:
        payload["post_state"] = None
        payload["note"] = f"probability <= {STATE_EPS:g}; post-measurement state undefined"
    else:
        payload["post_state"] = matrix_to_json(fx.validate_density(post / p).matrix)
    _emit(args, payload, f"probability={p!r}\n")
    return EXIT_OK


COMMANDS = {
    "verify-properties": cmd_verify_properties,
    "verify-theorem1": cmd_verify_theorem1,
    "witness": cmd_witness,
    "seqprod": cmd_seqprod,
    "measure": cmd_measure,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (SeqProdError, OSError, json.JSONDecodeError) as exc:
        print(f"seqprod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
