"""Command-line front end.

    nequery eval PLAN BITS            overlap of one input (BITS may be @file)
    nequery verify PLAN [--exhaustive | --samples N] [--exact]
    nequery trace PLAN
    nequery search [--tmax T] [--cmax C] [--pmax P] [--lift-cos]
    nequery fixtures

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
errors (bad flags, unparsable plans, wrong input length).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

import numpy as np

from .fixtures import run_fixtures
from .pcalc import plan_p, plan_p_float
from .plan import PlanError, depth, eval_ne_d, parse_plan, render_plan
from .planner import TRACE_HEADER, NoPlanFound, SearchConfig, search, trace, trace_csv
from .simulator import overlap
from .verifier import (
    DEFAULT_SEED,
    DEFAULT_TOL,
    EXHAUSTIVE_MAX_DEPTH,
    exhaustive_inputs,
    structured_inputs,
    verify_exact,
    verify_p_computation,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="PRNG seed for sampled inputs")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="absolute tolerance")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="nequery", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="overlap of a plan on one input")
    p.add_argument("plan")
    p.add_argument("bits", help="0/1 string of length 3^depth, or @FILE")

    p = sub.add_parser("verify", parents=[common], help="check p-computation over an input set")
    p.add_argument("plan")
    p.add_argument("--exhaustive", action="store_true", help=f"all inputs (depth <= {EXHAUSTIVE_MAX_DEPTH})")
    p.add_argument("--samples", type=int, default=1000, help="random inputs on top of the structured ones")
    p.add_argument("--exact", action="store_true", help="check exact decision (plan must 0-compute)")

    p = sub.add_parser("trace", parents=[common], help="per-node t, k, p table")
    p.add_argument("plan")

    p = sub.add_parser("search", parents=[common], help="search lemma compositions")
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--cmax", type=int, default=4)
    p.add_argument("--pmax", type=float, default=0.99999)
    p.add_argument("--lift-cos", action="store_true", help="allow lift to cos(pi/c) before amplify(c)")
    p.add_argument("--beam", type=int, default=None, help="beam width (default: exhaustive)")

    sub.add_parser("fixtures", parents=[common], help="run the worked-example fixtures")
    return parser


def _read_bits(arg: str) -> np.ndarray:
    if arg.startswith("@"):
        try:
            with open(arg[1:]) as fh:
                arg = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {arg[1:]}: {e.strerror}") from None
    text = "".join(arg.split())
    if not text or set(text) - {"0", "1"}:
        raise UsageError("input bits must be a non-empty string of 0 and 1")
    return np.frombuffer(text.encode(), dtype=np.uint8) - ord("0")


def _parse(text: str):
    try:
        return parse_plan(text)
    except PlanError as e:
        raise UsageError(str(e)) from None


def _p_text(plan) -> str:
    try:
        return str(plan_p(plan))
    except TypeError:
        return repr(float(plan_p_float(plan)))


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_eval(args) -> tuple[str, int]:
    plan = _parse(args.plan)
    bits = _read_bits(args.bits)
    d = depth(plan)
    if bits.size != 3**d:
        raise UsageError(f"plan has depth {d} and needs {3**d} bits, got {bits.size}")
    res = overlap(plan, bits)
    ne = eval_ne_d(d, bits.tolist())
    p = _p_text(plan)
    if args.format == "csv":
        return _csv([["overlap_re", "overlap_im", "residual_norm", "ne", "p_predicted"],
                     [repr(res.overlap.real), repr(res.overlap.imag), repr(res.residual_norm), ne, p]]), EXIT_OK
    lines = [
        f"plan={render_plan(plan)}",
        f"overlap_re={res.overlap.real:.12g}",
        f"overlap_im={res.overlap.imag:.12g}",
        f"residual_norm={res.residual_norm:.12g}",
        f"ne={ne}",
        f"p_predicted={p}",
    ]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    plan = _parse(args.plan)
    d = depth(plan)
    if args.exhaustive:
        if d > EXHAUSTIVE_MAX_DEPTH:
            raise UsageError(f"--exhaustive supports depth <= {EXHAUSTIVE_MAX_DEPTH}, plan has depth {d}")
        inputs = exhaustive_inputs(d, allow_deep=True)
    else:
        if args.samples < 0:
            raise UsageError("--samples must be non-negative")
        inputs = structured_inputs(d, seed=args.seed, n_random=args.samples)
    try:
        if args.exact:
            report = verify_exact(plan, inputs, args.tol)
        else:
            report = verify_p_computation(plan, inputs, args.tol)
    except PlanError as e:
        raise UsageError(str(e)) from None
    text = report.to_csv() if args.format == "csv" else report.to_text()
    return text, EXIT_OK if report.passed else EXIT_FAIL


def _trace_text(plan) -> str:
    rows = trace(plan)
    out = [f"{'step':>4}  {'move':<16} {'t':>2} {'k':>6} {'p':>13} {'dim':>6}"]
    for r in rows:
        out.append(f"{r.step:>4}  {r.move:<16} {r.t:>2} {r.k:>6} {r.p_decimal:>13} {r.dim:>6}")
    return "\n".join(out) + "\n"


def cmd_trace(args) -> tuple[str, int]:
    plan = _parse(args.plan)
    return (trace_csv(plan) if args.format == "csv" else _trace_text(plan)), EXIT_OK


def cmd_search(args) -> tuple[str, int]:
    try:
        cfg = SearchConfig(t_max=args.tmax, c_max=args.cmax, p_ceiling=args.pmax,
                           beam_width=args.beam, lift_cos=args.lift_cos)
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        res = search(cfg)
    except NoPlanFound:
        return ("plan=none\n" if args.format == "text" else _csv([TRACE_HEADER])), EXIT_FAIL
    if args.format == "csv":
        return trace_csv(res.plan), EXIT_OK
    head = [
        f"plan={render_plan(res.plan)}",
        f"t={res.t}",
        f"k={res.k}",
        f"exponent={res.exponent:.6g}",
        f"expanded={res.expanded}",
    ]
    return "\n".join(head) + "\n\n" + _trace_text(res.plan), EXIT_OK


def cmd_fixtures(args) -> tuple[str, int]:
    checks = run_fixtures(tol=min(args.tol, 1e-10))
    ok = all(c.passed for c in checks)
    if args.format == "csv":
        text = _csv([["fixture", "pass", "detail"]]
                    + [[c.name, "true" if c.passed else "false", c.detail] for c in checks])
    else:
        text = "".join(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})\n" for c in checks)
    return text, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "trace": cmd_trace,
    "search": cmd_search,
    "fixtures": cmd_fixtures,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"nequery {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
