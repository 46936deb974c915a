"""Command-line interface: ``charvar {sample,retract,balance,traces,verify}``.

Exit statuses: 0 success (or Converged), 1 usage/parse error,
2 BoundaryDegeneration, 3 MaxIterations, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .characters import parse_word, trace_coordinates
from .errors import CharvarError
from .fileio import dumps, dumps_representation, read_representation, representation_to_dict
from .groups import MEMBERSHIP_TOL, parse_descriptor, sample_tuple
from .kempfness import FlowOptions, Verdict, balance_flow, orbit_norm
from .retraction import retract_tuple
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUNDARY = 2
EXIT_MAX_ITERATIONS = 3
EXIT_VERIFY_FAILED = 4

VERDICT_STATUS = {
    Verdict.CONVERGED: EXIT_OK,
    Verdict.BOUNDARY_DEGENERATION: EXIT_BOUNDARY,
    Verdict.MAX_ITERATIONS: EXIT_MAX_ITERATIONS,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _report(command: str, options: dict, seed, payload: dict) -> str:
    return dumps(
        {
            "command": command,
            "seed": seed,
            "options": options,
            "payload": payload,
            "version": __version__,
        }
    )


def cmd_sample(args) -> int:
    desc = parse_descriptor(args.group)
    if args.rank < 1:
        raise UsageError("rank must be at least 1")
    if args.spread < 0:
        raise UsageError("spread must be non-negative")
    rho = sample_tuple(desc, args.rank, args.spread, args.seed)
    _emit(dumps_representation(rho), args.output)
    return EXIT_OK


def cmd_retract(args) -> int:
    rho = read_representation(args.input, args.tol)
    _emit(dumps_representation(retract_tuple(rho, args.t)), args.output)
    return EXIT_OK


def cmd_balance(args) -> int:
    rho = read_representation(args.input, args.tol)
    opts = FlowOptions(residual_tol=args.residual_tol, max_iterations=args.max_iters)
    report = balance_flow(rho, opts)
    payload = {
        "verdict": str(report.verdict),
        "iterations": report.iterations,
        "conjugator_condition": report.conjugator_condition,
        "final_orbit_norm": orbit_norm(report.final),
        "norm_trajectory": list(report.norm_trajectory),
        "residual_trajectory": list(report.residual_trajectory),
        "final": representation_to_dict(report.final),
    }
    options = {
        "input": str(args.input),
        "tol": args.tol,
        "residual_tol": args.residual_tol,
        "max_iters": args.max_iters,
    }
    text = _report("balance", options, args.seed, payload)
    if args.report:
        Path(args.report).write_text(text)
    if args.output:
        Path(args.output).write_text(dumps_representation(report.final))
    print(
        f"verdict {report.verdict}  iterations {report.iterations}  "
        f"orbit_norm {payload['final_orbit_norm']:.12g}  "
        f"conjugator_condition {report.conjugator_condition:.3e}"
    )
    return VERDICT_STATUS[report.verdict]


def cmd_traces(args) -> int:
    rho = read_representation(args.input, args.tol)
    words = [parse_word(w, rho.rank) for token in args.words for w in token.split()]
    if not words:
        raise UsageError("no words given")
    tv = trace_coordinates(rho, words)
    lines = ["word\tre\tim"]
    lines += [f"{w}\t{re:.17g}\t{im:.17g}" for w, re, im in tv.as_rows()]
    text = "\n".join(lines) + "\n"
    if args.report:
        rows = [{"word": w, "re": re, "im": im} for w, re, im in tv.as_rows()]
        Path(args.report).write_text(
            _report("traces", {"input": str(args.input), "tol": args.tol}, args.seed, {"traces": rows})
        )
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    results = run_suite(args.suite, args.samples, args.seed)
    for result in results:
        print(result.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} properties passed")
    if args.report:
        payload = {
            "results": [
                {"name": r.name, "passed": r.passed, "worst": r.worst, "bound": r.bound, "detail": r.detail}
                for r in results
            ]
        }
        Path(args.report).write_text(
            _report("verify", {"suite": args.suite, "samples": args.samples}, args.seed, payload)
        )
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=MEMBERSHIP_TOL, help="membership tolerance for loaded tuples")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", "-o", help="write the main result here instead of stdout")
    common.add_argument("--report", help="write a JSON report file")

    parser = _Parser(prog="charvar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"charvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common], help="sample a random representation tuple")
    p.add_argument("group", help='descriptor such as "SL2R" or "GL3C"')
    p.add_argument("rank", type=int)
    p.add_argument("--spread", type=float, default=1.0, help="bound on ||X||_F in k exp(X); 0 samples K")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("retract", parents=[common], help="apply the retraction f_t to a tuple file")
    p.add_argument("input")
    p.add_argument("t", type=float)
    p.set_defaults(func=cmd_retract)

    p = sub.add_parser("balance", parents=[common], help="run the Kempf-Ness balancing flow")
    p.add_argument("input")
    p.add_argument("--residual-tol", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("traces", parents=[common], help="print trace coordinates of words")
    p.add_argument("input")
    p.add_argument("words", nargs="+", help="words like a b ab a'b")
    p.set_defaults(func=cmd_traces)

    p = sub.add_parser("verify", parents=[common], help="run the randomized property suites")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"charvar: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CharvarError, OSError) as exc:
        print(f"charvar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
