"""Command line front end.

Exit codes: 0 success, 2 commuting hypothesis failed, 64 usage error,
65 invalid problem file.
"""

from __future__ import annotations

import argparse
import sys

from .exceptions import ModfixError, SchemaError, UnsupportedSymmetryError
from .pipeline import COMMANDS, dumps_report, format_text, run_pipeline
from .problem import DEFAULT_TOLERANCES, parse_problem

EXIT_OK = 0
EXIT_HYPOTHESIS = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or name not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected name=value with name in {', '.join(sorted(DEFAULT_TOLERANCES))}"
        )
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modfix", description="Find symmetric points of a moduli problem.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    helps = {
        "check": "check that the two actions commute",
        "homs": "list candidate homomorphisms",
        "solve": "solve for symmetric subspaces",
        "verify": "solve and verify every basis vector",
        "stabilizer": "solve and compute stabilizer subalgebras",
        "all": "run every stage",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("problem", help="problem file (YAML)")
        p.add_argument("--seed", type=int, default=None, help="override the problem seed")
        p.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE",
                       help="override a named tolerance (repeatable)")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default="json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_problem(args.problem, seed=args.seed, tolerances=dict(args.tol))
    except (SchemaError, UnsupportedSymmetryError) as exc:
        print(f"modfix: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    try:
        report = run_pipeline(spec, args.command)
    except ModfixError as exc:
        print(f"modfix: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    text = dumps_report(report) if args.format == "json" else format_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report["summary"]["verdict"] == "aborted":
        c = report["commuting"]
        print(
            f"modfix: actions do not commute (group residual {c['group_residual']:.3e}, "
            f"algebra residual {c['algebra_residual']:.3e})",
            file=sys.stderr,
        )
        return EXIT_HYPOTHESIS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
