"""Command line for the experiment harness.

One subcommand per experiment kind; each takes an INI config and writes a
JSON report.  Exit codes are stable so scripts can branch on failure class:

    0  success
    2  invalid configuration, spec, or path input
    3  numerical failure (CFL violation, blowup, window overflow, realization)
    4  requested object is empty or unreachable
"""

import argparse
import sys

from .exceptions import (
    CflViolationError,
    EmptySetError,
    FrontlabError,
    InvalidPathError,
    InvalidSpecError,
    NoParentsError,
    NotInHullError,
    NumericBlowupError,
    RealizationFailedError,
    RequiresAutonomousError,
    UnreachableError,
    WindowOverflowError,
)
from .harness import KINDS, emit_report, load_config, run_experiment

_EXIT_INVALID = 2
_EXIT_NUMERIC = 3
_EXIT_EMPTY = 4

_CODE_BY_TYPE = (
    ((InvalidSpecError, InvalidPathError, RequiresAutonomousError), _EXIT_INVALID),
    ((CflViolationError, NumericBlowupError, WindowOverflowError,
      RealizationFailedError), _EXIT_NUMERIC),
    ((EmptySetError, UnreachableError, NotInHullError, NoParentsError), _EXIT_EMPTY),
)


def _classify(exc: FrontlabError) -> int:
    for types, code in _CODE_BY_TYPE:
        if isinstance(exc, types):
            return code
    return _EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontlab",
        description="Reachable-set and averaging experiments for modulated "
                    "front dynamics.")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a [{kind}] experiment config")
        sp.add_argument("--config", required=True, help="INI config file")
        sp.add_argument("--out", default=None,
                        help="report directory or explicit .json path")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the environment seed")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, kind=args.kind, seed_override=args.seed)
        report = run_experiment(cfg)
        path = emit_report(report, cfg, out=args.out)
    except FrontlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _classify(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INVALID
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
