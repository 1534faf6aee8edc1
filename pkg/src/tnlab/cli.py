"""``tnlab`` command line: run, sweep, curves.

Exit codes: 0 all suites pass, 1 a certification failed, 2 config or usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from . import nonlinearity as nl
from .errors import ConfigError, TNError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _print_summary(result: harness.SweepResult) -> None:
    print(harness.SHIFT_CONVENTION)
    print(result.summary_csv(), end="")


def _cmd_run(args) -> int:
    configs = harness.load_configs(args.config)
    if len(configs) != 1:
        raise ConfigError(args.config, "run expects a single config; use sweep for lists")
    result = harness.sweep(configs, args.out, args.seed, fail_fast=True)
    _print_summary(result)
    return result.exit_code


def _cmd_sweep(args) -> int:
    configs = [c for path in args.configs for c in harness.load_configs(path)]
    result = harness.sweep(configs, args.out, args.seed, fail_fast=args.fail_fast)
    _print_summary(result)
    for row in result.rows:
        if row["error"]:
            print(f"error in {row['name']}: {row['error']}", file=sys.stderr)
    return result.exit_code


def _cmd_curves(args) -> int:
    try:
        lo, hi = (float(v) for v in args.range.split(":"))
    except ValueError:
        raise ConfigError("--range", f"expected lo:hi, got {args.range!r}") from None
    etas = [nl.parse(a) for a in args.activations.split(",")]
    text = harness.curves_csv(etas, lo, hi, args.points)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tnlab", description="Transformation-network invariance certification")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run one experiment config")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="directory for the JSON report")
    r.add_argument("--seed", type=int, default=None)
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("sweep", help="run several configs and print a summary")
    s.add_argument("configs", nargs="+")
    s.add_argument("--out", default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--fail-fast", action="store_true")
    s.set_defaults(func=_cmd_sweep)

    c = sub.add_parser("curves", help="write activation curves as CSV")
    c.add_argument("--activations", default="fracpow:0.1,fracpow:0.5,fracpow:0.9,relu")
    c.add_argument("--range", default="-1.5:1.5")
    c.add_argument("--points", type=int, default=301)
    c.add_argument("--out", default=None)
    c.set_defaults(func=_cmd_curves)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (TNError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
