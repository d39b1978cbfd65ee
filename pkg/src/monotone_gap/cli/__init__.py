"""Command-line front end: ``monotone-gap <command> [flags]``."""

from __future__ import annotations

import argparse
import os
import sys

from ..errors import DomainError, InvalidArgument, MonotoneGapError, UnsupportedIntervalPair
from ..interval import parse_interval
from . import commands
from .parser import parse_function, parse_rational, parse_rational_list
from .report import dumps, render_text

SEED_ENV = "MONOTONE_GAP_SEED"

__all__ = ["main", "build_parser", "run", "parse_function"]


def _typed(convert, what):
    def inner(text):
        try:
            return convert(text)
        except InvalidArgument as exc:
            raise argparse.ArgumentTypeError(f"bad {what} {text!r}: {exc}") from None

    inner.__name__ = what
    return inner


_fn = _typed(parse_function, "function")
_interval = _typed(parse_interval, "interval")
_rat = _typed(parse_rational, "rational")
_rats = _typed(parse_rational_list, "node list")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None, help=f"RNG seed; {SEED_ENV} is used when absent")

    p = argparse.ArgumentParser(prog="monotone-gap", description="Gap functions between matrix monotone orders.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common, seeded], help="exact certificate for g_n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--budget", type=int, default=1000, help="search budget for the order-2 check at n = 1")
    c.set_defaults(handler=commands.cmd_certify)

    a = sub.add_parser("alpha", parents=[common, seeded], help="bracket the monotonicity radius of g_n")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--method", choices=("dobsch", "loewner", "both"), default="both")
    a.add_argument("--tol", type=float, default=None, help="default 1e-8 (dobsch) and 1e-4 (loewner)")
    a.add_argument("--budget", type=int, default=10**5)
    a.set_defaults(handler=commands.cmd_alpha)

    f = sub.add_parser("falsify", parents=[common, seeded], help="random matrix-pair search")
    f.add_argument("--fn", type=_fn, required=True)
    f.add_argument("--order", type=int, required=True)
    f.add_argument("--dim", type=int, default=None, help="matrix size, default --order")
    f.add_argument("--interval", type=_interval, default=parse_interval("0,inf"))
    f.add_argument("--trials", type=int, default=10000)
    f.set_defaults(handler=commands.cmd_falsify)

    lw = sub.add_parser("loewner", parents=[common], help="exact Loewner matrix and verdict")
    lw.add_argument("--fn", type=_fn, required=True)
    lw.add_argument("--nodes", type=_rats, required=True)
    lw.add_argument("--interval", type=_interval, default=None)
    lw.set_defaults(handler=commands.cmd_loewner)

    for name, handler, text in (
        ("transport", commands.cmd_transport, "gap function on another interval"),
        ("convex", commands.cmd_convex, "convex gap function on another interval"),
    ):
        t = sub.add_parser(name, parents=[common], help=text)
        t.add_argument("--n", type=int, required=True)
        t.add_argument("--target", type=_interval, required=True)
        t.add_argument("--alpha", type=_rat, default=None, help="rational in (0, alpha_n]; default k/64 below it")
        t.set_defaults(handler=handler)
    return p


def _resolve_seed(args, env) -> None:
    if not hasattr(args, "seed"):
        return
    if args.seed is None:
        raw = env.get(SEED_ENV)
        try:
            args.seed = int(raw) if raw not in (None, "") else 0
        except ValueError:
            raise InvalidArgument(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def run(argv=None, env=None):
    """Parse and execute; returns (output text or None, exit code, error message or None)."""
    env = os.environ if env is None else env
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0), None
    try:
        _resolve_seed(args, env)
        if args.threads < 1:
            raise InvalidArgument("--threads must be at least 1")
        report, code = args.handler(args)
    except UnsupportedIntervalPair as exc:
        return None, commands.EXIT_DOMAIN, str(exc)
    except DomainError as exc:
        return None, commands.EXIT_DOMAIN, str(exc)
    except InvalidArgument as exc:
        return None, commands.EXIT_USAGE, str(exc)
    except MonotoneGapError as exc:
        return None, commands.EXIT_DOMAIN, str(exc)
    text = dumps(report) if args.output == "json" else render_text(report)
    return text, code, None


def main(argv=None) -> int:
    text, code, error = run(argv)
    if text is not None:
        sys.stdout.write(text)
    if error is not None:
        sys.stderr.write(f"monotone-gap: error: {error}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
