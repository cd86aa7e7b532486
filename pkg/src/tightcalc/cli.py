"""Command-line driver.

Exit codes: 0 everything verified, 2 some task bounded or Unknown,
1 an expectation was refuted (or a certificate failed the audit),
3 invalid input.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import report as rep
from ._version import __version__
from .errors import InconsistencyError, InputError, TightCalcError
from . import groebner
from .scenarios import BUILTINS, Bounds, load_scenario, run_builtin

EXIT_OK, EXIT_MISMATCH, EXIT_BOUNDED, EXIT_INPUT = 0, 1, 2, 3


def _bound_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--max-e", type=int, default=3, metavar="E", help="largest Frobenius exponent (default 3)")
    sp.add_argument("--max-q", type=int, default=None, metavar="Q", help="largest q in scans (default p^3)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pool-size", type=int, default=16)
    sp.add_argument("--pair-limit", type=int, default=None, help="Buchberger pair budget per computation")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--out", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tightcalc", description="certified tight closure and phantom depth")
    ap.add_argument("--version", action="version", version=f"tightcalc {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="run a built-in verification")
    v.add_argument("name", choices=BUILTINS)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--p", type=int, default=None)
    _bound_flags(v)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("scenario")
    r.add_argument("--n", type=int, default=None, help=argparse.SUPPRESS)
    r.add_argument("--p", type=int, default=None, help=argparse.SUPPRESS)
    _bound_flags(r)
    c = sub.add_parser("check-report", help="re-verify every certificate in a report")
    c.add_argument("report")
    return ap


def _bounds(args) -> Bounds:
    for flag, val, lo in (("--max-e", args.max_e, 0), ("--max-q", args.max_q, 1), ("--pool-size", args.pool_size, 1)):
        if val is not None and val < lo:
            raise InputError("/flags", f"{flag} must be at least {lo}")
    return Bounds(args.max_e, args.max_q, args.pool_size, args.seed)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    saved = groebner.PAIR_LIMIT
    try:
        if args.cmd == "check-report":
            data = rep.load_report(args.report)
            n, failures = rep.check_report(data)
            for f in failures:
                print(f"REJECTED {f}")
            print(f"checked {n} claims: {'all accepted' if not failures else f'{len(failures)} rejected'}")
            return EXIT_OK if not failures else EXIT_MISMATCH
        if args.pair_limit is not None:
            groebner.set_pair_limit(args.pair_limit)
        b = _bounds(args)
        if args.cmd == "verify":
            report = run_builtin(args.name, args.n, args.p, b)
        else:
            report = load_scenario(args.scenario).run(b, {})
        _emit(rep.render(report, args.format), args.out)
        return report["exit_code"]
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except TightCalcError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        groebner.set_pair_limit(saved)


if __name__ == "__main__":
    sys.exit(main())
