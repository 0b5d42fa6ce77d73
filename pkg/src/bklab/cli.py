"""Command line: ``bklab check``, ``bklab fields list``, ``bklab symbol``."""

from __future__ import annotations

import argparse
import json
import sys

from .harness import SUITES, SuiteConfig, emit_report, fields_menu, parse_symbol_sum, resolve_field, run_suite
from .milnor import filtration_report
from .padic import PrecisionError


def _qs(text: str):
    return tuple(int(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bklab", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    chk = sub.add_parser("check", help="run check suites on field descriptors")
    chk.add_argument("--field", action="append", required=True,
                     help="descriptor path or shipped name (repeatable)")
    chk.add_argument("--suite", default="all", choices=SUITES + ("all",))
    chk.add_argument("--q", default="1,2", type=_qs)
    chk.add_argument("--seed", default=0, type=int)
    chk.add_argument("--precision", default=None, type=int)
    chk.add_argument("--window", default=6, type=int)
    chk.add_argument("--samples", default=200, type=int)
    chk.add_argument("--format", default="text", choices=("text", "structured"))

    fl = sub.add_parser("fields", help="shipped field descriptors")
    fl.add_argument("action", choices=("list",))

    sym = sub.add_parser("symbol", help="filtration report of a symbol sum, e.g. '{3, 2}'")
    sym.add_argument("--field", required=True)
    sym.add_argument("--precision", default=None, type=int)
    sym.add_argument("expr")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "fields":
        for row in fields_menu():
            print(f"{row['name']:<12} {row['field']:<14} p={row['p']} e={row['e']} f={row['f']} "
                  f"e'={row['eprime']:<5} zeta_p={'yes' if row['zeta_p'] else 'no':<4} N={row['precision']}")
        return 0
    if args.cmd == "symbol":
        try:
            K = resolve_field(args.field, args.precision)
            S = parse_symbol_sum(args.expr, K)
        except (OSError, ValueError, SyntaxError, PrecisionError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        try:
            rep = filtration_report(S)
        except PrecisionError as exc:
            print(json.dumps({"status": "undecided", "error": str(exc)}, indent=2))
            return 2
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
        return 0
    try:
        cfg = SuiteConfig(fields=args.field, suite=args.suite, qs=args.q, seed=args.seed,
                          precision=args.precision, window=args.window, samples=args.samples)
        for f in cfg.fields:
            resolve_field(f, cfg.precision)
    except (OSError, ValueError, PrecisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_suite(cfg)
    print(emit_report(report, args.format))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
