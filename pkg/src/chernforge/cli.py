"""Command-line driver: ``chernforge run`` and ``chernforge selftest``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .dsl import Options, emit_json, emit_text, execute, parse_program


def _color_enabled() -> bool:
    value = os.environ.get("CHERNFORGE_COLOR", "")
    return value.lower() in ("1", "true", "yes", "on", "always")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        source = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"chernforge: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 2
    program, diags = parse_program(source)
    if program is None:
        if args.json:
            out = emit_json({"results": [], "diagnostics": [d.to_json() for d in diags]})
        else:
            out = "".join(f"{args.file}:{d}\n" for d in diags)
        _write(out, args.out)
        return 1
    options = Options(json=args.json, verify=args.verify, max_degree=args.max_degree)
    report = execute(program, options)
    out = emit_json(report) if args.json else emit_text(report, color=_color_enabled() and not args.out,
                                                         source_name=args.file)
    _write(out, args.out)
    return report.exit_code


def _write(text: str, path: str | None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_selftest(args: argparse.Namespace) -> int:
    from .selftest import run_all

    results = run_all(seed=args.seed)
    color = _color_enabled()
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        if color:
            mark = f"\x1b[{32 if r.passed else 31}m{mark}\x1b[0m"
        print(f"{mark} {r.number}. {r.name} ({r.seconds:.2f}s)")
        for msg in r.failures[:5]:
            print(f"     {msg}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chernforge",
                                     description="Exact Chern-class calculus and lci certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a chernforge program")
    run.add_argument("file")
    run.add_argument("--json", action="store_true", help="emit canonical JSON")
    run.add_argument("--verify", action="store_true",
                     help="verify every certificate in the ring models and with the root oracle")
    run.add_argument("--max-degree", type=int, default=None, metavar="N",
                     help="degree bound for express queries (default: model top degree)")
    run.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    run.set_defaults(func=cmd_run)

    st = sub.add_parser("selftest", help="run the built-in invariant suites")
    st.add_argument("--seed", type=int, default=20240601)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
