"""Command line: ``czono analyze FILE`` and ``czono bench``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import bench, report
from .affine import CapExceeded
from .analyzer import AnalysisError, AnalyzerConfig, analyze
from .parser import ParseError, parse
from .soundness import check_soundness

EXIT_OK, EXIT_DIAG, EXIT_UNSOUND = 0, 1, 2


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="czono", description="Constrained zonotope analyzer.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one program")
    a.add_argument("file")
    a.add_argument("--json", action="store_true", help="emit the JSON report")
    a.add_argument("--trace", action="store_true", help="also print affine forms and noise boxes")
    a.add_argument("--unroll", type=_positive, default=3, metavar="K",
                   help="loop joins before widening (default 3)")
    a.add_argument("--precision", choices=("float64", "rational"), default="float64")
    a.add_argument("--max-symbols", type=_positive, default=4096)
    a.add_argument("--check", type=_positive, metavar="N",
                   help="run the soundness oracle on N random inputs")
    a.add_argument("--seed", type=int, default=0, metavar="S")

    b = sub.add_parser("bench", help="run the benchmark corpus")
    b.add_argument("--dir", help="directory of .prog files (default: bundled corpus)")
    b.add_argument("--samples", type=_positive, default=10_000)
    b.add_argument("--seed", type=int, default=0)
    return ap


def cmd_analyze(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as e:
        print(f"czono: {e}", file=sys.stderr)
        return EXIT_DIAG
    cfg = AnalyzerConfig(unroll=args.unroll, max_symbols=args.max_symbols,
                         precision=args.precision, seed=args.seed, samples=args.check or 0)
    try:
        program = parse(source, cfg.precision)
        result = analyze(program, cfg)
    except ParseError as e:
        print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_DIAG
    except (AnalysisError, CapExceeded, ZeroDivisionError) as e:
        print(f"{args.file}: analysis failed: {e}", file=sys.stderr)
        return EXIT_DIAG

    if args.json:
        print(report.dumps(report.to_json(result)))
    else:
        print(report.render_text(result, args.trace))
    if args.check:
        rep = check_soundness(program, result, args.check, args.seed)
        # keep stdout pure JSON when --json is given
        print(rep, file=sys.stderr if args.json else sys.stdout)
        if not rep.ok:
            return EXIT_UNSOUND
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        rows = bench.run(args.dir, AnalyzerConfig(seed=args.seed), args.samples)
    except (OSError, ParseError, ValueError, AnalysisError, CapExceeded) as e:
        print(f"czono bench: {e}", file=sys.stderr)
        return EXIT_DIAG
    print(bench.render(rows))
    return EXIT_UNSOUND if any(not r.contains_sampled for r in rows) else EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return {"analyze": cmd_analyze, "bench": cmd_bench}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
