"""Command line front end.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 usage,
configuration, or resource errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import GrasslabError, NotMutuallyDistant
from .grassmann import build_index
from .harness import (
    SuiteConfig,
    ALL_SUITES,
    cache_path,
    run_suite,
    write_index_cache,
)
from .reguli import regulus_through
from .subspace import format_subspaces


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grasslab",
        description="Grassmannian workbench over small prime fields")
    sub = parser.add_subparsers(dest="command", required=True)

    enum = sub.add_parser("enumerate", help="enumerate G(p, n) and optionally cache it")
    enum.add_argument("--p", type=int, required=True)
    enum.add_argument("--n", type=int, required=True)
    enum.add_argument("--cache", type=Path, default=None, metavar="DIR")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True, choices=ALL_SUITES)
    ver.add_argument("--p", type=int, default=None)
    ver.add_argument("--n", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--sample", type=int, default=100,
                     help="sample size for randomized checks")
    ver.add_argument("--chain-sample", type=int, default=10_000,
                     help="group elements for sampled chain orbits")
    ver.add_argument("--out", type=Path, default=None, metavar="FILE")
    ver.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    ver.add_argument("--cache", type=Path, default=None, metavar="DIR")
    ver.add_argument("--timings", action="store_true",
                     help="include elapsed times (report is then not byte-stable)")

    reg = sub.add_parser("regulus", help="print the regulus through three handles")
    reg.add_argument("--through", required=True, metavar="H0,H1,H2")
    reg.add_argument("--p", type=int, required=True)
    reg.add_argument("--n", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "enumerate":
            return _cmd_enumerate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "regulus":
            return _cmd_regulus(args)
    except GrasslabError as exc:
        print(f"grasslab: error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


def _cmd_enumerate(args) -> int:
    index = build_index(args.p, args.n)
    if args.cache is not None:
        args.cache.mkdir(parents=True, exist_ok=True)
        path = cache_path(args.cache, args.p, args.n)
        write_index_cache(index, path)
        print(f"{len(index)} subspaces cached at {path}")
    else:
        sys.stdout.write(format_subspaces(args.p, 2 * args.n, index.elements))
    return 0


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(suite=args.suite, p=args.p, n=args.n, seed=args.seed,
                      sample=args.sample, chain_sample=args.chain_sample,
                      out=args.out, fmt=args.fmt, cache_dir=args.cache,
                      timings=args.timings)
    report = run_suite(cfg)
    rendered = report.to_json(cfg.timings) if cfg.fmt == "json" else report.to_text(cfg.timings)
    if cfg.out is not None:
        cfg.out.write_text(rendered)
    else:
        sys.stdout.write(rendered)
    return 0 if report.ok else 1


def _cmd_regulus(args) -> int:
    try:
        handles = [int(tok) for tok in args.through.split(",")]
    except ValueError:
        print("grasslab: error: --through expects three comma-separated handles",
              file=sys.stderr)
        return 2
    if len(handles) != 3:
        print("grasslab: error: --through expects exactly three handles",
              file=sys.stderr)
        return 2
    index = build_index(args.p, args.n)
    for h in handles:
        if not 0 <= h < len(index):
            print(f"grasslab: error: handle {h} out of range 0..{len(index) - 1}",
                  file=sys.stderr)
            return 2
    try:
        reg = regulus_through(*(index.elements[h] for h in handles))
    except NotMutuallyDistant as exc:
        print(f"grasslab: error: {exc}", file=sys.stderr)
        return 2
    print(f"regulus through {handles[0]},{handles[1]},{handles[2]} in G({args.p},{args.n})")
    print("members:")
    for m in reg.members:
        print(f"  {index.handle_of(m):4d}  " + " ".join(m.basis.to_digits()))
    print("directrices:")
    for line in reg.directrices:
        print("        " + " ".join(line.basis.to_digits()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
