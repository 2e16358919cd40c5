#!/usr/bin/env python3
"""
Command-line entry point for the Gallai-Ramsey toolkit.

  python main.py witness 0 1 2 --ramsey-R 42 --out g012.gec
  python main.py verify g012.gec 0 1 2
  python main.py tables --ramsey-R 43 --json
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from src.config import RAMSEY_R_RANGE
from src.report import (
    EXIT_CODES,
    cmd_catalog_get,
    cmd_catalog_search,
    cmd_gr_exhaustive,
    cmd_k169,
    cmd_lemmas,
    cmd_partition,
    cmd_tables,
    cmd_verify,
    cmd_witness,
)
from src.weights import LEMMA_BOUNDS


def _add_counts(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("r", type=int, help="colors forbidding K5")
    parser.add_argument("s", type=int, help="colors forbidding K4")
    parser.add_argument("t", type=int, help="colors forbidding K3")


def _add_ramsey_R(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ramsey-R", dest="R", type=int, required=True, choices=list(RAMSEY_R_RANGE), help="R = R(5,5) - 1, the order of the (5,5) witness")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Gallai-Ramsey numbers for triangles versus K5, K4 and K3")
    parser.add_argument("--json", action="store_true", help="print the full report as JSON")
    parser.add_argument("--threads", type=int, default=None, help="worker threads for clique checks")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    witness = sub.add_parser("witness", help="build a lower-bound coloring of order g-1")
    _add_counts(witness)
    _add_ramsey_R(witness)
    witness.add_argument("--out", type=Path)

    verify = sub.add_parser("verify", help="check a .gec coloring against a clique profile")
    verify.add_argument("file", type=Path)
    _add_counts(verify)

    partition = sub.add_parser("partition", help="find a Gallai partition of a .gec coloring")
    partition.add_argument("file", type=Path)
    partition.add_argument("--min-q", action="store_true", help="exhaustive search for the fewest parts")
    partition.add_argument("--out", type=Path, help="write the coloring with each part as a consecutive vertex block")

    tables = sub.add_parser("tables", help="recompute every ratio cell and threshold check")
    _add_ramsey_R(tables)
    tables.add_argument("--max", dest="max_coord", type=int, default=6)

    lemmas = sub.add_parser("lemmas", help="check the weight lemmas by enumeration")
    lemmas.add_argument("ids", nargs="*", metavar="ID", help=f"lemma ids, any of {', '.join(LEMMA_BOUNDS)}")

    catalog = sub.add_parser("catalog", help="Ramsey witness catalog")
    catalog_sub = catalog.add_subparsers(dest="action", required=True)
    get = catalog_sub.add_parser("get")
    get.add_argument("s", type=int)
    get.add_argument("t", type=int)
    get.add_argument("--n", type=int)
    get.add_argument("--out", type=Path)
    search = catalog_sub.add_parser("search")
    search.add_argument("n", type=int)
    search.add_argument("s", type=int)
    search.add_argument("t", type=int)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--budget", type=int, default=1_000_000)
    search.add_argument("--no-store", dest="store", action="store_false")

    k169 = sub.add_parser("k169", help="build and check the 3-coloring of K169")
    k169.add_argument("--out", type=Path)

    exhaustive = sub.add_parser("gr-exhaustive", help="exhaustive search for small gr_k(K3 : K3)")
    exhaustive.add_argument("k", type=int)
    exhaustive.add_argument("n", type=int)
    return parser


def run(args: argparse.Namespace) -> dict:
    if args.command == "witness":
        return cmd_witness(args.r, args.s, args.t, args.R, args.out, workers=args.threads)
    if args.command == "verify":
        return cmd_verify(args.file, args.r, args.s, args.t, workers=args.threads)
    if args.command == "partition":
        return cmd_partition(args.file, min_q=args.min_q, out=args.out)
    if args.command == "tables":
        return cmd_tables(args.R, args.max_coord)
    if args.command == "lemmas":
        return cmd_lemmas(args.ids or None)
    if args.command == "catalog" and args.action == "get":
        return cmd_catalog_get(args.s, args.t, args.n, args.out)
    if args.command == "catalog":
        return cmd_catalog_search(args.n, args.s, args.t, args.seed, args.budget, store=args.store)
    if args.command == "k169":
        return cmd_k169(args.out, workers=args.threads)
    return cmd_gr_exhaustive(args.k, args.n)


def summary(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']} ({report['wall_time']}s)"]
    if report["error"]:
        lines.append(f"  {report['error']['type']}: {report['error']['message']}")
    for key, value in report["result"].items():
        if isinstance(value, (bool, int, str)) or value is None:
            lines.append(f"  {key}: {value}")
    for path in report["witnesses"]:
        lines.append(f"  wrote {path}")
    return "\n".join(lines)


def main() -> None:
    args = build_parser().parse_args()
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    report = run(args)
    if args.json:
        print(json.dumps(report, indent=2, ensure_ascii=False))
    else:
        print(summary(report))
    sys.exit(EXIT_CODES[report["status"]])


if __name__ == "__main__":
    main()
