#!/usr/bin/env python3
"""
Seeded tabu search for a 2-coloring of K_n with no red K_s and no blue K_t.

Writes the first verified coloring into the witness cache (GALLAI_RAMSEY_CACHE,
default data/witnesses), trying successive seeds until one succeeds.

  python scripts/search_witness.py --n 24 --s 4 --t 5 --seeds 20 --budget 5000000
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.append(str(ROOT))

from src.catalog import WitnessCatalog, search_witness, verify_witness  # noqa: E402
from src.config import cache_dir  # noqa: E402

logger = logging.getLogger("search_witness")


def main() -> None:
    parser = argparse.ArgumentParser(description="Search for a Ramsey witness and cache it")
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--s", type=int, required=True)
    parser.add_argument("--t", type=int, required=True)
    parser.add_argument("--seed", type=int, default=0, help="first seed to try")
    parser.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    parser.add_argument("--budget", type=int, default=1_000_000, help="steps per seed")
    parser.add_argument("--cache", type=Path, default=None, help=f"cache directory (default {cache_dir()})")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args()

    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    catalog = WitnessCatalog(args.cache)

    for seed in range(args.seed, args.seed + args.seeds):
        logger.info("seed %d: searching K%d for (%d,%d)", seed, args.n, args.s, args.t)
        found = search_witness(args.n, args.s, args.t, seed, args.budget)
        if found is None or not verify_witness(found, args.s, args.t):
            continue
        path = catalog.put(found, args.s, args.t)
        print(json.dumps({"found": True, "seed": seed, "path": str(path)}, indent=2, ensure_ascii=False))
        return

    print(json.dumps({"found": False, "seeds": args.seeds, "budget": args.budget}, indent=2, ensure_ascii=False))
    sys.exit(1)


if __name__ == "__main__":
    main()
