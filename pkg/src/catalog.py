"""
Verified 2-colored Ramsey witnesses.

Color 0 is red (no red K_s) and color 1 is blue (no blue K_t). Small witnesses
are circulants; the (4,5) and (5,5) witnesses only come from the on-disk cache,
which is filled by search_witness or by hand.
"""

from __future__ import annotations

import logging
import os
import random
import tempfile
import threading
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable

import networkx as nx

from src.cliques import count_cliques, max_clique
from src.coloring import EdgeColoring, from_networkx, from_red_rows, read_gec, recolor, restrict, write_gec
from src.config import RESTART_AFTER, TABU_TENURE, cache_dir
from src.errors import ColoringError, InvalidWitness, UnsupportedPairError, WitnessUnavailable

logger = logging.getLogger(__name__)

RAMSEY_NUMBERS = {
    (3, 3): 6,
    (3, 4): 9,
    (3, 5): 14,
    (4, 4): 18,
    (4, 5): 25,
}
# 43 <= R(5,5) <= 48; the working order of a (5,5) witness is a parameter.
DEFAULT_R55 = 42

BUILTIN_CIRCULANTS = {
    (3, 3): (5, (1, 4)),
    (3, 4): (8, (1, 4, 7)),
    (3, 5): (13, (1, 5, 8, 12)),
    (4, 4): (17, (1, 2, 4, 8, 9, 13, 15, 16)),
}

SUPPORTED_PAIRS = {(3, 3), (3, 4), (4, 4), (3, 5), (4, 5), (5, 5)}


@dataclass(frozen=True)
class WitnessSpec:
    s: int
    t: int
    n: int
    source: str  # builtin-circulant, file or search

    def to_dict(self) -> dict:
        return {"s": self.s, "t": self.t, "n": self.n, "source": self.source}


def circulant(n: int, connection: Iterable[int]) -> EdgeColoring:
    """Red iff (u - v) mod n lies in the connection set."""
    diffs = set(connection)
    if n < 1:
        raise ColoringError("circulant needs n >= 1")
    if any(not 1 <= d <= n - 1 for d in diffs):
        raise ColoringError(f"connection set must lie in [1, {n - 1}]")
    if any((n - d) % n not in diffs for d in diffs):
        raise ColoringError(f"connection set {sorted(diffs)} is not closed under negation mod {n}")
    graph = nx.circulant_graph(n, sorted(d for d in diffs if d <= n // 2))
    return from_networkx(graph)


def swap_colors(coloring: EdgeColoring) -> EdgeColoring:
    return recolor(coloring, {0: 1, 1: 0}, 2)


def verify_witness(coloring: EdgeColoring, s: int, t: int) -> bool:
    if coloring.k != 2:
        raise ColoringError(f"witness check needs a 2-coloring, got k={coloring.k}")
    full = coloring.full_mask
    if len(max_clique(coloring.color_rows(0), full, target=s)) >= s:
        return False
    return len(max_clique(coloring.color_rows(1), full, target=t)) < t


def _require_valid(coloring: EdgeColoring, s: int, t: int, origin: str) -> EdgeColoring:
    if not verify_witness(coloring, s, t):
        raise InvalidWitness(f"{origin} is not a ({s},{t}) witness")
    return coloring


def _builtin(s: int, t: int) -> EdgeColoring | None:
    if (s, t) in BUILTIN_CIRCULANTS:
        n, conn = BUILTIN_CIRCULANTS[(s, t)]
        return _require_valid(circulant(n, conn), s, t, f"circulant({n},{list(conn)})")
    if (t, s) in BUILTIN_CIRCULANTS:
        n, conn = BUILTIN_CIRCULANTS[(t, s)]
        return _require_valid(swap_colors(circulant(n, conn)), s, t, f"swapped circulant({n},{list(conn)})")
    return None


def default_order(s: int, t: int) -> int:
    key = (min(s, t), max(s, t))
    if key == (5, 5):
        return DEFAULT_R55
    return RAMSEY_NUMBERS[key] - 1


# one write lock per cache directory, shared by every catalog opened on it
_WRITE_LOCKS: dict[Path, threading.Lock] = {}
_WRITE_LOCKS_GUARD = threading.Lock()


def _directory_lock(directory: Path) -> threading.Lock:
    key = directory.resolve()
    with _WRITE_LOCKS_GUARD:
        return _WRITE_LOCKS.setdefault(key, threading.Lock())


class WitnessCatalog:
    """On-disk cache of `.gec` witnesses; reads are lock-free, writes take the directory's lock."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory is not None else cache_dir()
        self._write_lock = _directory_lock(self.directory)

    def path(self, s: int, t: int, n: int) -> Path:
        return self.directory / f"witness_{s}_{t}_{n}.gec"

    def _load(self, s: int, t: int, n: int) -> EdgeColoring | None:
        direct = self.path(s, t, n)
        if direct.exists():
            return _require_valid(read_gec(direct), s, t, str(direct))
        mirrored = self.path(t, s, n)
        if mirrored.exists():
            return _require_valid(swap_colors(read_gec(mirrored)), s, t, str(mirrored))
        return None

    def cached_orders(self, s: int, t: int) -> list[int]:
        if not self.directory.is_dir():
            return []
        orders = set()
        for a, b in ((s, t), (t, s)):
            prefix = f"witness_{a}_{b}_"
            for entry in self.directory.glob(f"{prefix}*.gec"):
                tail = entry.stem[len(prefix):]
                if tail.isdigit():
                    orders.add(int(tail))
        return sorted(orders)

    def get(self, s: int, t: int, n: int) -> EdgeColoring:
        found = self._load(s, t, n)
        if found is not None:
            return found
        # a larger witness restricts to any smaller order
        for bigger in self.cached_orders(s, t):
            if bigger > n:
                larger = self._load(s, t, bigger)
                logger.info("restricting cached (%d,%d) witness of order %d to %d", s, t, bigger, n)
                return restrict(larger, range(n))
        raise WitnessUnavailable(s, t, n)

    def put(self, coloring: EdgeColoring, s: int, t: int) -> Path:
        _require_valid(coloring, s, t, "candidate")
        target = self.path(s, t, coloring.n)
        with self._write_lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            handle, tmp = tempfile.mkstemp(prefix=".witness_", suffix=".gec", dir=self.directory)
            os.close(handle)
            write_gec(coloring, tmp)
            os.replace(tmp, target)
        logger.info("cached (%d,%d) witness of order %d at %s", s, t, coloring.n, target)
        return target


def known_witness(s: int, t: int, n: int | None = None, *, catalog: WitnessCatalog | None = None) -> EdgeColoring:
    if (min(s, t), max(s, t)) not in SUPPORTED_PAIRS:
        raise UnsupportedPairError(f"no catalog entry for the pair ({s},{t})")
    order = n if n is not None else default_order(s, t)
    builtin = _builtin(s, t)
    if builtin is not None:
        if order > builtin.n:
            raise WitnessUnavailable(s, t, order, f"({s},{t}) witnesses have at most {builtin.n} vertices")
        return builtin if order == builtin.n else restrict(builtin, range(order))
    return (catalog or WitnessCatalog()).get(s, t, order)


def witness_spec(s: int, t: int, n: int | None = None, *, catalog: WitnessCatalog | None = None) -> WitnessSpec:
    order = n if n is not None else default_order(s, t)
    source = "builtin-circulant" if _builtin(s, t) is not None else "file"
    known_witness(s, t, order, catalog=catalog)
    return WitnessSpec(s, t, order, source)


def count_violations(coloring: EdgeColoring, s: int, t: int) -> int:
    full = coloring.full_mask
    return count_cliques(coloring.color_rows(0), full, s) + count_cliques(coloring.color_rows(1), full, t)


class LocalSearchState:
    """Red/blue neighbor bitsets with an incrementally maintained violation count."""

    def __init__(self, red: list[int], s: int, t: int):
        self.n = len(red)
        self.s = s
        self.t = t
        self.full = (1 << self.n) - 1
        self.red = list(red)
        self.blue = [self.full & ~red[v] & ~(1 << v) for v in range(self.n)]
        self.violations = count_cliques(self.red, self.full, s) + count_cliques(self.blue, self.full, t)

    @classmethod
    def random(cls, n: int, s: int, t: int, rng: random.Random) -> LocalSearchState:
        red = [0] * n
        for u, v in combinations(range(n), 2):
            if rng.random() < 0.5:
                red[u] |= 1 << v
                red[v] |= 1 << u
        return cls(red, s, t)

    @classmethod
    def from_coloring(cls, coloring: EdgeColoring, s: int, t: int) -> LocalSearchState:
        return cls(list(coloring.color_rows(0)), s, t)

    def is_red(self, u: int, v: int) -> bool:
        return bool(self.red[u] >> v & 1)

    def delta(self, u: int, v: int) -> int:
        """Change of the violation count if edge uv switches color."""
        if self.is_red(u, v):
            lost = count_cliques(self.red, self.red[u] & self.red[v], self.s - 2)
            gained = count_cliques(self.blue, self.blue[u] & self.blue[v], self.t - 2)
        else:
            lost = count_cliques(self.blue, self.blue[u] & self.blue[v], self.t - 2)
            gained = count_cliques(self.red, self.red[u] & self.red[v], self.s - 2)
        return gained - lost

    def flip(self, u: int, v: int) -> int:
        change = self.delta(u, v)
        bu, bv = 1 << u, 1 << v
        if self.is_red(u, v):
            src, dst = self.red, self.blue
        else:
            src, dst = self.blue, self.red
        src[u] &= ~bv
        src[v] &= ~bu
        dst[u] |= bv
        dst[v] |= bu
        self.violations += change
        return change

    def violating_clique(self, rng: random.Random) -> list[int]:
        """Some red K_s or blue K_t, searched from a random start vertex."""
        start = rng.randrange(self.n)
        order = list(range(start, self.n)) + list(range(start))
        for v in order:
            for adj, size in ((self.red, self.s), (self.blue, self.t)):
                found = max_clique(adj, adj[v], target=size - 1)
                if len(found) >= size - 1:
                    return [v] + found
        return []

    def to_coloring(self) -> EdgeColoring:
        return from_red_rows(self.red)


def search_witness(
    n: int,
    s: int,
    t: int,
    seed: int,
    budget: int,
    *,
    tenure: int = TABU_TENURE,
    restart_after: int = RESTART_AFTER,
) -> EdgeColoring | None:
    """
    Tabu search over single-edge recolorings minimizing the number of red K_s
    plus blue K_t. Deterministic for a fixed seed; None when the budget runs out.
    """
    if n < 2:
        raise ColoringError("search needs n >= 2")
    rng = random.Random(seed)
    state = LocalSearchState.random(n, s, t, rng)
    best_seen = state.violations
    tabu: dict[tuple[int, int], int] = {}
    stagnant = 0

    for step in range(budget):
        if state.violations == 0:
            break
        clique = state.violating_clique(rng)
        moves = []
        for u, v in combinations(sorted(clique), 2):
            change = state.delta(u, v)
            allowed = tabu.get((u, v), -1) < step or state.violations + change < best_seen
            if allowed:
                moves.append((change, u, v))
        if not moves:
            stagnant += 1
            continue
        low = min(m[0] for m in moves)
        _, u, v = rng.choice([m for m in moves if m[0] == low])
        state.flip(u, v)
        tabu[(u, v)] = step + tenure
        if state.violations < best_seen:
            best_seen = state.violations
            stagnant = 0
        else:
            stagnant += 1
        if stagnant >= restart_after:
            logger.debug("restart at step %d (best %d)", step, best_seen)
            state = LocalSearchState.random(n, s, t, rng)
            best_seen = state.violations
            tabu.clear()
            stagnant = 0
        if step and step % 10_000 == 0:
            logger.info("search (%d,%d,%d) step %d: violations=%d best=%d", n, s, t, step, state.violations, best_seen)

    if state.violations != 0:
        return None
    found = state.to_coloring()
    return _require_valid(found, s, t, "search result")
