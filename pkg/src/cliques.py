"""
Rainbow triangles and monochromatic cliques.

The clique search is a bitset branch and bound with a greedy coloring bound.
It runs in number mode (exact maximum) or decision mode (stop once a clique of
a target size is found).
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from src.coloring import EdgeColoring
from src.errors import ColoringError

logger = logging.getLogger(__name__)

THRESHOLDS = (3, 4, 5)


@dataclass(frozen=True)
class Profile:
    """Forbidden clique size per color."""

    thresholds: tuple[int, ...]

    def __post_init__(self):
        for value in self.thresholds:
            if value not in THRESHOLDS:
                raise ColoringError(f"threshold {value} not in {THRESHOLDS}")

    @classmethod
    def from_counts(cls, r: int, s: int, t: int, overrides: dict[int, int] | None = None) -> Profile:
        thresholds = [5] * r + [4] * s + [3] * t
        for color, value in (overrides or {}).items():
            if not 0 <= color < len(thresholds):
                raise ColoringError(f"override for unknown color {color}")
            thresholds[color] = value
        return cls(tuple(thresholds))

    @property
    def k(self) -> int:
        return len(self.thresholds)


@dataclass(frozen=True)
class CliqueWitness:
    color: int
    vertices: tuple[int, ...]

    def check(self, coloring: EdgeColoring) -> bool:
        vs = self.vertices
        return all(coloring.color(vs[a], vs[b]) == self.color for a in range(len(vs)) for b in range(a + 1, len(vs)))

    def to_dict(self) -> dict:
        return {"color": self.color, "size": len(self.vertices), "vertices": list(self.vertices)}


@dataclass
class ProfileReport:
    gallai: bool
    rainbow_triangle: tuple[int, int, int] | None
    violations: list[CliqueWitness] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.gallai and not self.violations

    def to_dict(self) -> dict:
        return {
            "gallai": self.gallai,
            "rainbow_triangle": list(self.rainbow_triangle) if self.rainbow_triangle else None,
            "violations": [w.to_dict() for w in self.violations],
            "passed": self.passed,
        }


def find_rainbow_triangle(coloring: EdgeColoring) -> tuple[int, int, int] | None:
    """Lexicographically least triangle with three distinct colors, or None."""
    n, k = coloring.n, coloring.k
    if k < 3:
        return None
    rows = [coloring.color_rows(c) for c in range(k)]
    for u in range(n):
        for v in range(u + 1, n):
            c_uv = coloring.color(u, v)
            above = ~((1 << (v + 1)) - 1)
            best = None
            for a in range(k):
                if a == c_uv:
                    continue
                mask_a = rows[a][u] & above
                if not mask_a:
                    continue
                for b in range(k):
                    if b == c_uv or b == a:
                        continue
                    hits = mask_a & rows[b][v]
                    if hits:
                        w = (hits & -hits).bit_length() - 1
                        if best is None or w < best:
                            best = w
            if best is not None:
                return (u, v, best)
    return None


def _color_sort(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    order: list[int] = []
    bounds: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            available &= ~low & ~adj[v]
            uncolored &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


class _CliqueSearch:
    def __init__(self, adj: Sequence[int], target: int | None):
        self.adj = adj
        self.target = target
        self.best: list[int] = []

    def done(self) -> bool:
        return self.target is not None and len(self.best) >= self.target

    def expand(self, clique: list[int], cand: int) -> None:
        order, bounds = _color_sort(self.adj, cand)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(self.best) or self.done():
                return
            v = order[i]
            clique.append(v)
            if self.target is not None and len(clique) >= self.target:
                self.best = list(clique)
                clique.pop()
                return
            inner = cand & self.adj[v]
            if inner:
                self.expand(clique, inner)
            elif len(clique) > len(self.best):
                self.best = list(clique)
            clique.pop()
            cand &= ~(1 << v)


def max_clique(adj: Sequence[int], cand: int, target: int | None = None) -> list[int]:
    """
    Largest clique of the graph given by neighbor bitsets, restricted to cand.
    With a target the search stops at the first clique of that size.
    """
    search = _CliqueSearch(adj, target)
    if cand:
        search.expand([], cand)
    return sorted(search.best)


def count_cliques(adj: Sequence[int], cand: int, size: int) -> int:
    if size == 0:
        return 1
    total = 0
    while cand:
        low = cand & -cand
        cand ^= low
        v = low.bit_length() - 1
        if size == 1:
            total += 1
        else:
            total += count_cliques(adj, cand & adj[v], size - 1)
    return total


def _check_color(coloring: EdgeColoring, c: int) -> None:
    if not 0 <= c < coloring.k:
        raise ColoringError(f"color {c} out of range for k={coloring.k}")


def mono_clique_number(coloring: EdgeColoring, c: int) -> int:
    _check_color(coloring, c)
    return len(max_clique(coloring.color_rows(c), coloring.full_mask))


def find_mono_clique(coloring: EdgeColoring, c: int, size: int) -> CliqueWitness | None:
    """Decision mode: some clique of the given size in color c, or None."""
    _check_color(coloring, c)
    if size <= 1:
        return CliqueWitness(c, (0,)[:size])
    found = max_clique(coloring.color_rows(c), coloring.full_mask, target=size)
    if len(found) < size:
        return None
    return CliqueWitness(c, tuple(found[:size]))


def verify_profile(coloring: EdgeColoring, profile: Profile, *, workers: int | None = None) -> ProfileReport:
    if profile.k != coloring.k:
        raise ColoringError(f"profile has {profile.k} colors, coloring has {coloring.k}")
    triangle = find_rainbow_triangle(coloring)

    def search_color(c: int) -> CliqueWitness | None:
        return find_mono_clique(coloring, c, profile.thresholds[c])

    colors = range(coloring.k)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            found = list(pool.map(search_color, colors))
    else:
        found = [search_color(c) for c in colors]
    violations = [w for w in found if w is not None]
    logger.debug("profile check n=%d k=%d: rainbow=%s violations=%d", coloring.n, coloring.k, triangle, len(violations))
    return ProfileReport(gallai=triangle is None, rainbow_triangle=triangle, violations=violations)


def clique_numbers(coloring: EdgeColoring, *, workers: int | None = None) -> list[int]:
    colors = range(coloring.k)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: mono_clique_number(coloring, c), colors))
    return [mono_clique_number(coloring, c) for c in colors]
