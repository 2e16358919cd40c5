"""
Gallai partitions of rainbow-triangle-free colorings.

A module is a vertex set S such that every vertex outside S sees all of S in
one color. The parts of a Gallai partition are pairwise disjoint modules whose
quotient uses at most two colors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from src.cliques import find_rainbow_triangle
from src.coloring import ColoringBuilder, EdgeColoring, iter_bits
from src.config import MIN_Q_LIMIT
from src.errors import CertificateError, ColoringError, PartitionLimitError, PartitionNotFoundError, RainbowTriangleError
from src.substitution import PartitionCertificate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionStats:
    q: int
    p0: int
    p1: int
    p2: int
    V_r: frozenset[int]
    V_b: frozenset[int]
    d_r: tuple[int, ...]
    d_b: tuple[int, ...]

    def identities_hold(self) -> bool:
        return (
            self.p0 + self.p1 + self.p2 == self.q
            and self.p2 == len(self.V_r & self.V_b)
            and self.p1 == len(self.V_r ^ self.V_b)
            and all(r + b == self.q - 1 for r, b in zip(self.d_r, self.d_b))
        )

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "p0": self.p0,
            "p1": self.p1,
            "p2": self.p2,
            "V_r": sorted(self.V_r),
            "V_b": sorted(self.V_b),
            "d_r": list(self.d_r),
            "d_b": list(self.d_b),
        }


def _require_gallai(coloring: EdgeColoring) -> None:
    triangle = find_rainbow_triangle(coloring)
    if triangle is not None:
        raise RainbowTriangleError(triangle)


def _colors_seen(rows: Sequence[Sequence[int]], x: int, S: int) -> int:
    return sum(1 for row in rows if row[x] & S)


def minimal_module(coloring: EdgeColoring, u: int, v: int) -> frozenset[int]:
    """Smallest module containing u and v."""
    if u == v:
        raise ColoringError("minimal_module needs two distinct vertices")
    if not (0 <= u < coloring.n and 0 <= v < coloring.n):
        raise ColoringError(f"vertex out of range for n={coloring.n}: ({u},{v})")
    return frozenset(iter_bits(_closure(coloring, (1 << u) | (1 << v))))


def _closure(coloring: EdgeColoring, S: int, rows=None) -> int:
    rows = rows or [coloring.color_rows(c) for c in range(coloring.k)]
    full = coloring.full_mask
    changed = True
    while changed and S != full:
        changed = False
        for x in iter_bits(full & ~S):
            if _colors_seen(rows, x, S) > 1:
                S |= 1 << x
                changed = True
    return S


def is_module(coloring: EdgeColoring, vertices: int | Sequence[int]) -> bool:
    S = vertices if isinstance(vertices, int) else sum(1 << v for v in set(vertices))
    rows = [coloring.color_rows(c) for c in range(coloring.k)]
    return all(_colors_seen(rows, x, S) <= 1 for x in iter_bits(coloring.full_mask & ~S))


def certificate_from_parts(coloring: EdgeColoring, parts: Sequence[Sequence[int]]) -> PartitionCertificate:
    """Reduced coloring read off one representative edge per pair of parts."""
    parts = tuple(tuple(sorted(part)) for part in parts)
    builder = ColoringBuilder(len(parts), coloring.k)
    for i, j in combinations(range(len(parts)), 2):
        builder.set_color(i, j, coloring.color(parts[i][0], parts[j][0]))
    return PartitionCertificate(parts=parts, reduced=builder.build())


def verify_certificate(coloring: EdgeColoring, certificate: PartitionCertificate) -> bool:
    parts = certificate.parts
    seen = [p for part in parts for p in part]
    if not parts or any(not part for part in parts):
        return False
    if sorted(seen) != list(range(coloring.n)):
        return False
    if coloring.n >= 2 and certificate.q < 2:
        return False
    reduced = certificate.reduced
    if reduced.n != certificate.q or len(reduced.colors_used()) > 2:
        return False
    for i, j in combinations(range(certificate.q), 2):
        c = reduced.color(i, j)
        if not 0 <= c < coloring.k:
            return False
        target = sum(1 << v for v in parts[j])
        row = coloring.color_rows(c)
        if any(row[u] & target != target for u in parts[i]):
            return False
    return True


def _finish(coloring: EdgeColoring, parts: Sequence[Sequence[int]], how: str) -> PartitionCertificate | None:
    certificate = certificate_from_parts(coloring, sorted(parts, key=min))
    if verify_certificate(coloring, certificate):
        logger.debug("partition via %s: q=%d", how, certificate.q)
        return certificate
    logger.debug("partition via %s did not verify", how)
    return None


def _components_without(coloring: EdgeColoring, c: int) -> list[list[int]]:
    """Connected components of the graph of edges not colored c."""
    other = [coloring.color_rows(d) for d in range(coloring.k) if d != c]
    left = coloring.full_mask
    components = []
    while left:
        start = left & -left
        comp = frontier = start
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                for row in other:
                    reach |= row[v]
            frontier = reach & ~comp
            comp |= frontier
        components.append(list(iter_bits(comp)))
        left &= ~comp
    return components


def _maximal_modules(coloring: EdgeColoring) -> list[list[int]]:
    rows = [coloring.color_rows(c) for c in range(coloring.k)]
    full = coloring.full_mask
    covered = 0
    parts = []
    for v in range(coloring.n):
        if covered >> v & 1:
            continue
        union = 1 << v
        for x in range(coloring.n):
            if x == v or (union | covered) >> x & 1:
                continue
            module = _closure(coloring, (1 << v) | (1 << x), rows)
            if module != full:
                union |= module
        covered |= union
        parts.append(list(iter_bits(union)))
    return parts


def find_partition(coloring: EdgeColoring, *, limit: int = MIN_Q_LIMIT) -> PartitionCertificate:
    """
    Some Gallai partition with q >= 2. A color whose complement is disconnected
    gives the components as parts; otherwise the maximal proper modules are used.
    Small inputs fall back to exhaustive search.
    """
    _require_gallai(coloring)
    if coloring.n < 2:
        raise ColoringError("a partition needs at least two vertices")

    for c in sorted(coloring.colors_used()):
        components = _components_without(coloring, c)
        if len(components) > 1:
            found = _finish(coloring, components, f"color {c} complement")
            if found is not None:
                return found

    found = _finish(coloring, _maximal_modules(coloring), "maximal modules")
    if found is not None:
        return found
    if coloring.n <= limit:
        return find_min_q_partition(coloring, limit=limit)
    raise PartitionNotFoundError(f"no Gallai partition found for n={coloring.n}")


def _proper_modules(coloring: EdgeColoring) -> list[list[tuple[tuple[int, ...], int]]]:
    """Proper modules as (vertices, mask), grouped by least vertex and sorted lexicographically."""
    n = coloring.n
    rows = [coloring.color_rows(c) for c in range(coloring.k)]
    full = coloring.full_mask
    by_low: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(n)]
    for S in range(1, full):
        if all(_colors_seen(rows, x, S) <= 1 for x in iter_bits(full & ~S)):
            low = (S & -S).bit_length() - 1
            by_low[low].append((tuple(iter_bits(S)), S))
    for entries in by_low:
        entries.sort()
    return by_low


def find_min_q_partition(coloring: EdgeColoring, *, limit: int = MIN_Q_LIMIT) -> PartitionCertificate:
    """Gallai partition with the fewest parts; ties go to the lexicographically least part list."""
    _require_gallai(coloring)
    n = coloring.n
    if n > limit:
        raise PartitionLimitError(f"exhaustive partition search is limited to n <= {limit}, got {n}")
    if n < 2:
        raise ColoringError("a partition needs at least two vertices")
    by_low = _proper_modules(coloring)
    full = coloring.full_mask

    def search(covered: int, chosen: list[tuple[int, ...]], colors: frozenset[int], q: int) -> list[tuple[int, ...]] | None:
        if covered == full:
            return list(chosen)
        if len(chosen) >= q:
            return None
        low = ((full & ~covered) & -(full & ~covered)).bit_length() - 1
        for verts, mask in by_low[low]:
            if mask & covered:
                continue
            # disjoint modules are joined in a single color
            new = {coloring.color(verts[0], other[0]) for other in chosen}
            merged = colors | new
            if len(merged) > 2:
                continue
            chosen.append(verts)
            found = search(covered | mask, chosen, merged, q)
            chosen.pop()
            if found is not None:
                return found
        return None

    for q in range(2, n + 1):
        parts = search(0, [], frozenset(), q)
        if parts is not None:
            logger.debug("minimum q=%d for n=%d", q, n)
            return certificate_from_parts(coloring, parts)
    raise PartitionNotFoundError(f"no Gallai partition exists for this coloring (n={n})")


def stats(coloring: EdgeColoring, certificate: PartitionCertificate, red: int, blue: int) -> PartitionStats:
    if not verify_certificate(coloring, certificate):
        raise CertificateError("certificate does not describe a Gallai partition of this coloring")
    if red == blue:
        raise CertificateError("red and blue must differ")
    if not certificate.reduced.colors_used() <= {red, blue}:
        raise CertificateError(f"reduced coloring uses {sorted(certificate.reduced.colors_used())}, not {{{red}, {blue}}}")

    def has_inside(part: tuple[int, ...], c: int) -> bool:
        mask = sum(1 << v for v in part)
        row = coloring.color_rows(c)
        return any(row[v] & mask for v in part)

    V_r = frozenset(i for i, part in enumerate(certificate.parts) if has_inside(part, red))
    V_b = frozenset(i for i, part in enumerate(certificate.parts) if has_inside(part, blue))
    q = certificate.q
    p2 = len(V_r & V_b)
    p1 = len(V_r ^ V_b)
    reduced = certificate.reduced
    d_r = tuple(bin(reduced.neighbors(red, i)).count("1") for i in range(q))
    d_b = tuple(bin(reduced.neighbors(blue, i)).count("1") for i in range(q))
    return PartitionStats(q, q - p1 - p2, p1, p2, V_r, V_b, d_r, d_b)
