"""
Edge colorings of complete graphs.

An EdgeColoring stores, for every color c and vertex v, the bitset N_c(v) of
vertices joined to v by an edge of color c. Colorings are immutable; mutation
goes through ColoringBuilder or the copy-returning helpers below.
"""

from __future__ import annotations

import logging
import re
from itertools import permutations
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx

from src.config import CANONICAL_KEY_LIMIT, VERTEX_CAP
from src.errors import ColoringError, GecParseError

logger = logging.getLogger(__name__)

GEC_MAGIC = "GEC 1"
# ASCII decimal, no sign and no leading zeros
NUMBER_RE = re.compile(r"0|[1-9][0-9]*")


def _mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class EdgeColoring:
    __slots__ = ("n", "k", "_rows")

    def __init__(self, n: int, k: int, rows: Sequence[Sequence[int]]):
        # rows[c][v] is N_c(v); callers outside this module use the builder.
        self.n = n
        self.k = k
        self._rows = tuple(tuple(row) for row in rows)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def color(self, u: int, v: int) -> int:
        self._check_pair(u, v)
        bit = 1 << v
        for c, row in enumerate(self._rows):
            if row[u] & bit:
                return c
        raise ColoringError(f"edge ({u},{v}) carries no color")

    def neighbors(self, c: int, v: int) -> int:
        return self._rows[c][v]

    def color_rows(self, c: int) -> tuple[int, ...]:
        return self._rows[c]

    def matrix(self) -> list[list[int]]:
        """Dense n x n color matrix with -1 on the diagonal."""
        out = [[-1] * self.n for _ in range(self.n)]
        for c, row in enumerate(self._rows):
            for u in range(self.n):
                for v in iter_bits(row[u]):
                    out[u][v] = c
        return out

    def edges(self, c: int):
        for u in range(self.n):
            for v in iter_bits(self._rows[c][u] >> (u + 1)):
                yield (u, u + 1 + v)

    def color_class_sizes(self) -> list[int]:
        return [sum(bin(mask).count("1") for mask in row) // 2 for row in self._rows]

    def colors_used(self) -> set[int]:
        return {c for c, row in enumerate(self._rows) if any(row)}

    def check_invariants(self) -> bool:
        full = self.full_mask
        for v in range(self.n):
            seen = 0
            for row in self._rows:
                if row[v] & seen or row[v] >> v & 1:
                    return False
                seen |= row[v]
            if seen != full & ~(1 << v):
                return False
        for row in self._rows:
            for u in range(self.n):
                for v in iter_bits(row[u]):
                    if not row[v] >> u & 1:
                        return False
        return sum(self.color_class_sizes()) == self.n * (self.n - 1) // 2

    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise ColoringError(f"loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ColoringError(f"vertex out of range for n={self.n}: ({u},{v})")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self.n == other.n and self.k == other.k and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.n, self.k, self._rows))

    def __repr__(self) -> str:
        return f"EdgeColoring(n={self.n}, k={self.k}, sizes={self.color_class_sizes()})"


class ColoringBuilder:
    """Single-owner mutable staging area for an EdgeColoring."""

    def __init__(self, n: int, k: int, fill: int = 0, *, cap: int = VERTEX_CAP):
        if n < 1 or k < 1:
            raise ColoringError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
        if not 0 <= fill < k:
            raise ColoringError(f"fill color {fill} out of range for k={k}")
        if n > cap:
            raise ColoringError(f"n={n} exceeds the vertex cap {cap}")
        self.n = n
        self.k = k
        full = (1 << n) - 1
        self._rows = [[0] * n for _ in range(k)]
        self._rows[fill] = [full & ~(1 << v) for v in range(n)]

    @classmethod
    def from_coloring(cls, coloring: EdgeColoring) -> ColoringBuilder:
        builder = cls.__new__(cls)
        builder.n = coloring.n
        builder.k = coloring.k
        builder._rows = [list(coloring.color_rows(c)) for c in range(coloring.k)]
        return builder

    def set_color(self, u: int, v: int, c: int) -> ColoringBuilder:
        if u == v:
            raise ColoringError(f"loop at vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ColoringError(f"vertex out of range for n={self.n}: ({u},{v})")
        if not 0 <= c < self.k:
            raise ColoringError(f"color {c} out of range for k={self.k}")
        bu, bv = 1 << u, 1 << v
        for row in self._rows:
            row[u] &= ~bv
            row[v] &= ~bu
        self._rows[c][u] |= bv
        self._rows[c][v] |= bu
        return self

    def join(self, mask_a: int, mask_b: int, c: int) -> ColoringBuilder:
        """Color every edge between two disjoint vertex sets with c."""
        if mask_a & mask_b:
            raise ColoringError("join expects disjoint vertex sets")
        if not 0 <= c < self.k:
            raise ColoringError(f"color {c} out of range for k={self.k}")
        for source, target in ((mask_a, mask_b), (mask_b, mask_a)):
            for v in iter_bits(source):
                for row in self._rows:
                    row[v] &= ~target
                self._rows[c][v] |= target
        return self

    def build(self) -> EdgeColoring:
        return EdgeColoring(self.n, self.k, self._rows)


def new_complete(n: int, k: int, fill: int = 0) -> EdgeColoring:
    return ColoringBuilder(n, k, fill).build()


def set_color(coloring: EdgeColoring, u: int, v: int, c: int) -> EdgeColoring:
    return ColoringBuilder.from_coloring(coloring).set_color(u, v, c).build()


def _vertex_list(coloring: EdgeColoring, vertices: int | Iterable[int]) -> list[int]:
    if isinstance(vertices, int):
        if vertices >> coloring.n:
            raise ColoringError("vertex set exceeds the coloring")
        return list(iter_bits(vertices))
    chosen = sorted(set(vertices))
    if chosen and not (0 <= chosen[0] and chosen[-1] < coloring.n):
        raise ColoringError(f"vertex out of range for n={coloring.n}")
    return chosen


def restrict(coloring: EdgeColoring, vertices: int | Iterable[int]) -> EdgeColoring:
    """Induced coloring on a vertex set, relabeled in ascending order."""
    chosen = _vertex_list(coloring, vertices)
    if not chosen:
        raise ColoringError("cannot restrict to an empty vertex set")
    rows = []
    for c in range(coloring.k):
        source = coloring.color_rows(c)
        rows.append([
            sum(1 << j for j, w in enumerate(chosen) if source[v] >> w & 1)
            for v in chosen
        ])
    return EdgeColoring(len(chosen), coloring.k, rows)


def relabel(coloring: EdgeColoring, perm: Sequence[int]) -> EdgeColoring:
    """Move vertex v to position perm[v]."""
    n = coloring.n
    if sorted(perm) != list(range(n)):
        raise ColoringError("relabel expects a permutation of the vertices")
    rows = []
    for c in range(coloring.k):
        source = coloring.color_rows(c)
        row = [0] * n
        for v in range(n):
            row[perm[v]] = sum(1 << perm[w] for w in iter_bits(source[v]))
        rows.append(row)
    return EdgeColoring(n, coloring.k, rows)


def recolor(coloring: EdgeColoring, mapping: dict[int, int] | Sequence[int], k: int | None = None) -> EdgeColoring:
    """Rename colors; several old colors may merge into one."""
    if not isinstance(mapping, dict):
        mapping = dict(enumerate(mapping))
    new_k = k if k is not None else max(mapping.values()) + 1
    rows = [[0] * coloring.n for _ in range(new_k)]
    for c in range(coloring.k):
        if c not in mapping:
            if any(coloring.color_rows(c)):
                raise ColoringError(f"color {c} is used but not mapped")
            continue
        target = mapping[c]
        if not 0 <= target < new_k:
            raise ColoringError(f"color {target} out of range for k={new_k}")
        for v, mask in enumerate(coloring.color_rows(c)):
            rows[target][v] |= mask
    return EdgeColoring(coloring.n, new_k, rows)


def from_rows(n: int, k: int, rows: Sequence[Sequence[int]], *, validate: bool = True) -> EdgeColoring:
    coloring = EdgeColoring(n, k, rows)
    if validate and not coloring.check_invariants():
        raise ColoringError("color rows do not describe a complete coloring")
    return coloring


def from_red_rows(red: Sequence[int]) -> EdgeColoring:
    """2-coloring with the given color-0 neighborhoods and color 1 elsewhere."""
    n = len(red)
    full = (1 << n) - 1
    blue = [full & ~red[v] & ~(1 << v) for v in range(n)]
    return EdgeColoring(n, 2, (tuple(red), tuple(blue)))


def to_networkx(coloring: EdgeColoring, c: int) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(coloring.n))
    graph.add_edges_from(coloring.edges(c))
    return graph


def from_networkx(graph: nx.Graph) -> EdgeColoring:
    """Color 0 on the graph's edges, color 1 on its non-edges."""
    nodes = sorted(graph.nodes)
    index = {node: i for i, node in enumerate(nodes)}
    red = [0] * len(nodes)
    for a, b in graph.edges:
        if a == b:
            continue
        u, v = index[a], index[b]
        red[u] |= 1 << v
        red[v] |= 1 << u
    return from_red_rows(red)


# .gec text format

def dumps(coloring: EdgeColoring) -> str:
    matrix = coloring.matrix()
    lines = [GEC_MAGIC, f"n={coloring.n} k={coloring.k}"]
    for i in range(coloring.n - 1):
        lines.append(" ".join(str(matrix[i][j]) for j in range(i + 1, coloring.n)))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, int]:
    parts = line.split(" ")
    if len(parts) != 2 or not parts[0].startswith("n=") or not parts[1].startswith("k="):
        raise GecParseError(2, f"expected 'n=<n> k=<k>', got {line!r}")
    n_text, k_text = parts[0][2:], parts[1][2:]
    if not (NUMBER_RE.fullmatch(n_text) and NUMBER_RE.fullmatch(k_text)):
        raise GecParseError(2, f"non-integer size in {line!r}")
    n, k = int(n_text), int(k_text)
    if n < 1 or k < 1:
        raise GecParseError(2, "n and k must be positive")
    return n, k


def loads(text: str, *, cap: int = VERTEX_CAP) -> EdgeColoring:
    if "\r" in text:
        raise GecParseError(text[: text.index("\r")].count("\n") + 1, "CR line ending")
    lines = text.split("\n")
    if not text.endswith("\n"):
        raise GecParseError(len(lines), "missing final line feed")
    lines.pop()
    if not lines or lines[0] != GEC_MAGIC:
        raise GecParseError(1, f"expected {GEC_MAGIC!r}")
    if len(lines) < 2:
        raise GecParseError(2, "unexpected end of file")
    n, k = _parse_header(lines[1])
    if n > cap:
        raise GecParseError(2, f"n={n} exceeds the vertex cap {cap}")

    builder = ColoringBuilder(n, k, 0, cap=cap)
    for i in range(n - 1):
        line_no = i + 3
        if line_no > len(lines):
            raise GecParseError(line_no, "unexpected end of file")
        line = lines[line_no - 1]
        if line != line.strip() or "  " in line:
            raise GecParseError(line_no, "stray whitespace")
        fields = line.split(" ")
        if len(fields) != n - 1 - i:
            raise GecParseError(line_no, f"expected {n - 1 - i} colors, got {len(fields)}")
        for offset, field in enumerate(fields):
            if not NUMBER_RE.fullmatch(field):
                raise GecParseError(line_no, f"bad color {field!r}")
            c = int(field)
            if c >= k:
                raise GecParseError(line_no, f"color {c} out of range for k={k}")
            if c:
                builder.set_color(i, i + 1 + offset, c)
    if len(lines) > n + 1:
        raise GecParseError(n + 2, "trailing content")
    return builder.build()


def read_gec(path: str | Path) -> EdgeColoring:
    return loads(Path(path).read_text(encoding="utf-8"))


def write_gec(coloring: EdgeColoring, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps(coloring))
    return path


# isomorphism keys

def _twin_classes(matrix: list[list[int]], labels: Sequence) -> list[int]:
    n = len(matrix)
    cls = list(range(n))
    for v in range(n):
        for w in range(v):
            if cls[w] != w or labels[v] != labels[w]:
                continue
            if all(matrix[v][x] == matrix[w][x] for x in range(n) if x != v and x != w):
                cls[v] = w
                break
    return cls


def _min_sequence(matrix: list[list[int]], invariants: list[tuple], twins: list[int]) -> tuple:
    n = len(matrix)
    best: list | None = None

    def walk(placed: list[int], remaining: list[int], seq: list) -> None:
        nonlocal best
        if not remaining:
            if best is None or seq < best:
                best = list(seq)
            return
        groups: dict[tuple, list[int]] = {}
        for v in remaining:
            key = (invariants[v], tuple(matrix[u][v] for u in placed))
            groups.setdefault(key, []).append(v)
        low = min(groups)
        seq.append(low)
        if best is not None and seq > best[: len(seq)]:
            seq.pop()
            return
        tried: set[int] = set()
        for v in groups[low]:
            # swapping two unplaced twins is an automorphism fixing the prefix
            if twins[v] in tried:
                continue
            tried.add(twins[v])
            placed.append(v)
            walk(placed, [w for w in remaining if w != v], seq)
            placed.pop()
        seq.pop()

    walk([], list(range(n)), [])
    return tuple(best or ())


def canonical_key(
    coloring: EdgeColoring,
    *,
    permute_colors: bool = False,
    labels: Sequence | None = None,
    limit: int = CANONICAL_KEY_LIMIT,
) -> tuple:
    """
    Isomorphism-invariant key: equal keys iff the colorings are isomorphic
    (optionally up to a color permutation). Vertex labels, when given, must be
    preserved by the isomorphism.
    """
    if coloring.n > limit:
        raise ColoringError(f"canonical_key supports n <= {limit}, got {coloring.n}")
    if labels is None:
        labels = [0] * coloring.n
    if len(labels) != coloring.n:
        raise ColoringError("one label per vertex expected")
    base = coloring.matrix()
    twins = _twin_classes(base, labels)
    degrees = [[bin(coloring.neighbors(c, v)).count("1") for c in range(coloring.k)] for v in range(coloring.n)]
    color_perms = permutations(range(coloring.k)) if permute_colors else [tuple(range(coloring.k))]

    best = None
    for perm in color_perms:
        matrix = [[perm[c] if c >= 0 else -1 for c in row] for row in base]
        invariants = []
        for v in range(coloring.n):
            deg = [0] * coloring.k
            for c in range(coloring.k):
                deg[perm[c]] = degrees[v][c]
            invariants.append((labels[v], tuple(deg)))
        seq = _min_sequence(matrix, invariants, twins)
        if best is None or seq < best:
            best = seq
    return (coloring.n, coloring.k, best)
