"""
Substitution (blow-up) of colorings into 2-colored templates and the
lower-bound constructions built from it.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from src.catalog import WitnessCatalog, known_witness
from src.coloring import EdgeColoring, dumps, loads, new_complete, recolor, write_gec
from src.errors import ColoringError
from src.formula import CASE_COLOR_ROLES, GRParams, classify_case

logger = logging.getLogger(__name__)

CERT_SCHEMA = "gallai-ramsey/certificate@1"


@dataclass(frozen=True)
class PartitionCertificate:
    parts: tuple[tuple[int, ...], ...]
    reduced: EdgeColoring
    color_map: dict[int, int] | None = None

    @property
    def q(self) -> int:
        return len(self.parts)

    @property
    def colors_used_between(self) -> frozenset[int]:
        return frozenset(self.reduced.colors_used()) if self.q > 1 else frozenset()

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "parts": [list(part) for part in self.parts],
            "reduced": dumps(self.reduced),
            "colors_used_between": sorted(self.colors_used_between),
            "color_map": {str(a): b for a, b in sorted(self.color_map.items())} if self.color_map else None,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> PartitionCertificate:
        color_map = payload.get("color_map")
        return cls(
            parts=tuple(tuple(part) for part in payload["parts"]),
            reduced=loads(payload["reduced"]),
            color_map={int(a): b for a, b in color_map.items()} if color_map else None,
        )


@dataclass(frozen=True)
class BlowUpLevel:
    certificate: PartitionCertificate
    copies: int
    colors: tuple[int, ...]
    label: str

    def to_dict(self) -> dict:
        return {"label": self.label, "copies": self.copies, "colors": list(self.colors), "certificate": self.certificate.to_dict()}


@dataclass
class WitnessBuild:
    coloring: EdgeColoring
    levels: list[BlowUpLevel] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.coloring.n

    def chain_dict(self) -> dict:
        return {"schema": CERT_SCHEMA, "order": self.order, "k": self.coloring.k, "levels": [lvl.to_dict() for lvl in self.levels]}

    def write(self, path: str | Path) -> tuple[Path, Path]:
        gec = write_gec(self.coloring, path)
        cert = gec.with_suffix(".cert.json")
        cert.write_text(json.dumps(self.chain_dict(), indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return gec, cert


def substitute(
    template: EdgeColoring,
    parts: Sequence[EdgeColoring],
    color_map: dict[int, int],
) -> tuple[EdgeColoring, PartitionCertificate]:
    """Replace vertex i of the template by parts[i]; cross edges take color_map[template color]."""
    if len(parts) != template.n:
        raise ColoringError(f"template has {template.n} vertices but {len(parts)} parts were given")
    if not parts:
        raise ColoringError("nothing to substitute")
    k = parts[0].k
    if any(part.k != k for part in parts):
        raise ColoringError("all parts must share the global palette")
    if len(set(color_map.values())) != len(color_map):
        raise ColoringError(f"color map {color_map} is not injective")
    if len(template.colors_used()) > 2:
        raise ColoringError("templates must use at most two colors")
    for c in template.colors_used():
        if c not in color_map or not 0 <= color_map[c] < k:
            raise ColoringError(f"template color {c} has no target in a palette of {k} colors")

    offsets = []
    total = 0
    for part in parts:
        offsets.append(total)
        total += part.n
    blocks = [((1 << part.n) - 1) << off for part, off in zip(parts, offsets)]

    rows = [[0] * total for _ in range(k)]
    for i, (part, off) in enumerate(zip(parts, offsets)):
        cross = [0] * k
        for tc in template.colors_used():
            reach = 0
            mask = template.neighbors(tc, i)
            j = 0
            while mask:
                if mask & 1:
                    reach |= blocks[j]
                mask >>= 1
                j += 1
            cross[color_map[tc]] |= reach
        for c in range(k):
            inner = part.color_rows(c)
            row = rows[c]
            for v in range(part.n):
                row[off + v] = (inner[v] << off) | cross[c]
    coloring = EdgeColoring(total, k, rows)

    reduced = recolor(template, {c: color_map[c] for c in template.colors_used()}, k)
    certificate = PartitionCertificate(
        parts=tuple(tuple(range(off, off + part.n)) for part, off in zip(parts, offsets)),
        reduced=reduced,
        color_map=dict(color_map),
    )
    return coloring, certificate


def blow_up(template: EdgeColoring, part: EdgeColoring, color_map: dict[int, int]) -> tuple[EdgeColoring, PartitionCertificate]:
    return substitute(template, [part] * template.n, color_map)


def _pair_graph(template: EdgeColoring, colors: tuple[int, int], k: int) -> EdgeColoring:
    return recolor(template, {0: colors[0], 1: colors[1]}, k)


def base_graph(case: str, palette: Sequence[int], k: int, *, catalog: WitnessCatalog | None = None) -> EdgeColoring:
    """
    Base coloring of the construction. The palette lists the colors the case
    consumes in role order: K5-colors, then K4-colors, then K3-colors.
    """
    roles = CASE_COLOR_ROLES[case]
    needed = sum(roles)
    if len(palette) < needed:
        raise ColoringError(f"case {case} needs {needed} colors, palette has {len(palette)}")
    if any(not 0 <= c < k for c in palette[:needed]):
        raise ColoringError(f"palette {list(palette)} does not fit k={k}")
    five = list(palette[: roles[0]])
    four = list(palette[roles[0]: roles[0] + roles[1]])
    three = list(palette[roles[0] + roles[1]: needed])

    if case == "c1":
        return new_complete(1, k)
    if case == "c2":
        return new_complete(2, k, three[0])
    if case == "c3":
        return new_complete(3, k, four[0])
    if case == "c4":
        return new_complete(4, k, five[0])
    if case == "c5":
        return _pair_graph(known_witness(3, 4), (three[0], four[0]), k)
    if case == "c6":
        return _pair_graph(known_witness(3, 5), (three[0], five[0]), k)
    if case == "c7":
        block = _pair_graph(known_witness(3, 4), (three[0], four[0]), k)
        return blow_up(new_complete(2, 1), block, {0: three[1]})[0]
    if case == "c8":
        return _pair_graph(known_witness(4, 5, catalog=catalog), (four[0], five[0]), k)
    if case == "c9":
        block = _pair_graph(known_witness(3, 5), (three[0], five[0]), k)
        return blow_up(new_complete(2, 1), block, {0: three[1]})[0]
    if case == "c10":
        block = _pair_graph(known_witness(4, 5, catalog=catalog), (four[0], five[0]), k)
        return blow_up(new_complete(2, 1), block, {0: three[0]})[0]
    if case == "c11":
        block = _pair_graph(known_witness(4, 5, catalog=catalog), (four[0], five[0]), k)
        return blow_up(new_complete(3, 1), block, {0: four[1]})[0]
    raise ColoringError(f"unknown case {case!r}")


def color_plan(params: GRParams) -> tuple[list[int], list[tuple[int, tuple[int, int]]]]:
    """
    Split the palette into the base colors (the last colors of each class)
    and the pairs consumed by blow-ups (K5 pairs, then K4, then K3, ascending).
    """
    case = classify_case(params.r, params.s, params.t)
    roles = CASE_COLOR_ROLES[case]
    classes = [
        list(range(0, params.r)),
        list(range(params.r, params.r + params.s)),
        list(range(params.r + params.s, params.k)),
    ]
    base: list[int] = []
    pairs: list[tuple[int, tuple[int, int]]] = []
    for clique, colors, used in zip((5, 4, 3), classes, roles):
        paired = colors[: len(colors) - used]
        base.extend(colors[len(colors) - used:])
        pairs.extend((clique, (paired[i], paired[i + 1])) for i in range(0, len(paired), 2))
    return base, pairs


def build_g_witness(params: GRParams, catalog: WitnessCatalog | None = None) -> WitnessBuild:
    """Coloring of order g(r,s,t) - 1 with no rainbow triangle and no forbidden monochromatic clique."""
    if params.k < 1:
        raise ColoringError("need at least one color")
    case = classify_case(params.r, params.s, params.t)
    base_colors, pairs = color_plan(params)
    current = base_graph(case, base_colors, params.k, catalog=catalog)
    build = WitnessBuild(current)
    logger.info("witness %s: case %s, base order %d, %d blow-up levels", params, case, current.n, len(pairs))

    for clique, colors in pairs:
        if clique == 5:
            template = known_witness(5, 5, params.R, catalog=catalog)
        else:
            template = known_witness(clique, clique)
        current, certificate = blow_up(template, current, {0: colors[0], 1: colors[1]})
        build.levels.append(BlowUpLevel(certificate, template.n, colors, f"K{clique}-pair"))
        build.coloring = current
    return build


def k169_build() -> WitnessBuild:
    red_blue = known_witness(3, 5)
    red_green = recolor(red_blue, {0: 0, 1: 2}, 3)
    coloring, certificate = substitute(red_blue, [red_green] * red_blue.n, {0: 0, 1: 1})
    return WitnessBuild(coloring, [BlowUpLevel(certificate, red_blue.n, (0, 1), "red/blue template")])


def build_k169() -> EdgeColoring:
    """3-coloring of K_169 with no rainbow triangle and no monochromatic K5."""
    return k169_build().coloring
