"""
Closed-form value g(r,s,t), the 22 ratio types and the golden ratio tables.

All arithmetic is exact (int / Fraction). R is always an explicit argument.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from src.config import RAMSEY_R_RANGE, RATIO_TABLES_PATH, check_ramsey_R
from src.errors import InadmissibleTransformError

logger = logging.getLogger(__name__)

CASES = tuple(f"c{i}" for i in range(1, 12))

# colors consumed by the base graph of each case: (K5, K4, K3)
CASE_COLOR_ROLES = {
    "c1": (0, 0, 0),
    "c2": (0, 0, 1),
    "c3": (0, 1, 0),
    "c4": (1, 0, 0),
    "c5": (0, 1, 1),
    "c6": (1, 0, 1),
    "c7": (0, 1, 2),
    "c8": (1, 1, 0),
    "c9": (1, 0, 2),
    "c10": (1, 1, 1),
    "c11": (1, 2, 0),
}

CASE_BASE_ORDER = {
    "c1": 1, "c2": 2, "c3": 3, "c4": 4, "c5": 8, "c6": 13,
    "c7": 16, "c8": 24, "c9": 26, "c10": 48, "c11": 72,
}

# blow-up factor per consumed color pair
PAIR_SIZES = {3: 5, 4: 17}


@dataclass(frozen=True)
class GRParams:
    r: int
    s: int
    t: int
    R: int

    def __post_init__(self):
        if min(self.r, self.s, self.t) < 0:
            raise ValueError(f"r, s, t must be nonnegative, got {(self.r, self.s, self.t)}")
        check_ramsey_R(self.R)

    @property
    def k(self) -> int:
        return self.r + self.s + self.t

    @property
    def case(self) -> str:
        return classify_case(self.r, self.s, self.t)

    def shifted(self, delta: Sequence[int]) -> GRParams:
        return GRParams(self.r + delta[0], self.s + delta[1], self.t + delta[2], self.R)

    def __str__(self) -> str:
        return f"(r={self.r}, s={self.s}, t={self.t}, R={self.R})"


def classify_case(r: int, s: int, t: int) -> str:
    if min(r, s, t) < 0:
        raise ValueError(f"r, s, t must be nonnegative, got {(r, s, t)}")
    if r % 2 == 0:
        if s % 2 == 0:
            return "c1" if t % 2 == 0 else "c2"
        if t == 0:
            return "c3"
        return "c5" if t % 2 == 1 else "c7"
    if s % 2 == 0:
        if t % 2 == 1:
            return "c6"
        if t == 0:
            return "c4" if s == 0 else "c11"
        return "c9"
    return "c8" if t % 2 == 0 else "c10"


def g_minus_one(p: GRParams) -> int:
    """Order of the extremal construction, g(r,s,t) - 1."""
    case = classify_case(p.r, p.s, p.t)
    e5, e4, e3 = CASE_COLOR_ROLES[case]
    return (
        CASE_BASE_ORDER[case]
        * p.R ** ((p.r - e5) // 2)
        * PAIR_SIZES[4] ** ((p.s - e4) // 2)
        * PAIR_SIZES[3] ** ((p.t - e3) // 2)
    )


def g_value(p: GRParams) -> int:
    return g_minus_one(p) + 1


@dataclass(frozen=True)
class RatioType:
    id: str
    delta: tuple[int, int, int]
    numerator: int
    denominator: int
    r_power: int = 0

    def bound(self, R: int) -> Fraction:
        return Fraction(self.numerator, self.denominator * R ** self.r_power)

    def admissible(self, r: int, s: int, t: int) -> bool:
        return min(r + self.delta[0], s + self.delta[1], t + self.delta[2]) >= 0

    @property
    def bound_text(self) -> str:
        return format_value(Fraction(self.numerator, self.denominator), per_R=bool(self.r_power))


_TYPE_ROWS = [
    ("T1", (0, 0, -1), 1, 2, 0),
    ("T2", (0, 0, -2), 1, 5, 0),
    ("T3", (0, -1, 1), 2, 3, 0),
    ("T4", (0, -1, 0), 1, 3, 0),
    ("T5", (0, -1, -1), 1, 8, 0),
    ("T6", (0, -2, 2), 13, 36, 0),
    ("T7", (0, -2, 1), 13, 72, 0),
    ("T8", (0, -2, 0), 1, 17, 0),
    ("T9", (-1, 1, 0), 3, 4, 0),
    ("T10", (-1, 1, -1), 17, 48, 0),
    ("T11", (-1, 0, 1), 5, 13, 0),
    ("T12", (-1, 0, 0), 5, 26, 0),
    ("T13", (-1, 0, -1), 1, 13, 0),
    ("T14", (-1, -1, 2), 5, 24, 0),
    ("T15", (-1, -1, 1), 1, 9, 0),
    ("T16", (-1, -1, 0), 1, 24, 0),
    ("T17", (-2, 2, 0), 18, 1, 1),
    ("T18", (-2, 1, 1), 12, 1, 1),
    ("T19", (-2, 1, 0), 6, 1, 1),
    ("T20", (-2, 0, 2), 13, 2, 1),
    ("T21", (-2, 0, 1), 13, 4, 1),
    ("T22", (-2, 0, 0), 1, 1, 1),
]

RATIO_TYPES: dict[str, RatioType] = {row[0]: RatioType(*row) for row in _TYPE_ROWS}


def ratio(T: RatioType | str, p: GRParams) -> Fraction:
    """(g(p + delta) - 1) / (g(p) - 1)."""
    rtype = RATIO_TYPES[T] if isinstance(T, str) else T
    if not rtype.admissible(p.r, p.s, p.t):
        raise InadmissibleTransformError(f"{rtype.id} is not defined at {(p.r, p.s, p.t)}")
    return Fraction(g_minus_one(p.shifted(rtype.delta)), g_minus_one(p))


def weighted_count_bound(coeffs: Sequence[Fraction], counts: Sequence[int]) -> Fraction:
    if len(coeffs) != len(counts):
        raise ValueError(f"{len(coeffs)} coefficients but {len(counts)} counts")
    return sum((Fraction(c) * n for c, n in zip(coeffs, counts)), Fraction(0))


# value strings: "a/b", "a/R", "a/(bR)"

_ABS_RE = re.compile(r"^(\d+)/(\d+)$")
_PER_R_RE = re.compile(r"^(\d+)/R$")
_PER_BR_RE = re.compile(r"^(\d+)/\((\d+)R\)$")


def parse_value(text: str, R: int) -> Fraction:
    text = text.strip()
    if m := _ABS_RE.match(text):
        return Fraction(int(m.group(1)), int(m.group(2)))
    if m := _PER_R_RE.match(text):
        return Fraction(int(m.group(1)), R)
    if m := _PER_BR_RE.match(text):
        return Fraction(int(m.group(1)), int(m.group(2)) * R)
    raise ValueError(f"cannot parse table value {text!r}")


def format_value(value: Fraction, *, per_R: bool = False) -> str:
    """Inverse of parse_value; with per_R the value is read as value / R."""
    value = Fraction(value)
    if not per_R:
        return f"{value.numerator}/{value.denominator}"
    if value.denominator == 1:
        return f"{value.numerator}/R"
    return f"{value.numerator}/({value.denominator}R)"


_CLAUSE_RE = re.compile(r"^([rst])(>=|<=|=)(\d+)$")


def condition_holds(condition: str | None, r: int, s: int, t: int) -> bool:
    if not condition:
        return True
    values = {"r": r, "s": s, "t": t}
    for clause in condition.split(","):
        m = _CLAUSE_RE.match(clause.strip())
        if not m:
            raise ValueError(f"bad side condition {condition!r}")
        var, op, bound = m.group(1), m.group(2), int(m.group(3))
        value = values[var]
        if op == "=" and value != bound or op == ">=" and value < bound or op == "<=" and value > bound:
            return False
    return True


@dataclass(frozen=True)
class Subcell:
    printed: str | None
    when: str | None
    expected: str
    erratum: str | None = None


@dataclass(frozen=True)
class Cell:
    dash: bool
    subcells: tuple[Subcell, ...] = ()

    def match(self, r: int, s: int, t: int) -> Subcell | None:
        for sub in self.subcells:
            if condition_holds(sub.when, r, s, t):
                return sub
        return None


def _cell_from_json(raw) -> Cell:
    if raw == "-":
        return Cell(dash=True)
    if isinstance(raw, str):
        return Cell(dash=False, subcells=(Subcell(raw, None, raw),))
    items = raw if isinstance(raw, list) else [raw]
    subs = []
    for item in items:
        printed = item.get("printed")
        subs.append(Subcell(printed, item.get("when"), item.get("expected") or printed, item.get("erratum")))
    return Cell(dash=False, subcells=tuple(subs))


@dataclass
class RatioTables:
    tables: dict[str, list[str]]
    cells: dict[str, dict[str, Cell]]
    max_row: dict[str, str]
    thresholds: list[dict]
    citation_notes: list[dict]
    source: Path

    @classmethod
    def load(cls, path: str | Path | None = None) -> RatioTables:
        path = Path(path) if path is not None else RATIO_TABLES_PATH
        payload = json.loads(path.read_text(encoding="utf-8"))
        cells = {
            case: {tid: _cell_from_json(raw) for tid, raw in row.items()}
            for case, row in payload["cells"].items()
        }
        return cls(
            tables=payload["tables"],
            cells=cells,
            max_row=payload["max"],
            thresholds=payload["thresholds"],
            citation_notes=payload["citation_notes"],
            source=path,
        )

    def errata(self) -> list[dict]:
        out = []
        for case in CASES:
            for tid, cell in self.cells[case].items():
                for sub in cell.subcells:
                    if sub.erratum:
                        out.append({
                            "case": case,
                            "type": tid,
                            "when": sub.when,
                            "printed": sub.printed,
                            "exact": sub.expected,
                            "note": sub.erratum,
                        })
        return out


@lru_cache(maxsize=None)
def load_tables(path: str | None = None) -> RatioTables:
    return RatioTables.load(path)


def threshold_checks(R: int, tables: RatioTables | None = None) -> list[dict]:
    """Case-analysis sums c/R (+ constant) compared with 1 at a given R."""
    tables = tables or load_tables()
    out = []
    for entry in tables.thresholds:
        printed = Fraction(entry["printed"])
        terms = entry.get("terms")
        constant = Fraction(entry["constant"]) if entry.get("constant") else Fraction(0)
        total = sum((Fraction(term) for term in terms), Fraction(0)) if terms else printed
        strict = entry["relation"] == "<"
        value = total / R + constant
        holds = value < 1 if strict else value <= 1
        # smallest integer R for which the comparison holds
        limit = total / (1 - constant)
        min_R = math.floor(limit) + 1 if strict else math.ceil(limit)
        out.append({
            "label": entry["label"],
            "relation": entry["relation"],
            "sum_over_R": format_value(total),
            "constant": format_value(constant) if constant else None,
            "value": format_value(value),
            "holds": holds,
            "holds_from_R": int(min_R),
            "printed_total": entry["printed"],
            "printed_total_matches": terms is None or total == printed,
        })
    return out


def _grid(max_coord: int) -> Iterable[tuple[int, int, int]]:
    for r in range(max_coord + 1):
        for s in range(max_coord + 1):
            for t in range(max_coord + 1):
                yield r, s, t


def verify_tables(R: int, max_coord: int = 6, *, tables: RatioTables | None = None) -> dict:
    """
    Check every admissible ratio on the grid against its column bound and the
    printed table cell of its row. Cells printed "-" are excluded from both
    checks and listed separately when the grid reaches them.
    """
    check_ramsey_R(R)
    tables = tables or load_tables()
    violations: list[dict] = []
    mismatches: list[dict] = []
    uncovered: list[dict] = []
    dash_cells: dict[tuple[str, str], dict] = {}
    observed_max: dict[str, Fraction] = {}
    below_one = True
    checked = 0

    for r, s, t in _grid(max_coord):
        p = GRParams(r, s, t, R)
        if p.k == 0:
            continue
        case = p.case
        for tid, rtype in RATIO_TYPES.items():
            if not rtype.admissible(r, s, t):
                continue
            value = ratio(rtype, p)
            checked += 1
            below_one &= value < 1
            bound = rtype.bound(R)
            cell = tables.cells[case][tid]
            if cell.dash:
                entry = dash_cells.setdefault((case, tid), {"case": case, "type": tid, "values": set(), "exceeds_bound": False})
                entry["values"].add(value)
                entry["exceeds_bound"] |= value > bound
                continue
            if value > observed_max.get(tid, Fraction(0)):
                observed_max[tid] = value
            if value > bound:
                violations.append({"case": case, "type": tid, "triple": [r, s, t], "value": format_value(value), "bound": format_value(bound)})
            sub = cell.match(r, s, t)
            if sub is None:
                uncovered.append({"case": case, "type": tid, "triple": [r, s, t], "value": format_value(value)})
            elif parse_value(sub.expected, R) != value:
                mismatches.append({
                    "case": case,
                    "type": tid,
                    "triple": [r, s, t],
                    "value": format_value(value),
                    "expected": sub.expected,
                    "when": sub.when,
                })

    max_rows = []
    for tid, rtype in RATIO_TYPES.items():
        printed = tables.max_row[tid]
        bound = rtype.bound(R)
        seen = observed_max.get(tid)
        max_rows.append({
            "type": tid,
            "printed": printed,
            "matches_bound": parse_value(printed, R) == bound,
            "observed_max": format_value(seen) if seen is not None else None,
            "attained": seen == bound,
            "within_bound": seen is None or seen <= bound,
        })

    thresholds = threshold_checks(R, tables)
    report = {
        "R": R,
        "max": max_coord,
        "checked": checked,
        "violations": violations,
        "cell_mismatches": mismatches,
        "uncovered": uncovered,
        "dash_cells": [
            {**entry, "values": sorted(format_value(v) for v in entry["values"])}
            for entry in sorted(dash_cells.values(), key=lambda e: (CASES.index(e["case"]), int(e["type"][1:])))
        ],
        "errata": tables.errata(),
        "max_rows": max_rows,
        "all_ratios_below_one": below_one,
        "thresholds": thresholds,
        "threshold_failures": [c["label"] for c in thresholds if not c["holds"]],
        "citation_notes": tables.citation_notes,
    }
    logger.info("tables R=%d: %d ratios, %d violations, %d mismatches", R, checked, len(violations), len(mismatches))
    return report


# classical constants and the surrounding bounds

def ramsey_constants() -> dict:
    return {
        "R(3,3)": 6,
        "R(3,4)": 9,
        "R(3,5)": 14,
        "R(4,4)": 18,
        "R(4,5)": 25,
        "R(5,5)": {"lower": 43, "upper": 48},
        "R range": [RAMSEY_R_RANGE.start, RAMSEY_R_RANGE.stop - 1],
    }


def lower_bound_formula(order: int, ramsey_hh: int, k: int) -> int:
    """Generic lower bound on gr_k(K3 : H) for a graph H of the given order."""
    if k < 1:
        raise ValueError("k must be positive")
    if k % 2 == 0:
        return (ramsey_hh - 1) ** (k // 2) + 1
    return (order - 1) * (ramsey_hh - 1) ** ((k - 1) // 2) + 1


def grk3_value(k: int) -> int:
    return 5 ** (k // 2) + 1 if k % 2 == 0 else 2 * 5 ** ((k - 1) // 2) + 1


def grk4_value(k: int) -> int:
    return 17 ** (k // 2) + 1 if k % 2 == 0 else 3 * 17 ** ((k - 1) // 2) + 1


def classical_checks(R: int, max_k: int = 6) -> list[dict]:
    """g with all colors of one kind against the known gr_k(K3 : K3) and gr_k(K3 : K4) values."""
    check_ramsey_R(R)
    rows = []
    for k in range(1, max_k + 1):
        for kind, order, ramsey_hh, known, params in (
            ("K3", 3, 6, grk3_value(k), GRParams(0, 0, k, R)),
            ("K4", 4, 18, grk4_value(k), GRParams(0, k, 0, R)),
        ):
            g = g_value(params)
            generic = lower_bound_formula(order, ramsey_hh, k)
            rows.append({"k": k, "H": kind, "g": g, "known": known, "generic_lower": generic, "holds": g == known == generic})
    return rows


def main_theorem_bounds(k: int, R: int) -> dict:
    """
    g(k,0,0) at R. For R = 42 the value is compared with the sandwich
    bounds; for odd k the 169-vertex example lifts the lower bound above g.
    """
    check_ramsey_R(R)
    if k < 2:
        raise ValueError("k must be at least 2")
    value = g_value(GRParams(k, 0, 0, R))
    out = {"k": k, "R": R, "g": value, "lower": None, "upper": None}
    if R != 42:
        out["exact"] = True
        return out
    out["exact"] = k == 2
    if k == 2:
        out["lower"] = out["upper"] = 43
    elif k % 2 == 0:
        out["lower"], out["upper"] = 42 ** (k // 2) + 1, 43 ** (k // 2) + 1
    else:
        out["lower"] = 169 * 42 ** ((k - 3) // 2) + 1
        out["upper"] = 4 * 43 ** ((k - 1) // 2) + 1
    out["g_below_lower"] = value < out["lower"]
    if k == 3:
        out["g_equals_k169_order"] = value == 169
    return out
