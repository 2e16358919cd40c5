"""
Weights of part-labeled reduced graphs.

A configuration is a red/blue coloring of K_q (color 0 red, color 1 blue)
whose vertices stand for the parts of a Gallai partition. A part is free, red
(it contains a red edge) or blue (it contains a blue edge). A red part counts
twice in a red clique and a blue part twice in a blue clique, so a
configuration is valid for (i, j) when every red clique has weighted size at
most i - 1 and every blue clique at most j - 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator, Sequence

from src.catalog import RAMSEY_NUMBERS, verify_witness
from src.cliques import find_mono_clique, max_clique, mono_clique_number
from src.coloring import EdgeColoring, canonical_key, dumps, from_red_rows, new_complete
from src.errors import ColoringError, SearchSpaceTooLarge, UnsupportedPairError
from src.formula import format_value
from src.substitution import substitute

logger = logging.getLogger(__name__)

FREE = "free"
RED = "red"
BLUE = "blue"
LABELS = (FREE, RED, BLUE)

SUPPORTED_PAIRS = {(3, 3), (3, 4), (4, 3), (5, 3), (3, 5), (4, 4)}


@dataclass(frozen=True)
class AmbientWeights:
    name: str
    w_free: Fraction
    w_labeled: Fraction
    per_R: bool = False

    def __post_init__(self):
        if not 0 < self.w_free < self.w_labeled:
            raise ValueError(f"need 0 < w_free < w_labeled, got {self.w_free}, {self.w_labeled}")

    def of(self, label: str) -> Fraction:
        return self.w_free if label == FREE else self.w_labeled

    def text(self, value: Fraction) -> str:
        return format_value(value, per_R=self.per_R)


# w_{5,5} in units of 1/R
W55 = AmbientWeights("w55", Fraction(1), Fraction(13, 4), per_R=True)
W45 = AmbientWeights("w45", Fraction(1, 24), Fraction(1, 9))


@dataclass(frozen=True)
class StructureConfig:
    reduced: EdgeColoring
    labels: tuple[str, ...]

    def __post_init__(self):
        if self.reduced.k != 2:
            raise ColoringError("reduced graphs are red/blue colorings")
        if len(self.labels) != self.reduced.n:
            raise ColoringError("one label per part expected")
        if any(label not in LABELS for label in self.labels):
            raise ColoringError(f"labels must be among {LABELS}")

    @property
    def q(self) -> int:
        return self.reduced.n

    def count(self, label: str) -> int:
        return self.labels.count(label)

    def parts(self, label: str) -> list[int]:
        return [i for i, value in enumerate(self.labels) if value == label]

    def weight(self, W: AmbientWeights) -> Fraction:
        return sum((W.of(label) for label in self.labels), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "labels": list(self.labels),
            "red_edges": [list(e) for e in self.reduced.edges(0)],
            "reduced": dumps(self.reduced),
        }


def config_to_dict(config: StructureConfig) -> dict:
    return config.to_dict()


def _check_pair(i: int, j: int) -> None:
    if (i, j) not in SUPPORTED_PAIRS:
        raise UnsupportedPairError(f"({i},{j}) is not one of {sorted(SUPPORTED_PAIRS)}")


def _ramsey(i: int, j: int) -> int:
    return RAMSEY_NUMBERS[(min(i, j), max(i, j))]


def _max_weighted_clique(adj: Sequence[int], cand: int, mult: Sequence[int]) -> int:
    best = 0
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        best = max(best, mult[v] + _max_weighted_clique(adj, cand & adj[v], mult))
    return best


def is_valid(config: StructureConfig, i: int, j: int) -> bool:
    reduced = config.reduced
    full = reduced.full_mask
    m_r = [2 if label == RED else 1 for label in config.labels]
    m_b = [2 if label == BLUE else 1 for label in config.labels]
    return (
        _max_weighted_clique(reduced.color_rows(0), full, m_r) <= i - 1
        and _max_weighted_clique(reduced.color_rows(1), full, m_b) <= j - 1
    )


def _extensions(base: EdgeColoring, i: int, j: int) -> Iterator[EdgeColoring]:
    """Every way to add one vertex without a red K_i or a blue K_j."""
    q = base.n
    red = base.color_rows(0)
    blue = base.color_rows(1)

    def fits(adj: Sequence[int], chosen: int, v: int, size: int) -> bool:
        # no K_size through v inside chosen + v
        return len(max_clique(adj, chosen & adj[v], target=size - 1)) < size - 1

    # red neighbours must hold no red K_{i-1}, blue neighbours no blue K_{j-1}
    def walk(v: int, red_side: int, blue_side: int) -> Iterator[int]:
        if v == q:
            yield red_side
            return
        if fits(red, red_side, v, i - 1):
            yield from walk(v + 1, red_side | (1 << v), blue_side)
        if fits(blue, blue_side, v, j - 1):
            yield from walk(v + 1, red_side, blue_side | (1 << v))

    for red_side in walk(0, 0, 0):
        rows = [red[v] | ((red_side >> v & 1) << q) for v in range(q)] + [red_side]
        yield from_red_rows(rows)


@lru_cache(maxsize=None)
def ramsey_colorings(i: int, j: int, max_parts: int | None = None) -> tuple[tuple[EdgeColoring, ...], ...]:
    """
    Red/blue colorings of K_q with no red K_i and no blue K_j, one per
    isomorphism class, grouped by q = 1 .. min(R(i,j) - 1, max_parts).
    """
    _check_pair(i, j)
    top = _ramsey(i, j) - 1
    if max_parts is None:
        if (i, j) == (4, 4):
            raise SearchSpaceTooLarge("(4,4) enumeration needs max_parts")
    else:
        top = min(top, max_parts)
    levels = [(new_complete(1, 2),)]
    while len(levels) < top:
        seen: dict[tuple, EdgeColoring] = {}
        for base in levels[-1]:
            for grown in _extensions(base, i, j):
                seen.setdefault(canonical_key(grown), grown)
        if not seen:
            break
        levels.append(tuple(seen.values()))
        logger.info("(%d,%d) colorings on %d vertices: %d", i, j, len(levels), len(seen))
    return tuple(levels)


def _label_fits(reduced: EdgeColoring, labels: Sequence[str], v: int, i: int, j: int) -> bool:
    """Weighted cliques through a freshly labeled part; unlabeled parts count as free."""
    if labels[v] == FREE:
        return True
    c, bound = (0, i) if labels[v] == RED else (1, j)
    adj = reduced.color_rows(c)
    mult = [2 if label == labels[v] else 1 for label in labels]
    return 2 + _max_weighted_clique(adj, adj[v], mult) <= bound - 1


def _labelings(reduced: EdgeColoring, i: int, j: int) -> Iterator[tuple[str, ...]]:
    labels = [FREE] * reduced.n

    def walk(v: int) -> Iterator[tuple[str, ...]]:
        if v == reduced.n:
            yield tuple(labels)
            return
        for label in LABELS:
            labels[v] = label
            if _label_fits(reduced, labels, v, i, j):
                yield from walk(v + 1)
        labels[v] = FREE

    yield from walk(0)


@lru_cache(maxsize=None)
def _enumerate(i: int, j: int, max_parts: int | None) -> tuple[StructureConfig, ...]:
    out = []
    for level in ramsey_colorings(i, j, max_parts):
        for reduced in level:
            seen = set()
            for labels in _labelings(reduced, i, j):
                key = canonical_key(reduced, labels=labels)
                if key not in seen:
                    seen.add(key)
                    out.append(StructureConfig(reduced, labels))
    logger.info("(%d,%d): %d labeled configurations", i, j, len(out))
    return tuple(out)


def enumerate_configs(i: int, j: int, *, max_parts: int | None = None) -> Iterator[StructureConfig]:
    """
    Valid labeled configurations up to isomorphism, by increasing q.

    (4,4) has no full enumeration here: pass max_parts, otherwise
    SearchSpaceTooLarge is raised on the first step.
    """
    _check_pair(i, j)
    yield from _enumerate(i, j, max_parts)


ConfigFilter = Callable[[StructureConfig], bool]


def max_weight(
    i: int,
    j: int,
    W: AmbientWeights,
    filter: ConfigFilter | None = None,
    *,
    max_parts: int | None = None,
) -> tuple[Fraction, StructureConfig]:
    """
    Largest total weight over all valid configurations accepted by the filter.
    Branch and bound over labelings of each unlabeled coloring, largest q first;
    ties keep the first configuration found.
    """
    _check_pair(i, j)
    levels = ramsey_colorings(i, j, max_parts)
    best: Fraction | None = None
    witness: StructureConfig | None = None

    for level in reversed(levels):
        for reduced in level:
            q = reduced.n
            labels = [FREE] * q

            def walk(v: int, total: Fraction) -> None:
                nonlocal best, witness
                if best is not None and total + (q - v) * W.w_labeled <= best:
                    return
                if v == q:
                    config = StructureConfig(reduced, tuple(labels))
                    if filter is None or filter(config):
                        best, witness = total, config
                    return
                for label in (RED, BLUE, FREE):
                    labels[v] = label
                    if _label_fits(reduced, labels, v, i, j):
                        walk(v + 1, total + W.of(label))
                labels[v] = FREE

            walk(0, Fraction(0))

    if witness is None:
        raise ValueError(f"no ({i},{j}) configuration passes the filter")
    return best, witness


def blowup_config(config: StructureConfig, i: int | None = None, j: int | None = None) -> EdgeColoring:
    """Free part -> one vertex, red part -> red K2, blue part -> blue K2, joined as in the reduced graph."""
    if i is not None and j is not None and not is_valid(config, i, j):
        raise ColoringError(f"configuration is not valid for ({i},{j})")
    pieces = {
        FREE: new_complete(1, 2),
        RED: new_complete(2, 2, 0),
        BLUE: new_complete(2, 2, 1),
    }
    coloring, _ = substitute(config.reduced, [pieces[label] for label in config.labels], {0: 0, 1: 1})
    return coloring


# filters named after the lemma hypotheses

def _has_mono_triangle(reduced: EdgeColoring) -> bool:
    return any(find_mono_clique(reduced, c, 3) is not None for c in (0, 1))


def no_red_part(config: StructureConfig) -> bool:
    return config.count(RED) == 0


def all_free(config: StructureConfig) -> bool:
    return config.count(FREE) == config.q


def at_least_one_blue(config: StructureConfig) -> bool:
    return config.count(BLUE) >= 1


def exactly_one_red(config: StructureConfig) -> bool:
    return config.count(RED) == 1


def _red_pairs_blue_joined(config: StructureConfig) -> int:
    return sum(1 for a, b in combinations(config.parts(RED), 2) if config.reduced.color(a, b) == 1)


def two_plus_red_none_blue_joined(config: StructureConfig) -> bool:
    return config.count(RED) >= 2 and _red_pairs_blue_joined(config) == 0


def exactly_two_red_blue_joined(config: StructureConfig) -> bool:
    return config.count(RED) == 2 and _red_pairs_blue_joined(config) == 1


def pentagon_two_blue(config: StructureConfig) -> bool:
    return (
        config.q == 5
        and config.count(BLUE) == 2
        and config.count(RED) == 0
        and not _has_mono_triangle(config.reduced)
    )


def not_pentagon_two_blue(config: StructureConfig) -> bool:
    return not pentagon_two_blue(config)


def five_red_pentagon(config: StructureConfig) -> bool:
    return config.q == 5 and config.count(RED) == 5 and not _has_mono_triangle(config.reduced)


def not_five_red_pentagon(config: StructureConfig) -> bool:
    return not five_red_pentagon(config)


@dataclass(frozen=True)
class LemmaBound:
    lemma: str
    part: str
    i: int
    j: int
    weights: AmbientWeights
    stated: Fraction
    filter: ConfigFilter | None = None

    @property
    def label(self) -> str:
        return f"{self.lemma}{self.part}"


def _bounds(lemma, i, j, W, rows):
    return [LemmaBound(lemma, part, i, j, W, Fraction(stated), flt) for part, stated, flt in rows]


LEMMA_BOUNDS: dict[str, list[LemmaBound]] = {
    "6.1": _bounds("6.1", 3, 3, W55, [("", Fraction(13, 2), None)]),
    "6.2": _bounds("6.2", 3, 4, W55, [
        ("(i)", Fraction(39, 4), None),
        ("(ii)", Fraction(19, 2), no_red_part),
    ]),
    "6.3": _bounds("6.3", 5, 3, W55, [
        ("(i)", Fraction(13), all_free),
        ("(ii)", Fraction(13), at_least_one_blue),
        ("(iii)", Fraction(49, 4), exactly_one_red),
        ("(iv)", Fraction(29, 2), two_plus_red_none_blue_joined),
        ("(v)", Fraction(27, 2), exactly_two_red_blue_joined),
        ("(vi)", Fraction(65, 4), None),
    ]),
    "5.1": _bounds("5.1", 3, 3, W45, [("", Fraction(2, 9), None)]),
    "5.2": _bounds("5.2", 3, 4, W45, [
        ("(i)", Fraction(25, 72), pentagon_two_blue),
        ("(ii)", Fraction(1, 3), not_pentagon_two_blue),
    ]),
    "5.3": _bounds("5.3", 5, 3, W45, [
        ("(i)", Fraction(5, 9), five_red_pentagon),
        ("(ii)", Fraction(39, 72), not_five_red_pentagon),
    ]),
}


def check_bound(bound: LemmaBound) -> dict:
    computed, witness = max_weight(bound.i, bound.j, bound.weights, bound.filter)
    blowup = blowup_config(witness, bound.i, bound.j)
    W = bound.weights
    return {
        "bound": bound.label,
        "pair": [bound.i, bound.j],
        "weights": W.name,
        "filter": bound.filter.__name__ if bound.filter else None,
        "stated": W.text(bound.stated),
        "computed": W.text(computed),
        "holds": computed <= bound.stated,
        "tight": computed == bound.stated,
        "witness": witness.to_dict(),
        "blowup_order": blowup.n,
        "blowup_clique_numbers": [mono_clique_number(blowup, 0), mono_clique_number(blowup, 1)],
        "blowup_valid": verify_witness(blowup, bound.i, bound.j),
    }


def verify_lemma(lemma_id: str) -> dict:
    if lemma_id not in LEMMA_BOUNDS:
        raise ValueError(f"unknown lemma {lemma_id!r}; expected one of {sorted(LEMMA_BOUNDS)}")
    results = [check_bound(bound) for bound in LEMMA_BOUNDS[lemma_id]]
    return {
        "lemma": lemma_id,
        "bounds": results,
        "holds": all(r["holds"] for r in results),
        "tight": all(r["tight"] for r in results),
    }
