import os
import sys
import unittest
from fractions import Fraction
from itertools import product

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.catalog import verify_witness
from src.cliques import clique_numbers
from src.coloring import canonical_key, from_red_rows, new_complete
from src.errors import ColoringError, SearchSpaceTooLarge, UnsupportedPairError
from src.weights import (
    BLUE,
    FREE,
    LABELS,
    RED,
    W45,
    W55,
    AmbientWeights,
    StructureConfig,
    blowup_config,
    config_to_dict,
    enumerate_configs,
    is_valid,
    max_weight,
    pentagon_two_blue,
    ramsey_colorings,
    verify_lemma,
)


def all_two_colorings(q):
    pairs = [(u, v) for u in range(q) for v in range(u + 1, q)]
    for bits in range(1 << len(pairs)):
        red = [0] * q
        for index, (u, v) in enumerate(pairs):
            if bits >> index & 1:
                red[u] |= 1 << v
                red[v] |= 1 << u
        yield from_red_rows(red)


def pentagon():
    return from_red_rows([0b10010, 0b00101, 0b01010, 0b10100, 0b01001])


class TestValidity(unittest.TestCase):
    def test_labels_double_count(self):
        edge = from_red_rows([0b10, 0b01])
        self.assertTrue(is_valid(StructureConfig(edge, (FREE, FREE)), 3, 3))
        self.assertFalse(is_valid(StructureConfig(edge, (RED, FREE)), 3, 3))
        self.assertTrue(is_valid(StructureConfig(edge, (BLUE, BLUE)), 3, 3))
        self.assertTrue(is_valid(StructureConfig(edge, (RED, RED)), 5, 3))

    def test_config_checks(self):
        with self.assertRaises(ColoringError):
            StructureConfig(new_complete(2, 3), (FREE, FREE))
        with self.assertRaises(ColoringError):
            StructureConfig(new_complete(2, 2), (FREE,))
        with self.assertRaises(ColoringError):
            StructureConfig(new_complete(2, 2), (FREE, "green"))

    def test_weights(self):
        config = StructureConfig(pentagon(), (BLUE, FREE, BLUE, FREE, FREE))
        self.assertEqual(config.weight(W45), Fraction(25, 72))
        self.assertEqual(config.weight(W55), Fraction(19, 2))
        self.assertTrue(pentagon_two_blue(config))
        with self.assertRaises(ValueError):
            AmbientWeights("bad", Fraction(1), Fraction(1, 2))

    def test_config_to_dict(self):
        payload = config_to_dict(StructureConfig(pentagon(), (FREE,) * 5))
        self.assertEqual(payload["q"], 5)
        self.assertEqual(len(payload["red_edges"]), 5)
        self.assertTrue(payload["reduced"].startswith("GEC 1\n"))


class TestEnumeration(unittest.TestCase):
    def brute_force_classes(self, i, j, top=5):
        classes = set()
        for q in range(1, top + 1):
            reduced_classes = {}
            for reduced in all_two_colorings(q):
                if verify_witness(reduced, i, j):
                    reduced_classes.setdefault(canonical_key(reduced), reduced)
            for reduced in reduced_classes.values():
                for labels in product(LABELS, repeat=q):
                    config = StructureConfig(reduced, labels)
                    if is_valid(config, i, j):
                        classes.add(canonical_key(reduced, labels=labels))
        return classes

    def test_ramsey_colorings_counts(self):
        levels = ramsey_colorings(3, 3)
        self.assertEqual([len(level) for level in levels], [1, 2, 2, 3, 1])
        last = levels[-1][0]
        self.assertEqual(canonical_key(last), canonical_key(pentagon()))

    def test_three_three_matches_brute_force(self):
        configs = list(enumerate_configs(3, 3))
        keys = [canonical_key(c.reduced, labels=c.labels) for c in configs]
        self.assertEqual(len(keys), len(set(keys)))
        self.assertEqual(set(keys), self.brute_force_classes(3, 3))
        self.assertTrue(all(is_valid(c, 3, 3) for c in configs))

    def test_three_four_matches_brute_force(self):
        configs = [c for c in enumerate_configs(3, 4) if c.q <= 6]
        keys = {canonical_key(c.reduced, labels=c.labels) for c in configs}
        self.assertEqual(len(keys), len(configs))
        self.assertEqual(keys, self.brute_force_classes(3, 4, top=6))

    def test_configs_are_distinct_and_blow_up(self):
        for i, j in ((3, 3), (3, 4), (4, 3), (5, 3)):
            configs = list(enumerate_configs(i, j))
            keys = {canonical_key(c.reduced, labels=c.labels) for c in configs}
            self.assertEqual(len(keys), len(configs), msg=(i, j))
            for config in configs:
                self.assertTrue(verify_witness(blowup_config(config), i, j), msg=(i, j, config.labels))

    def test_four_four_needs_max_parts(self):
        with self.assertRaises(SearchSpaceTooLarge):
            next(enumerate_configs(4, 4))
        self.assertTrue(all(c.q <= 3 for c in enumerate_configs(4, 4, max_parts=3)))

    def test_max_weight_matches_enumeration(self):
        for W in (W55, W45):
            best, witness = max_weight(3, 3, W)
            self.assertEqual(best, max(c.weight(W) for c in enumerate_configs(3, 3)))
            self.assertEqual(witness.weight(W), best)

    def test_unsupported(self):
        with self.assertRaises(UnsupportedPairError):
            list(enumerate_configs(4, 5))
        with self.assertRaises(SearchSpaceTooLarge):
            ramsey_colorings(4, 4)
        self.assertEqual(len(ramsey_colorings(4, 4, 4)), 4)

    def test_filter_without_match(self):
        with self.assertRaises(ValueError):
            max_weight(3, 3, W55, lambda config: config.q > 5)


class TestBlowup(unittest.TestCase):
    def test_pieces(self):
        config = StructureConfig(from_red_rows([0b10, 0b01]), (BLUE, BLUE))
        coloring = blowup_config(config, 3, 3)
        self.assertEqual(coloring.n, 4)
        self.assertEqual(clique_numbers(coloring), [2, 2])
        self.assertTrue(verify_witness(coloring, 3, 3))

    def test_validity_matches_blown_up_coloring(self):
        for i, j, top in ((3, 3, 5), (3, 4, 6), (4, 3, 6)):
            for level in ramsey_colorings(i, j, top):
                for reduced in level:
                    for labels in product(LABELS, repeat=reduced.n):
                        config = StructureConfig(reduced, labels)
                        expected = verify_witness(blowup_config(config), i, j)
                        self.assertEqual(is_valid(config, i, j), expected, msg=(i, j, labels))

    def test_invalid_config(self):
        config = StructureConfig(from_red_rows([0b10, 0b01]), (RED, FREE))
        with self.assertRaises(ColoringError):
            blowup_config(config, 3, 3)


class TestLemmas(unittest.TestCase):
    def check_lemma(self, lemma_id, computed):
        result = verify_lemma(lemma_id)
        self.assertTrue(result["holds"])
        self.assertEqual([b["computed"] for b in result["bounds"]], computed)
        for bound in result["bounds"]:
            self.assertTrue(bound["blowup_valid"], msg=bound["bound"])
            labeled = sum(1 for label in bound["witness"]["labels"] if label != FREE)
            self.assertEqual(bound["blowup_order"], bound["witness"]["q"] + labeled)
        return result

    def test_lemma_6_1(self):
        result = self.check_lemma("6.1", ["13/(2R)"])
        self.assertTrue(result["tight"])

    def test_lemma_6_2(self):
        self.assertTrue(self.check_lemma("6.2", ["39/(4R)", "19/(2R)"])["tight"])

    def test_lemma_5_1(self):
        self.assertTrue(self.check_lemma("5.1", ["2/9"])["tight"])

    def test_lemma_5_2(self):
        self.assertTrue(self.check_lemma("5.2", ["25/72", "1/3"])["tight"])

    def test_unknown_lemma(self):
        with self.assertRaises(ValueError):
            verify_lemma("7.1")

    def test_lemma_6_3(self):
        result = self.check_lemma("6.3", ["13/R", "13/R", "49/(4R)", "25/(2R)", "27/(2R)", "65/(4R)"])
        tight = {b["bound"]: b["tight"] for b in result["bounds"]}
        self.assertFalse(tight["6.3(iv)"])
        self.assertTrue(tight["6.3(vi)"])

    def test_lemma_5_3(self):
        self.assertTrue(self.check_lemma("5.3", ["5/9", "13/24"])["tight"])


if __name__ == "__main__":
    unittest.main()
