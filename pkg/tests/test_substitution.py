import json
import os
import random
import sys
import tempfile
import unittest
from pathlib import Path

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx

from src.catalog import WitnessCatalog, known_witness
from src.cliques import Profile, clique_numbers, find_rainbow_triangle, mono_clique_number, verify_profile
from src.coloring import ColoringBuilder, from_red_rows, new_complete, read_gec, recolor, restrict, to_networkx
from src.errors import ColoringError, WitnessUnavailable
from src.formula import GRParams, g_minus_one, g_value
from src.substitution import (
    PartitionCertificate,
    base_graph,
    blow_up,
    build_g_witness,
    build_k169,
    color_plan,
    k169_build,
    substitute,
)


def random_coloring(n, k, rng):
    builder = ColoringBuilder(n, k)
    for u in range(n):
        for v in range(u + 1, n):
            builder.set_color(u, v, rng.randrange(k))
    return builder.build()


def weighted_clique_number(template, tc, weights):
    """Heaviest set of template vertices pairwise joined in color tc."""
    q = template.n
    best = 0
    for mask in range(1, 1 << q):
        members = [i for i in range(q) if mask >> i & 1]
        if all(template.color(a, b) == tc for x, a in enumerate(members) for b in members[x + 1:]):
            best = max(best, sum(weights[i] for i in members))
    return best


class TestSubstitute(unittest.TestCase):
    def setUp(self):
        self.pentagon = known_witness(3, 3)

    def test_pentagon_of_pentagons(self):
        inner = recolor(self.pentagon, {0: 2, 1: 3}, 4)
        coloring, certificate = blow_up(self.pentagon, inner, {0: 0, 1: 1})
        self.assertEqual(coloring.n, 25)
        self.assertTrue(coloring.check_invariants())
        self.assertEqual(clique_numbers(coloring), [2, 2, 2, 2])
        self.assertIsNone(find_rainbow_triangle(coloring))
        self.assertEqual(certificate.q, 5)
        self.assertEqual(certificate.parts[1], (5, 6, 7, 8, 9))
        self.assertEqual(certificate.colors_used_between, frozenset({0, 1}))

    def test_cross_edges_follow_template(self):
        parts = [new_complete(1, 3), new_complete(2, 3, 2), new_complete(3, 3, 2)]
        template = recolor(new_complete(3, 1), {0: 1}, 2)
        coloring, certificate = substitute(template, parts, {1: 0})
        self.assertEqual(coloring.n, 6)
        self.assertEqual(coloring.color(0, 5), 0)
        self.assertEqual(coloring.color(1, 2), 2)
        self.assertEqual(coloring.color(3, 5), 2)
        self.assertEqual(certificate.parts, ((0,), (1, 2), (3, 4, 5)))

    def test_rejects_bad_inputs(self):
        with self.assertRaises(ColoringError):
            substitute(self.pentagon, [new_complete(1, 2)] * 4, {0: 0, 1: 1})
        with self.assertRaises(ColoringError):
            substitute(self.pentagon, [new_complete(1, 2)] * 4 + [new_complete(1, 3)], {0: 0, 1: 1})
        with self.assertRaises(ColoringError):
            blow_up(self.pentagon, new_complete(1, 2), {0: 1, 1: 1})
        with self.assertRaises(ColoringError):
            blow_up(self.pentagon, new_complete(1, 2), {0: 0, 1: 2})

    def test_certificate_roundtrip(self):
        _, certificate = blow_up(self.pentagon, new_complete(2, 3, 2), {0: 0, 1: 1})
        payload = json.loads(json.dumps(certificate.to_dict()))
        self.assertEqual(PartitionCertificate.from_dict(payload), certificate)

    def test_clique_numbers_multiply_through_parts(self):
        rng = random.Random(17)
        for _ in range(30):
            q = rng.randint(2, 8)
            template = from_red_rows(random_coloring(q, 2, rng).color_rows(0))
            parts = [random_coloring(rng.randint(1, 25), 3, rng) for _ in range(q)]
            a, b = rng.sample(range(3), 2)
            coloring, _ = substitute(template, parts, {0: a, 1: b})
            self.assertLessEqual(coloring.n, 200)
            for c in range(3):
                weights = [mono_clique_number(part, c) for part in parts]
                if c in (a, b):
                    expected = weighted_clique_number(template, 0 if c == a else 1, weights)
                else:
                    expected = max(weights)
                self.assertEqual(mono_clique_number(coloring, c), expected, msg=(q, a, b, c))


class TestGWitness(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.empty = WitnessCatalog(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def check_build(self, r, s, t, R=42):
        params = GRParams(r, s, t, R)
        build = build_g_witness(params, self.empty)
        self.assertEqual(build.order, g_minus_one(params), msg=str(params))
        report = verify_profile(build.coloring, Profile.from_counts(r, s, t))
        self.assertTrue(report.passed, msg=f"{params}: {report.to_dict()}")
        return build

    def test_small_orders(self):
        self.assertEqual(self.check_build(0, 0, 2).order, 5)
        self.assertEqual(self.check_build(0, 2, 0).order, 17)

    def test_r_zero_up_to_2000(self):
        built = set()
        for s in range(7):
            for t in range(12):
                if s + t == 0 or g_value(GRParams(0, s, t, 42)) > 2000:
                    continue
                self.check_build(0, s, t)
                built.add((s, t))
        self.assertLessEqual({(0, 8), (0, 9), (5, 0), (3, 3), (2, 5), (4, 1)}, built)
        self.assertNotIn((6, 0), built)
        self.assertNotIn((0, 10), built)

    def test_one_k5_color(self):
        # one K5-color lives in the base graph, so no (5,5) witness is needed
        for s, t, order in ((0, 0, 4), (0, 1, 13), (0, 2, 26), (2, 1, 221), (0, 3, 65)):
            self.assertEqual(self.check_build(1, s, t).order, order)

    def test_missing_catalog_entries(self):
        with self.assertRaises(WitnessUnavailable):
            build_g_witness(GRParams(2, 0, 0, 42), self.empty)
        with self.assertRaises(WitnessUnavailable):
            build_g_witness(GRParams(1, 1, 0, 42), self.empty)

    def test_color_plan(self):
        base, pairs = color_plan(GRParams(0, 3, 3, 42))
        self.assertEqual(base, [2, 5])
        self.assertEqual(pairs, [(4, (0, 1)), (3, (3, 4))])

    def test_base_graph_palette(self):
        with self.assertRaises(ColoringError):
            base_graph("c7", [0, 1], 3)
        self.assertEqual(base_graph("c7", [0, 1, 2], 3).n, 16)

    def test_write_chain(self):
        build = self.check_build(0, 2, 2)
        self.assertEqual([lvl.label for lvl in build.levels], ["K4-pair", "K3-pair"])
        gec, cert = build.write(Path(self.tmp.name) / "g022.gec")
        self.assertEqual(read_gec(gec), build.coloring)
        chain = json.loads(cert.read_text(encoding="utf-8"))
        self.assertEqual(chain["order"], 85)
        self.assertEqual([lvl["copies"] for lvl in chain["levels"]], [17, 5])
        last = PartitionCertificate.from_dict(chain["levels"][-1]["certificate"])
        self.assertEqual(last.q, 5)
        self.assertEqual(len(last.parts[0]), 17)


class TestK169(unittest.TestCase):
    def test_blocks(self):
        build = k169_build()
        self.assertEqual(build.order, 169)
        certificate = build.levels[0].certificate
        self.assertEqual(certificate.q, 13)
        self.assertTrue(all(len(part) == 13 for part in certificate.parts))
        self.assertEqual(certificate.colors_used_between, frozenset({0, 1}))

    def test_block_is_red_green_witness(self):
        coloring = build_k169()
        red_blue = to_networkx(known_witness(3, 5), 0)
        for part in k169_build().levels[0].certificate.parts:
            block = restrict(coloring, part)
            self.assertEqual(block.colors_used(), {0, 2})
            self.assertTrue(nx.is_isomorphic(to_networkx(block, 0), red_blue))
            self.assertEqual(clique_numbers(block), [2, 1, 4])


if __name__ == "__main__":
    unittest.main()
