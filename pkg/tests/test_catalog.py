import os
import random
import sys
import tempfile
import unittest
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from unittest import mock

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import networkx as nx

from src.catalog import (
    BUILTIN_CIRCULANTS,
    LocalSearchState,
    WitnessCatalog,
    circulant,
    count_violations,
    known_witness,
    search_witness,
    swap_colors,
    verify_witness,
    witness_spec,
)
from src.cliques import clique_numbers
from src.coloring import canonical_key, new_complete, to_networkx
from src.config import CACHE_ENV, cache_dir
from src.errors import ColoringError, InvalidWitness, UnsupportedPairError, WitnessUnavailable


class TestBuiltinWitnesses(unittest.TestCase):
    def check_witness(self, s, t, n):
        coloring = known_witness(s, t)
        self.assertEqual(coloring.n, n)
        self.assertTrue(verify_witness(coloring, s, t))
        red, blue = clique_numbers(coloring)
        self.assertEqual((red, blue), (s - 1, t - 1))

    def test_orders(self):
        self.check_witness(3, 3, 5)
        self.check_witness(3, 4, 8)
        self.check_witness(3, 5, 13)
        self.check_witness(4, 4, 17)

    def test_mirrored_pairs(self):
        self.check_witness(4, 3, 8)
        self.check_witness(5, 3, 13)

    def test_circulants_are_regular(self):
        for (s, t), (n, conn) in BUILTIN_CIRCULANTS.items():
            red = to_networkx(circulant(n, conn), 0)
            self.assertEqual({d for _, d in red.degree}, {len(conn)})

    def test_paley_17_isomorphic(self):
        paley = nx.paley_graph(17).to_undirected()
        self.assertTrue(nx.is_isomorphic(to_networkx(known_witness(4, 4), 0), paley))

    def test_restricted_orders(self):
        self.assertEqual(known_witness(3, 5, 10).n, 10)
        with self.assertRaises(WitnessUnavailable):
            known_witness(3, 3, 6)

    def test_unsupported_pair(self):
        with self.assertRaises(UnsupportedPairError):
            known_witness(3, 6)

    def test_bad_connection_sets(self):
        with self.assertRaises(ColoringError):
            circulant(5, (1, 2))
        with self.assertRaises(ColoringError):
            circulant(5, (5,))

    def test_swap_colors(self):
        swapped = swap_colors(known_witness(3, 4))
        self.assertTrue(verify_witness(swapped, 4, 3))
        self.assertFalse(verify_witness(swapped, 3, 4))

    def test_witness_spec(self):
        spec = witness_spec(3, 5)
        self.assertEqual(spec.to_dict(), {"s": 3, "t": 5, "n": 13, "source": "builtin-circulant"})


class TestWitnessCatalog(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.catalog = WitnessCatalog(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_missing_witness_is_unavailable(self):
        with self.assertRaises(WitnessUnavailable) as ctx:
            known_witness(4, 5, catalog=self.catalog)
        self.assertEqual(ctx.exception.to_dict()["n"], 24)
        with self.assertRaises(WitnessUnavailable):
            known_witness(5, 5, catalog=self.catalog)

    def test_put_then_get(self):
        pentagon = known_witness(3, 3)
        path = self.catalog.put(pentagon, 3, 3)
        self.assertEqual(path.name, "witness_3_3_5.gec")
        self.assertEqual(self.catalog.get(3, 3, 5), pentagon)
        self.assertEqual(self.catalog.cached_orders(3, 3), [5])

    def test_mirrored_file(self):
        self.catalog.put(known_witness(3, 4), 3, 4)
        mirrored = self.catalog.get(4, 3, 8)
        self.assertTrue(verify_witness(mirrored, 4, 3))

    def test_larger_file_restricts(self):
        self.catalog.put(known_witness(3, 5), 3, 5)
        smaller = self.catalog.get(3, 5, 11)
        self.assertEqual(smaller.n, 11)
        self.assertTrue(verify_witness(smaller, 3, 5))

    def test_invalid_put_rejected(self):
        with self.assertRaises(InvalidWitness):
            self.catalog.put(new_complete(5, 2), 3, 3)
        self.assertEqual(self.catalog.cached_orders(3, 3), [])

    def test_corrupt_file_rejected(self):
        Path(self.tmp.name, "witness_3_3_5.gec").write_text("GEC 1\nn=5 k=2\n0 0 0 0\n0 0 0\n0 0\n0\n", encoding="utf-8")
        with self.assertRaises(InvalidWitness):
            self.catalog.get(3, 3, 5)

    def test_catalogs_on_one_directory_share_a_lock(self):
        other = WitnessCatalog(Path(self.tmp.name) / "sub" / "..")
        self.assertIs(other._write_lock, self.catalog._write_lock)
        with tempfile.TemporaryDirectory() as elsewhere:
            self.assertIsNot(WitnessCatalog(elsewhere)._write_lock, self.catalog._write_lock)

    def test_concurrent_puts(self):
        catalogs = [WitnessCatalog(self.tmp.name) for _ in range(8)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            paths = list(pool.map(lambda catalog: catalog.put(known_witness(3, 5), 3, 5), catalogs))
        self.assertEqual(len(set(paths)), 1)
        self.assertTrue(verify_witness(self.catalog.get(3, 5, 13), 3, 5))

    def test_env_var(self):
        with mock.patch.dict(os.environ, {CACHE_ENV: self.tmp.name}):
            self.assertEqual(cache_dir(), Path(self.tmp.name))
            self.assertEqual(WitnessCatalog().directory, Path(self.tmp.name))


class TestLocalSearch(unittest.TestCase):
    def test_delta_matches_recount(self):
        rng = random.Random(3)
        state = LocalSearchState.random(9, 3, 4, rng)
        before = count_violations(state.to_coloring(), 3, 4)
        self.assertEqual(before, state.violations)
        for _ in range(10_000):
            u, v = sorted(rng.sample(range(9), 2))
            change = state.flip(u, v)
            after = count_violations(state.to_coloring(), 3, 4)
            self.assertEqual(after, before + change)
            self.assertEqual(after, state.violations)
            before = after

    def test_finds_pentagon(self):
        found = search_witness(5, 3, 3, seed=1, budget=20_000)
        self.assertIsNotNone(found)
        self.assertEqual(canonical_key(found), canonical_key(known_witness(3, 3)))

    def test_deterministic_for_seed(self):
        a = search_witness(8, 3, 4, seed=5, budget=50_000)
        b = search_witness(8, 3, 4, seed=5, budget=50_000)
        self.assertEqual(a, b)
        self.assertIsNotNone(a)
        self.assertTrue(verify_witness(a, 3, 4))

    def test_impossible_order(self):
        self.assertIsNone(search_witness(6, 3, 3, seed=0, budget=2_000))


if __name__ == "__main__":
    unittest.main()
