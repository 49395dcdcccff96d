from django.test import SimpleTestCase, override_settings

from embedding.embeddings import Ratio, verify_nc_distortion
from embedding.exceptions import BudgetExceeded, InputError
from embedding.graphs import HostSpec, all_pairs_distances, generate, guest_family
from embedding.oracle import SearchBudget, brute_force_embed, min_distortion_integer


def instance(guest, host):
    return guest, all_pairs_distances(guest), host, all_pairs_distances(host)


class BruteForceTests(SimpleTestCase):
    def setUp(self):
        self.c4 = generate(HostSpec('cycle', size=4))
        self.c8 = generate(HostSpec('cycle', size=8))
        self.p4 = generate(HostSpec('path', size=4))

    def test_square_into_octagon(self):
        g, dg, h, dh = instance(self.c4, self.c8)
        f = brute_force_embed(g, dg, h, dh, 2)
        self.assertIsNotNone(f)
        self.assertTrue(f.total)
        self.assertIsNone(verify_nc_distortion(g, h, dg, dh, f, 2))
        self.assertIsNone(brute_force_embed(g, dg, h, dh, 1))

    def test_fractional_distortion(self):
        g, dg, h, dh = instance(self.c4, self.c8)
        self.assertIsNone(brute_force_embed(g, dg, h, dh, Ratio(3, 2)))
        self.assertIsNotNone(brute_force_embed(g, dg, h, dh, Ratio(5, 2)))

    def test_bijective(self):
        g, dg, h, dh = instance(self.p4, self.p4)
        f = brute_force_embed(g, dg, h, dh, 1, bijective=True)
        self.assertEqual(f.mapping, {0: 0, 1: 1, 2: 2, 3: 3})
        g, dg, h, dh = instance(self.p4, self.c4)
        # расстояние 3 между концами пути в C4 не достижимо
        self.assertIsNone(brute_force_embed(g, dg, h, dh, 3, bijective=True))

    def test_bijective_needs_equal_sizes(self):
        g, dg, h, dh = instance(generate(HostSpec('path', size=3)), self.p4)
        self.assertIsNone(brute_force_embed(g, dg, h, dh, 1, bijective=True))

    def test_codomain_and_fixed(self):
        g, dg, h, dh = instance(generate(HostSpec('path', size=3)), generate(HostSpec('path', size=6)))
        f = brute_force_embed(g, dg, h, dh, 1, codomain={3, 4, 5})
        self.assertEqual(f.image(), frozenset({3, 4, 5}))
        f = brute_force_embed(g, dg, h, dh, 1, fixed={0: 2})
        self.assertEqual(f[0], 2)
        self.assertEqual(f[1], 1)

    def test_host_distance_needs_codomain(self):
        g, dg, _, _ = instance(self.p4, self.p4)
        with self.assertRaises(InputError):
            brute_force_embed(g, dg, None, None, 1, host_distance=lambda x, y: abs(x - y))

    def test_custom_host_metric(self):
        g, dg, _, _ = instance(self.p4, self.p4)
        f = brute_force_embed(g, dg, None, None, 1, codomain=range(10, 14), host_distance=lambda x, y: abs(x - y))
        self.assertEqual(f.mapping, {0: 10, 1: 11, 2: 12, 3: 13})

    def test_node_counter(self):
        g, dg, h, dh = instance(self.c4, self.c8)
        counted = []
        brute_force_embed(g, dg, h, dh, 2, node_counter=counted.append)
        self.assertEqual(len(counted), 1)
        self.assertGreater(counted[0], 0)

    def test_budget(self):
        g, dg, h, dh = instance(self.c4, self.c8)
        with self.assertRaises(BudgetExceeded):
            brute_force_embed(g, dg, h, dh, 1, budget=SearchBudget(1, 60.0))

    @override_settings(EMBED_ORACLE_MAX_NODES=1)
    def test_budget_from_settings(self):
        g, dg, h, dh = instance(self.c4, self.c8)
        self.assertEqual(SearchBudget.from_settings().max_nodes, 1)
        with self.assertRaises(BudgetExceeded):
            brute_force_embed(g, dg, h, dh, 1)

    def test_budget_must_be_positive(self):
        with self.assertRaises(InputError):
            SearchBudget(0, 1.0)


class MinDistortionTests(SimpleTestCase):
    def test_values(self):
        c8 = generate(HostSpec('cycle', size=8))
        self.assertEqual(min_distortion_integer(*instance(generate(HostSpec('cycle', size=4)), c8), 4), 2)
        p5 = generate(HostSpec('path', size=5))
        self.assertEqual(min_distortion_integer(*instance(generate(HostSpec('path', size=3)), p5), 3), 1)
        # у треугольника на пути одна пара растягивается вдвое
        self.assertEqual(min_distortion_integer(*instance(guest_family('complete', 3), p5), 3), 2)
        self.assertIsNone(min_distortion_integer(*instance(guest_family('complete', 3), p5), 1))

    def test_bad_bound(self):
        p2 = generate(HostSpec('path', size=2))
        with self.assertRaises(InputError):
            min_distortion_integer(*instance(p2, p2), 0)
