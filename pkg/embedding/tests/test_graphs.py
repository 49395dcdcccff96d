from django.test import SimpleTestCase

from embedding.exceptions import InputError
from embedding.graphs import (INF, Graph, HostSpec, all_pairs_distances, ball, components_after_removal,
                              degree_gate, format_edge_list, generate, guest_family, parse_edge_list,
                              parse_host_spec, read_guest, theta_arm_vertices)


class GraphTests(SimpleTestCase):
    def test_rejects_self_loop_and_parallel_edge(self):
        with self.assertRaises(InputError) as caught:
            Graph(3, [(0, 1), (1, 1)])
        self.assertEqual(caught.exception.code, 'self-loop')
        with self.assertRaises(InputError) as caught:
            Graph(3, [(0, 1), (1, 0)])
        self.assertEqual(caught.exception.code, 'parallel-edge')

    def test_rejects_bad_weight(self):
        with self.assertRaises(InputError):
            Graph(2, [(0, 1)], {(0, 1): 0})

    def test_induced_renumbers(self):
        g = generate(HostSpec('cycle', size=5))
        sub, order = g.induced({1, 2, 4})
        self.assertEqual(order, [1, 2, 4])
        self.assertEqual(sub.edges(), ((0, 1),))

    def test_networkx_round_trip_keeps_weights(self):
        g = Graph(3, [(0, 1), (1, 2)], {(0, 1): 2, (1, 2): 5})
        self.assertEqual(Graph.from_networkx(g.to_networkx(), weight='weight'), g)


class DistanceTests(SimpleTestCase):
    def test_cycle_distances(self):
        dm = all_pairs_distances(generate(HostSpec('cycle', size=6)))
        self.assertEqual(dm[0, 3], 3)
        self.assertEqual(dm[1, 5], 2)
        self.assertEqual(dm.diameter, 3)
        self.assertTrue(dm.is_metric())

    def test_weighted_distances(self):
        g = Graph(3, [(0, 1), (1, 2), (0, 2)], {(0, 1): 1, (1, 2): 1, (0, 2): 5})
        self.assertEqual(all_pairs_distances(g)[0, 2], 2)

    def test_disconnected_pairs_are_infinite(self):
        dm = all_pairs_distances(Graph(3, [(0, 1)]))
        self.assertEqual(dm[0, 2], INF)
        self.assertEqual(dm.diameter, 1)

    def test_ball(self):
        dm = all_pairs_distances(generate(HostSpec('path', size=5)))
        self.assertEqual(ball(dm, 2, 1), frozenset({1, 2, 3}))


class ComponentTests(SimpleTestCase):
    def test_components_ordered_by_smallest_vertex(self):
        g = generate(HostSpec('path', size=5))
        self.assertEqual(components_after_removal(g, {2}), [frozenset({0, 1}), frozenset({3, 4})])

    def test_universe_restricts_vertices(self):
        g = generate(HostSpec('cycle', size=6))
        parts = components_after_removal(g, (), universe={0, 1, 3, 4})
        self.assertEqual(parts, [frozenset({0, 1}), frozenset({3, 4})])

    def test_degree_gate(self):
        self.assertTrue(degree_gate(2, 2, 1))
        self.assertFalse(degree_gate(3, 2, 1))
        # в хосте степени 2 на расстоянии до 2 не больше четырёх вершин
        self.assertTrue(degree_gate(4, 2, 2))
        self.assertFalse(degree_gate(5, 2, 2))


class HostSpecTests(SimpleTestCase):
    def test_theta_generation(self):
        host = generate(HostSpec('theta', arms=(2, 2, 2)))
        self.assertEqual(host.n, 5)
        self.assertEqual(len(host.edges()), 6)
        self.assertEqual(host.degree(0), 3)
        self.assertEqual(host.degree(1), 3)

    def test_theta_arm_vertices(self):
        self.assertEqual(theta_arm_vertices((2, 3)), [(0, 2, 1), (0, 3, 4, 1)])

    def test_invalid_hosts(self):
        for text in ('cycle:2', 'path:0', 'theta:5', 'theta:1,1,3', 'theta:0,4', 'star:4', 'cycle:x'):
            with self.subTest(text=text), self.assertRaises(InputError):
                parse_host_spec(text)

    def test_parse_host_spec(self):
        self.assertEqual(parse_host_spec('theta:3,4,5'), HostSpec('theta', arms=(3, 4, 5)))
        self.assertEqual(str(parse_host_spec('cycle:8')), 'cycle:8')

    def test_file_host_uses_reader(self):
        graph = Graph(2, [(0, 1)])
        spec = parse_host_spec('file:host.txt', read_file=lambda path: graph)
        self.assertEqual(spec.family, 'general')
        self.assertIs(generate(spec), graph)


class EdgeListTests(SimpleTestCase):
    def test_labels_are_renumbered(self):
        g, labels = parse_edge_list('10 20\n# комментарий\n20 30  # хвост\n')
        self.assertEqual(labels, [10, 20, 30])
        self.assertEqual(g.edges(), ((0, 1), (1, 2)))

    def test_isolated_vertex_line(self):
        g, labels = parse_edge_list('7\n')
        self.assertEqual((g.n, labels), (1, [7]))

    def test_weighted_list(self):
        g, _ = parse_edge_list('0 1 3\n1 2 1\n')
        self.assertTrue(g.is_weighted)
        self.assertEqual(g.max_weight, 3)

    def test_errors_carry_line_numbers(self):
        cases = {
            '0 1\n1 1\n': 'self-loop',
            '0 1\n1 2 4\n': 'parse',
            '0 1\n0 x\n': 'parse',
            '0 1\n1 0\n': 'parallel-edge',
            '0 1 0\n': 'weight',
        }
        for text, code in cases.items():
            with self.subTest(text=text), self.assertRaises(InputError) as caught:
                parse_edge_list(text)
            self.assertEqual(caught.exception.code, code)
            self.assertIsNotNone(caught.exception.line)

    def test_guest_must_be_connected(self):
        with self.assertRaises(InputError) as caught:
            read_guest('0 1\n2 3\n')
        self.assertEqual(caught.exception.code, 'disconnected')
        with self.assertRaises(InputError):
            read_guest('# пусто\n')

    def test_format_edge_list(self):
        g = generate(HostSpec('path', size=3))
        self.assertEqual(format_edge_list(g), '0 1\n1 2\n')
        self.assertEqual(format_edge_list(Graph(1)), '0\n')
        self.assertEqual(parse_edge_list(format_edge_list(g))[0], g)


class GuestFamilyTests(SimpleTestCase):
    def test_sizes(self):
        self.assertEqual(guest_family('star', 5).max_degree, 4)
        self.assertEqual(len(guest_family('complete', 4).edges()), 6)
        self.assertEqual(guest_family('theta', 0, arms=(2, 2, 2)).n, 5)

    def test_random_families_are_seeded(self):
        first = guest_family('tree', 9, seed=3)
        self.assertEqual(first, guest_family('tree', 9, seed=3))
        self.assertTrue(first.is_connected())
        self.assertEqual(len(first.edges()), 8)
        g = guest_family('random', 8, seed=1, max_degree=3)
        self.assertTrue(g.is_connected())
        self.assertLessEqual(g.max_degree, 3)
