from django.test import SimpleTestCase, override_settings

from embedding.decomposition import (TreeDecomposition, ball_union, connectify, decompose, exact_decomposition,
                                     format_td, make_nice, networkx_tree, parse_td)
from embedding.exceptions import DecompositionError, InputError
from embedding.graphs import HostSpec, all_pairs_distances, components_after_removal, generate, guest_family


def path(n):
    return generate(HostSpec('path', size=n))


def cycle(n):
    return generate(HostSpec('cycle', size=n))


class ValidationTests(SimpleTestCase):
    def assertAxiom(self, td, h, axiom):
        with self.assertRaises(DecompositionError) as caught:
            td.validate(h)
        self.assertEqual(caught.exception.axiom, axiom)

    def test_axioms(self):
        h = path(3)
        self.assertAxiom(TreeDecomposition([{0, 1}], []), h, 'cover')
        self.assertAxiom(TreeDecomposition([{0, 1}, {2}], [(0, 1)]), h, 'edge')
        self.assertAxiom(TreeDecomposition([{0, 1}, {1, 2}, {0}], [(0, 1), (1, 2)]), h, 'subtree')
        self.assertAxiom(TreeDecomposition([{0, 1}, {1, 2}], []), h, 'tree')
        self.assertAxiom(TreeDecomposition([{0, 1, 2}] * 3, [(0, 1), (1, 2), (0, 2)]), h, 'tree')

    def test_valid(self):
        td = TreeDecomposition([{0, 1}, {1, 2}], [(0, 1)])
        self.assertIs(td.validate(path(3)), td)
        self.assertEqual(td.width, 1)


class DecomposeTests(SimpleTestCase):
    def test_exact_widths(self):
        self.assertEqual(exact_decomposition(path(5)).validate(path(5)).width, 1)
        self.assertEqual(exact_decomposition(cycle(5)).validate(cycle(5)).width, 2)
        k4 = guest_family('complete', 4)
        self.assertEqual(exact_decomposition(k4).validate(k4).width, 3)

    @override_settings(EMBED_EXACT_TW_LIMIT=4)
    def test_heuristic_for_large_hosts(self):
        td = decompose(path(20))
        self.assertEqual(td.width, 1)
        self.assertEqual(len(networkx_tree(td)), len(td.bags))

    def test_make_nice(self):
        h = cycle(6)
        ntd = make_nice(decompose(h))
        self.assertIs(ntd.validate(h), ntd)
        self.assertEqual(ntd.width, 2)
        root = ntd[ntd.root]
        self.assertEqual(root.bag, frozenset())
        self.assertEqual(ntd.postorder()[-1], ntd.root)
        self.assertTrue(all(ntd[u].bag == frozenset() for u in range(len(ntd)) if ntd[u].is_leaf()))

    def test_ball_union(self):
        h = path(6)
        self.assertEqual(ball_union(h, all_pairs_distances(h), {0, 5}, 1), frozenset({0, 1, 4, 5}))


class PaceFormatTests(SimpleTestCase):
    TEXT = 'c пример\ns td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n'

    def test_parse_with_labels(self):
        td = parse_td(self.TEXT, index={1: 0, 2: 1, 3: 2})
        self.assertEqual(td.bags, (frozenset({0, 1}), frozenset({1, 2})))
        self.assertEqual(td.edges, ((0, 1),))
        td.validate(path(3))

    def test_round_trip(self):
        td = decompose(cycle(5))
        self.assertEqual(parse_td(format_td(td, 5)).bags, td.bags)

    def test_errors(self):
        for text in ('b 1 1 2\n', 's td 2 2 3\nb 1 1 2\n', 's td 1 1 3\nb 1 1 2\n', 's td 1 2 3\nb 1 1 x\n',
                     's td 1 2 3\nb 1 1 2\n1 5\n'):
            with self.subTest(text=text), self.assertRaises(InputError):
                parse_td(text)


class ConnectifyTests(SimpleTestCase):
    def test_disconnected_bag_gets_a_path(self):
        h = path(3)
        td = TreeDecomposition([{0, 2}, {0, 1, 2}], [(0, 1)]).validate(h)
        cnd = connectify(td, h, all_pairs_distances(h))
        self.assertEqual(cnd.bags[0], {0, 1, 2})
        self.assertEqual(cnd.gamma, 2)
        self.assertEqual(cnd.width, 2)
        cnd.ntd.validate(h)

    def test_shortest_path_prefers_lower_vertices(self):
        h = cycle(6)
        td = TreeDecomposition([{0, 3}, {0, 1, 2, 3}, {0, 3, 4, 5}], [(0, 1), (0, 2)]).validate(h)
        cnd = connectify(td, h, all_pairs_distances(h))
        self.assertEqual(cnd.bags[0], {0, 1, 2, 3})
        cnd.ntd.validate(h)

    def test_bags_are_connected(self):
        for h in (cycle(6), guest_family('tree', 8, seed=2), generate(HostSpec('theta', arms=(2, 3, 3)))):
            with self.subTest(h=h):
                cnd = connectify(decompose(h), h, all_pairs_distances(h))
                for bag in cnd.bags:
                    self.assertLessEqual(len(components_after_removal(h, (), universe=bag)), 1)
                cnd.ntd.validate(h)
