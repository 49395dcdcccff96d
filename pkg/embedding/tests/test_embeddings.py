from fractions import Fraction

from django.test import SimpleTestCase

from embedding.embeddings import (Embedding, Ratio, bijective_reduction_gate, candidate_contractions,
                                  distortion_report, embedding_to_dot, gen_reduction_instances, long_empty_arcs,
                                  solve_rational, subdivide_red_blue, union_embedding, verify_bijective,
                                  verify_nc_distortion)
from embedding.exceptions import ConflictError, ContractViolation, InputError, PartialityError
from embedding.graphs import HostSpec, all_pairs_distances, generate


def cycle(n):
    return generate(HostSpec('cycle', size=n))


def path(n):
    return generate(HostSpec('path', size=n))


class RatioTests(SimpleTestCase):
    def test_always_prints_fraction(self):
        self.assertEqual(str(Ratio(2)), '2/1')
        self.assertEqual(str(Ratio.parse('6/4')), '3/2')

    def test_parse_errors(self):
        for text in ('x', '1/0', ''):
            with self.subTest(text=text), self.assertRaises(InputError):
                Ratio.parse(text)


class EmbeddingTests(SimpleTestCase):
    def test_injective(self):
        with self.assertRaises(ContractViolation) as caught:
            Embedding({0: 3, 1: 3})
        self.assertEqual(caught.exception.pair, (0, 1))

    def test_restrict_and_relabel(self):
        f = Embedding({0: 0, 1: 1, 2: 2}, 3)
        self.assertTrue(f.total)
        self.assertFalse(f.restrict({0, 2}).total)
        self.assertEqual(f.relabel([5, 6, 7]).mapping, {0: 5, 1: 6, 2: 7})
        self.assertEqual(f.inverse(), {0: 0, 1: 1, 2: 2})

    def test_union(self):
        merged = union_embedding([{0: 1}, {1: 2}, {0: 1}], 2)
        self.assertEqual(merged.mapping, {0: 1, 1: 2})
        with self.assertRaises(ConflictError) as caught:
            union_embedding([{0: 1}, {0: 2}])
        self.assertEqual(caught.exception.vertex, 0)
        with self.assertRaises(ContractViolation):
            union_embedding([{0: 1}, {1: 1}])


class ReportTests(SimpleTestCase):
    def setUp(self):
        self.g, self.h = cycle(4), cycle(8)
        self.dg, self.dh = all_pairs_distances(self.g), all_pairs_distances(self.h)

    def test_doubling_map(self):
        f = Embedding({i: 2 * i for i in range(4)}, 4)
        report = distortion_report(self.g, self.h, self.dg, self.dh, f)
        self.assertEqual(report.expansion, 2)
        self.assertEqual(report.contraction, Fraction(1, 2))
        self.assertEqual(report.distortion, 2)
        self.assertEqual(str(report.distortion), '2/1')
        self.assertEqual(report.scale_free, 1)
        self.assertTrue(report.non_contracting)
        self.assertEqual(report.expansion_pair, (0, 1))

    def test_contracting_map(self):
        g, h = path(3), path(3)
        f = Embedding({0: 0, 1: 2, 2: 1}, 3)
        report = distortion_report(g, h, all_pairs_distances(g), all_pairs_distances(h), f)
        self.assertEqual(report.expansion, 2)
        self.assertEqual(report.contraction, 2)
        self.assertEqual(report.distortion, 4)
        self.assertFalse(report.non_contracting)

    def test_single_vertex(self):
        g = path(1)
        report = distortion_report(g, g, all_pairs_distances(g), all_pairs_distances(g), Embedding({0: 0}, 1))
        self.assertEqual(report.distortion, 1)
        self.assertIsNone(report.expansion_pair)

    def test_partial_map_is_rejected(self):
        with self.assertRaises(PartialityError) as caught:
            distortion_report(self.g, self.h, self.dg, self.dh, Embedding({0: 0}, 4))
        self.assertEqual(caught.exception.missing, [1, 2, 3])

    def test_verify(self):
        f = Embedding({i: 2 * i for i in range(4)}, 4)
        self.assertIsNone(verify_nc_distortion(self.g, self.h, self.dg, self.dh, f, 2))
        violation = verify_nc_distortion(self.g, self.h, self.dg, self.dh, f, 1)
        self.assertEqual((violation.u, violation.v), (0, 1))
        self.assertEqual(violation.kind, 'expansion')
        self.assertIsNotNone(verify_nc_distortion(self.g, self.h, self.dg, self.dh, f, Ratio(3, 2)))

    def test_verify_reports_contraction(self):
        f = Embedding({0: 0, 1: 1, 2: 2, 3: 3}, 4)
        violation = verify_nc_distortion(self.g, self.h, self.dg, self.dh, f, 5)
        self.assertIsNone(violation)
        g = path(3)
        violation = verify_nc_distortion(g, self.h, all_pairs_distances(g), self.dh, Embedding({0: 0, 1: 1, 2: 7}), 5)
        self.assertEqual(violation.kind, 'contraction')
        self.assertEqual((violation.u, violation.v, violation.guest_distance, violation.host_distance), (0, 2, 2, 1))

    def test_verify_bijective(self):
        h = cycle(4)
        self.assertTrue(verify_bijective(Embedding({0: 0, 1: 1, 2: 2, 3: 3}), h))
        self.assertFalse(verify_bijective(Embedding({0: 0, 1: 1, 2: 2}), h))
        self.assertTrue(verify_bijective(Embedding({0: 0, 1: 2}), h, red_set={0, 2}))


class SubdivisionTests(SimpleTestCase):
    def test_subdivided_triangle_is_hexagon(self):
        rb = subdivide_red_blue(cycle(3), 1)
        self.assertEqual(rb.graph.n, 6)
        self.assertEqual(len(rb.graph.edges()), 6)
        self.assertTrue(all(rb.graph.degree(v) == 2 for v in range(6)))
        self.assertEqual(rb.red, frozenset({0, 1, 2}))
        self.assertEqual(rb.blue_run(), 1)
        self.assertEqual(rb.contract(), cycle(3))

    def test_zero_subdivision_keeps_graph(self):
        rb = subdivide_red_blue(path(4), 0)
        self.assertEqual(rb.graph, path(4))
        self.assertEqual(rb.blue, frozenset())
        self.assertEqual(rb.blue_run(), 0)

    def test_blue_run_is_a_subdivision_chain(self):
        rb = subdivide_red_blue(path(3), 2)
        self.assertEqual(len(rb.blue), 4)
        self.assertEqual(rb.blue_run(), 2)

    def test_negative_factor(self):
        with self.assertRaises(InputError):
            subdivide_red_blue(path(2), -1)

    def test_gate_depends_on_blue_runs(self):
        g = path(2)
        self.assertTrue(bijective_reduction_gate(g, subdivide_red_blue(path(2), 2), 2))
        self.assertFalse(bijective_reduction_gate(g, subdivide_red_blue(path(2), 3), 2))


class ReductionTests(SimpleTestCase):
    def test_candidate_contractions(self):
        dg, dh = all_pairs_distances(path(2)), all_pairs_distances(path(3))
        self.assertEqual(candidate_contractions(dg, dh), [Fraction(1, 2), Fraction(1)])

    def test_identity_instance_comes_first(self):
        g, h = cycle(4), cycle(8)
        instances = list(gen_reduction_instances(g, h, 3, 2))
        self.assertEqual(instances[0].host.p, 0)
        self.assertEqual(instances[0].guest_scale, 1)
        self.assertEqual(instances[0].distortion, Ratio(3, 2))
        # сжатие a/b: a - 1 подразбиений, расстояния гостя умножаются на b
        scales = {(r.host.p + 1, r.guest_scale) for r in instances}
        self.assertIn((1, 2), scales)
        self.assertIn((2, 3), scales)

    def test_single_vertex_guest_gets_identity_instance(self):
        instances = list(gen_reduction_instances(path(1), path(2), 3, 2))
        self.assertEqual([(r.host.p, r.guest_scale) for r in instances], [(0, 1)])

    def test_rational_pipeline_single_vertex(self):
        f = solve_rational(path(1), path(2), Ratio(3, 2))
        self.assertEqual(f.mapping, {0: 0})
        self.assertEqual(f.report.scale_free, 1)

    def test_distortion_below_one(self):
        with self.assertRaises(InputError):
            list(gen_reduction_instances(path(2), path(2), 1, 2))

    def test_rational_pipeline_finds_scaled_doubling(self):
        g, h = cycle(4), cycle(8)
        f = solve_rational(g, h, Ratio(3, 2))
        self.assertIsNotNone(f)
        self.assertEqual(f.report.scale_free, 1)
        self.assertEqual(f.report.contraction, Fraction(1, 2))

    def test_rational_pipeline_infeasible(self):
        # у треугольника все расстояния равны, а на пути из трёх вершин - 1, 1 и 2
        self.assertIsNone(solve_rational(cycle(3), path(3), Ratio(3, 2)))


class ArcTests(SimpleTestCase):
    def test_long_empty_arcs(self):
        f = Embedding({0: 0, 1: 2})
        self.assertEqual(long_empty_arcs(f, 8, 3), [(3, 5)])
        self.assertEqual(long_empty_arcs(f, 8, 6), [])
        self.assertEqual(long_empty_arcs(Embedding({}), 5, 2), [(0, 5)])


class DotTests(SimpleTestCase):
    def test_images_are_filled(self):
        text = embedding_to_dot(path(2), path(3), Embedding({0: 0, 1: 2}), red_set={0, 2})
        self.assertTrue(text.startswith('graph H {'))
        self.assertIn('"0" -- "1";', text)
        self.assertIn('"1" [label="1", color=blue];', text)
        self.assertIn('fillcolor=lightgrey', text)
