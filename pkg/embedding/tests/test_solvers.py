from fractions import Fraction

from django.test import SimpleTestCase

from embedding.apps import instance_solved
from embedding.embeddings import Ratio
from embedding.exceptions import InputError
from embedding.graphs import Graph, HostSpec, generate, parse_host_spec
from embedding.oracle import SearchBudget
from embedding.solvers import Instance, choose, solve


def path(n):
    return generate(HostSpec('path', size=n))


def cycle(n):
    return generate(HostSpec('cycle', size=n))


class InstanceTests(SimpleTestCase):
    def test_distortion_is_exact(self):
        instance = Instance(cycle(4), parse_host_spec('cycle:8'), '3/2')
        self.assertEqual(instance.d, Fraction(3, 2))
        self.assertEqual(instance.host.n, 8)
        self.assertEqual(instance.dh[0, 4], 4)

    def test_validation(self):
        with self.assertRaises(InputError):
            Instance(cycle(4), parse_host_spec('cycle:8'), Ratio(1, 2))
        with self.assertRaises(InputError):
            Instance(cycle(4), parse_host_spec('cycle:8'), 1, red={9})


class ChooseTests(SimpleTestCase):
    def instance(self, host, d=1, g=None, **kwargs):
        return Instance(g or path(3), parse_host_spec(host), d, **kwargs)

    def test_auto(self):
        self.assertEqual(choose(self.instance('cycle:8')), 'cycle')
        self.assertEqual(choose(self.instance('path:5')), 'line')
        self.assertEqual(choose(self.instance('theta:3,4')), 'theta')
        self.assertEqual(choose(self.instance('cycle:8', d='3/2')), 'oracle')
        self.assertEqual(choose(self.instance('path:3', bijective=True)), 'tw')

    def test_general_host(self):
        spec = HostSpec('general', graph=cycle(6))
        self.assertEqual(choose(Instance(path(3), spec, 1)), 'ctw')
        weighted = Graph(3, [(0, 1), (1, 2)], {(0, 1): 1, (1, 2): 2})
        self.assertEqual(choose(Instance(weighted, spec, 1)), 'oracle')

    def test_rejections(self):
        cases = [
            (self.instance('path:5'), 'cycle'),
            (self.instance('cycle:8'), 'theta'),
            (self.instance('cycle:8'), 'tw'),
            (self.instance('path:3', bijective=True), 'ctw'),
            (self.instance('cycle:8', d='3/2'), 'cycle'),
            (self.instance('cycle:8'), 'nope'),
            (self.instance('theta:3,4', g=Graph(2, [(0, 1)], {(0, 1): 2})), 'theta'),
        ]
        for instance, solver in cases:
            with self.subTest(solver=solver), self.assertRaises(InputError):
                choose(instance, solver)

    def test_explicit(self):
        self.assertEqual(choose(self.instance('cycle:8'), 'oracle'), 'oracle')
        self.assertEqual(choose(self.instance('cycle:8'), 'ctw'), 'ctw')


class SolveTests(SimpleTestCase):
    def setUp(self):
        self.events = []
        instance_solved.connect(self.record)

    def tearDown(self):
        instance_solved.disconnect(self.record)

    def record(self, sender, **kwargs):
        self.events.append(kwargs)

    def test_square_into_octagon(self):
        outcome = solve(Instance(cycle(4), parse_host_spec('cycle:8'), 2))
        self.assertEqual((outcome.verdict, outcome.solver), ('found', 'cycle'))
        self.assertEqual(str(outcome.embedding.report.distortion), '2/1')
        self.assertEqual(self.events[-1]['verdict'], 'found')
        self.assertEqual(self.events[-1]['solver'], 'cycle')

    def test_infeasible(self):
        outcome = solve(Instance(cycle(4), parse_host_spec('cycle:8'), 1))
        self.assertEqual(outcome.verdict, 'infeasible')
        self.assertIsNone(outcome.embedding)

    def test_solvers_agree(self):
        instance = Instance(cycle(4), parse_host_spec('cycle:8'), 2)
        for solver in ('cycle', 'oracle'):
            with self.subTest(solver=solver):
                outcome = solve(instance, solver)
                self.assertEqual(outcome.verdict, 'found')
                self.assertLessEqual(outcome.embedding.report.distortion, 2)

    def test_node_counts(self):
        instance = Instance(cycle(4), parse_host_spec('cycle:8'), 2)
        self.assertGreater(solve(instance, 'oracle').nodes, 0)
        self.assertEqual(solve(instance, 'cycle').nodes, 0)
        ctw = solve(Instance(path(3), HostSpec('general', graph=cycle(6)), 1), 'ctw')
        self.assertEqual(ctw.verdict, 'found')
        self.assertGreater(ctw.nodes, 0)
        self.assertIsNotNone(ctw.search.cnd)

    def test_budget(self):
        outcome = solve(Instance(cycle(4), parse_host_spec('cycle:8'), 1), 'oracle', budget=SearchBudget(1, 60.0))
        self.assertEqual(outcome.verdict, 'budget')
        self.assertIsNone(outcome.embedding)
        self.assertEqual(self.events[-1]['verdict'], 'budget')

    def test_bijective(self):
        outcome = solve(Instance(path(4), parse_host_spec('path:4'), 1, bijective=True))
        self.assertEqual((outcome.verdict, outcome.solver), ('found', 'tw'))
        self.assertEqual(outcome.embedding.image(), frozenset(range(4)))
        outcome = solve(Instance(path(4), parse_host_spec('cycle:4'), 1, bijective=True))
        self.assertEqual(outcome.verdict, 'infeasible')

    def test_fractional_distortion(self):
        outcome = solve(Instance(cycle(4), parse_host_spec('cycle:8'), '3/2'))
        self.assertEqual((outcome.verdict, outcome.solver), ('found', 'oracle'))
        self.assertEqual(outcome.embedding.report.scale_free, 1)

    def test_fractional_bijective(self):
        outcome = solve(Instance(path(3), parse_host_spec('path:3'), '3/2', bijective=True))
        self.assertEqual((outcome.verdict, outcome.solver), ('found', 'tw'))
        self.assertLessEqual(outcome.embedding.report.scale_free, Fraction(3, 2))

    def test_theta(self):
        outcome = solve(Instance(cycle(6), parse_host_spec('theta:3,3,3'), 1))
        self.assertEqual((outcome.verdict, outcome.solver), ('found', 'theta'))

    def test_weighted_guest_on_cycle(self):
        weighted = Graph(3, [(0, 1), (1, 2)], {(0, 1): 2, (1, 2): 2})
        outcome = solve(Instance(weighted, parse_host_spec('cycle:8'), 1))
        self.assertEqual(outcome.verdict, 'found')
