"""Выбор решателя по семейству хоста и флагам, учёт времени и сигнал instance_solved."""
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

from .apps import instance_solved
from .ctw import embed_ctw
from .decomposition import connectify, make_nice
from .embeddings import (Embedding, as_ratio, bijective_reduction_gate, distortion_report,
                         gen_reduction_instances, solve_rational)
from .exceptions import BudgetExceeded, InputError
from .graphs import Graph, all_pairs_distances, generate
from .line_cycle import embed_into_cycle, embed_into_line, embed_weighted_into_cycle
from .oracle import SearchBudget, brute_force_embed
from .theta import ThetaHost, embed_into_theta
from .treewidth import bijective_embed_tw
from .utilities import stopwatch


logger = logging.getLogger(__name__)

SOLVERS = ('auto', 'cycle', 'line', 'tw', 'ctw', 'theta', 'oracle')

# семейства хостов, для которых решатель определён
FAMILIES = {
    'cycle': {'cycle'},
    'line': {'path'},
    'theta': {'theta'},
}


@dataclass
class Instance:
    g: Graph
    spec: object  # HostSpec
    d: object  # Ratio
    bijective: bool = False
    red: frozenset = None
    td: object = None  # TreeDecomposition из файла --td
    labels: list = None
    host: Graph = field(default=None, repr=False)
    dg: object = field(default=None, repr=False)
    dh: object = field(default=None, repr=False)

    def __post_init__(self):
        self.d = as_ratio(self.d)
        if self.d < 1:
            raise InputError('distortion must be >= 1', code='distortion')
        self.host = generate(self.spec) if self.host is None else self.host
        if self.red is not None:
            self.red = frozenset(self.red)
            if not self.red <= frozenset(range(self.host.n)):
                raise InputError('red vertices outside the host', code='red')
        self.dg = all_pairs_distances(self.g) if self.dg is None else self.dg
        self.dh = all_pairs_distances(self.host) if self.dh is None else self.dh


class Outcome(NamedTuple):
    verdict: str  # found | infeasible | budget
    embedding: Embedding
    solver: str
    nodes: int
    millis: int
    search: object = None  # контекст решателя для диагностики


def choose(instance, solver='auto'):
    if solver not in SOLVERS:
        raise InputError(f'unknown solver {solver!r}', code='solver')
    family = instance.spec.family
    if solver == 'auto':
        if instance.bijective:
            return 'tw'
        if instance.d.denominator != 1:
            return 'oracle'
        if family == 'cycle':
            return 'cycle'
        if family == 'path':
            return 'line'
        if family == 'theta':
            return 'theta'
        return 'oracle' if instance.g.is_weighted else 'ctw'
    if solver in FAMILIES and family not in FAMILIES[solver]:
        raise InputError(f'solver {solver} needs a {"/".join(sorted(FAMILIES[solver]))} host', code='solver')
    if solver == 'tw' and not instance.bijective:
        raise InputError('the tw solver decides the bijective problem; pass --bijective', code='solver')
    if instance.bijective and solver not in ('tw', 'oracle'):
        raise InputError(f'solver {solver} has no bijective variant', code='solver')
    if instance.d.denominator != 1 and solver != 'oracle' and not instance.bijective:
        # дробное d решается через подразбиение хоста, а там хост - произвольный граф
        raise InputError('fractional distortion needs the oracle solver or --bijective', code='solver')
    if instance.g.is_weighted and solver not in ('cycle', 'line', 'oracle', 'tw'):
        raise InputError(f'solver {solver} does not accept weighted guests', code='weighted')
    return solver


def _scaled_guest(g, scaled):
    """Гость с весами рёбер, равными масштабированным расстояниям."""
    weights = {(u, v): int(scaled[u, v]) for u, v in g.edges()}
    return Graph(g.n, g.edges(), weights=weights)


def _rational(instance, name, budget, stats):
    """Дробное d: экземпляры с подразбиенным хостом, на каждом - несжимающая задача в красные вершины."""
    g, host = instance.g, instance.host

    def count(nodes):
        stats['nodes'] = stats.get('nodes', 0) + nodes

    if not instance.bijective:
        def solver(guest, scaled, h, h_dm, d, codomain):
            return brute_force_embed(guest, scaled, h, h_dm, d, codomain=codomain, budget=budget, node_counter=count)
        return solve_rational(g, host, instance.d, instance.dg, instance.dh, solver=solver, budget=None)

    # биективный вариант: красные вершины - образ, синие цепочки не длиннее d
    red = instance.red if instance.red is not None else frozenset(range(host.n))
    for reduced in gen_reduction_instances(g, host, instance.d.numerator, instance.d.denominator,
                                           instance.dg, instance.dh):
        rb = reduced.host
        if not bijective_reduction_gate(g, rb, instance.d):
            continue
        scaled = reduced.guest_distances(instance.dg)
        guest = _scaled_guest(g, scaled) if reduced.guest_scale > 1 else g
        codomain = frozenset(x for x in rb.red if x in red)
        h_dm = all_pairs_distances(rb.graph)
        if name == 'oracle':
            found = brute_force_embed(guest, scaled, rb.graph, h_dm, instance.d, bijective=True,
                                      codomain=codomain, budget=budget, node_counter=count)
        elif g.n == len(codomain):
            found = bijective_embed_tw(guest, rb.graph, None, instance.d, red_set=codomain, dg=scaled,
                                       dh=h_dm, budget=budget)
        else:
            found = None
        if found is not None:
            f = Embedding(found.mapping, g.n)
            report = distortion_report(g, host, instance.dg, instance.dh, f)
            if report.scale_free <= instance.d:
                f.report = report
                return f
    return None


def _recorder(stats):
    def record(nodes):
        stats['nodes'] = nodes
    return record


def _integral(instance, name, budget, stats, cross_check):
    g, dg, host, dh, d = instance.g, instance.dg, instance.host, instance.dh, instance.d
    spec = instance.spec
    if name == 'cycle':
        if g.is_weighted:
            return embed_weighted_into_cycle(g, dg, spec.size, int(d), budget=budget)
        return embed_into_cycle(g, dg, spec.size, int(d), budget=budget)
    if name == 'line':
        return embed_into_line(g, dg, spec.size, int(d), budget=budget)
    if name == 'theta':
        return embed_into_theta(g, dg, ThetaHost.from_arms(spec.arms), d, budget=budget,
                                cross_check=cross_check, stats=stats)
    if name == 'tw':
        ntd = None if instance.td is None else make_nice(instance.td)
        return bijective_embed_tw(g, host, ntd, d, red_set=instance.red, dg=dg, dh=dh, budget=budget, stats=stats)
    if name == 'ctw':
        cnd = None if instance.td is None else connectify(instance.td, host, dh)
        return embed_ctw(g, host, cnd, d, dg=dg, dh=dh, budget=budget, stats=stats)
    codomain = instance.red if instance.bijective else None
    return brute_force_embed(g, dg, host, dh, d, bijective=instance.bijective, codomain=codomain,
                             budget=budget, node_counter=_recorder(stats))


def solve(instance, solver='auto', budget=None, cross_check=False):
    """Решает экземпляр выбранным решателем; BudgetExceeded превращается в вердикт 'budget'."""
    name = choose(instance, solver)
    budget = budget or SearchBudget.from_settings()
    stats = {}
    with stopwatch() as elapsed:
        try:
            if instance.d.denominator != 1:
                found = _rational(instance, name, budget, stats)
            else:
                found = _integral(instance, name, budget, stats, cross_check)
            verdict = 'found' if found is not None else 'infeasible'
        except BudgetExceeded as exc:
            logger.info('%s: %s', name, exc)
            found, verdict = None, 'budget'
            stats.setdefault('nodes', exc.nodes)
        millis = elapsed()
    if found is not None and found.report is None:
        found.report = distortion_report(instance.g, instance.host, instance.dg, instance.dh, found)
    search = stats.get('search')
    nodes = search.nodes if search is not None else stats.get('nodes', 0)
    instance_solved.send(sender=solve, solver=name, verdict=verdict, nodes=nodes, millis=millis)
    return Outcome(verdict, found, name, nodes, millis, search)
