"""Вложения в обобщённые тета-графы.

Вокруг полюсов s и t берутся шары радиуса d (B_s, B_t) и 2d^2 (B_s', B_t'). Отображение Ψ
прообраза больших шаров перебирается явно, свободные части коротких плеч угадываются
вместе с ним. Остальные вершины гостя образуют компоненты G - U (U - прообраз малых шаров),
и каждая из них целиком ложится на одно плечо: компонента, привязанная к одному полюсу,
кладётся кратчайшим способом при угаданной последней вершине, привязанная к обоим -
в отрезок с закреплёнными концами. Каждая сборка проверяется целиком.
"""
import logging
import math
import time
from dataclasses import dataclass
from functools import partial
from itertools import islice, product
from typing import NamedTuple

from .embeddings import Embedding, as_ratio, union_embedding, verify_nc_distortion
from .exceptions import BudgetExceeded, ConflictError, ContractViolation, InputError
from .graphs import HostSpec, all_pairs_distances, ball, components_after_removal, degree_gate, generate, theta_arm_vertices
from .line_cycle import embed_into_cycle
from .oracle import SearchBudget, brute_force_embed
from .utilities import first_success, setting
from .windows import WindowSearch


logger = logging.getLogger(__name__)

FORM_S, FORM_T, FORM_ST, FORM_FULL, FORM_EMPTY = 1, 2, 3, 4, 5

# отсортированные роли компонент плеча -> форма
FORMS = {
    (): FORM_EMPTY,
    ('s',): FORM_S,
    ('t',): FORM_T,
    ('s', 't'): FORM_ST,
    ('full',): FORM_FULL,
}


class ThetaHost:
    """Тета-граф; arms - последовательности вершин плеч от s до t."""

    def __init__(self, graph, arms, s=0, t=1):
        self.graph = graph
        self.arms = tuple(tuple(arm) for arm in arms)
        self.s, self.t = s, t
        self.dh = all_pairs_distances(graph)
        self.where = {x: (i, j) for i, arm in enumerate(self.arms) for j, x in enumerate(arm) if x not in (s, t)}
        self.d = None

    @classmethod
    def from_arms(cls, lengths):
        spec = HostSpec('theta', arms=tuple(lengths))
        return cls(generate(spec), theta_arm_vertices(spec.arms))

    def __repr__(self):
        return f'<ThetaHost {",".join(map(str, self.lengths))}>'

    @property
    def k(self):
        return len(self.arms)

    @property
    def lengths(self):
        return tuple(len(arm) - 1 for arm in self.arms)

    def distance(self, x, y):
        return self.dh.rows[x][y]

    def compute_balls(self, d):
        d = as_ratio(d)
        self.d = d
        self.radius = math.floor(d)
        self.wide = math.floor(2 * d * d)
        self.ball_s = ball(self.dh, self.s, self.radius)
        self.ball_t = ball(self.dh, self.t, self.radius)
        self.ball_s2 = ball(self.dh, self.s, self.wide)
        self.ball_t2 = ball(self.dh, self.t, self.wide)
        core = self.ball_s | self.ball_t
        outer = self.ball_s2 | self.ball_t2
        self.truncated = tuple(tuple(x for x in arm if x not in core) for arm in self.arms)  # P_i'
        self.free_parts = tuple(tuple(x for x in arm if x not in outer) for arm in self.arms)  # P_i''
        self.ends = tuple((part[0], part[-1]) if part else None for part in self.free_parts)
        threshold = 4 * d * d + 2 * d
        self.short = frozenset(i for i, length in enumerate(self.lengths) if length < threshold)
        return self

    def ensure_balls(self, d):
        if self.d != as_ratio(d):
            self.compute_balls(d)
        return self

    @property
    def overlapping(self):
        return bool(self.ball_s2 & self.ball_t2)

    @property
    def core(self):
        return self.ball_s | self.ball_t

    @property
    def long_arms(self):
        return tuple(i for i in range(self.k) if i not in self.short and self.free_parts[i])

    def side(self, x):
        if x in self.ball_s2:
            return 's'
        if x in self.ball_t2:
            return 't'
        return None

    def pole(self, side):
        return self.s if side == 's' else self.t

    def line(self, i, side):
        """Плечо i, прочитанное от полюса side."""
        return self.arms[i] if side == 's' else self.arms[i][::-1]

    def cycle_order(self):
        """Для k = 2: вершины хоста в порядке обхода цикла от s."""
        first, second = self.arms
        return list(first) + list(reversed(second[1:-1]))


class ResidualComponent(NamedTuple):
    vertices: frozenset
    free: frozenset  # вершины вне Ψ
    role: str  # 's', 't' или 'full'
    arm: int


@dataclass(frozen=True)
class ArmPlan:
    arm: int
    form: int
    components: tuple


@dataclass(frozen=True)
class ThetaConfiguration:
    psi: tuple  # пары (вершина гостя, вершина хоста)
    empty: frozenset  # плечи, на которых за шарами ничего нет
    plans: tuple

    def __post_init__(self):
        for plan in self.plans:
            roles = tuple(sorted(c.role for c in plan.components))
            if FORMS.get(roles) != plan.form:
                raise InputError(f'arm {plan.arm}: form {plan.form} does not match roles {roles}', code='config')


def _fits(rows, host, num, den):
    def fits(v, x, w, y):
        gd, hd = rows[v][w], host(x, y)
        return gd <= hd and hd * den <= num * gd
    return fits


def enumerate_psi(g, dg, host, d, tick=None):
    """Все Ψ: инъекции части гостя в B_s' ∪ B_t' без сжатия и с растяжением <= d.

    Наименьшая вершина, попавшая в B_s' (в B_t'), - центр: остальные такие вершины лежат
    в шаре гостя радиуса 4d^2 вокруг неё, так что каждое Ψ порождается ровно один раз.
    Соседи вершин, попавших в B_s ∪ B_t, обязаны быть в области определения Ψ."""
    d = as_ratio(d)
    host.ensure_balls(d)
    rows = dg.rows
    fits = _fits(rows, host.distance, d.numerator, d.denominator)
    points = {'s': sorted(host.ball_s2), 't': sorted(host.ball_t2 - host.ball_s2)}
    core = host.core
    reach = math.floor(4 * d * d)
    n = g.n

    for cs in [None, *range(n)]:
        for ct in [None, *range(n)]:
            if cs is not None and cs == ct:
                continue
            pools = {}
            centers = {}
            if cs is not None:
                pools['s'] = frozenset(v for v in range(cs, n) if rows[cs][v] <= reach)
                centers[cs] = 's'
            if ct is not None:
                if not points['t']:
                    continue
                pools['t'] = frozenset(v for v in range(ct, n) if rows[ct][v] <= reach)
                centers[ct] = 't'
            order = sorted(frozenset().union(*pools.values()))
            assignment = {}
            used = set()

            def extend(i):
                if i == len(order):
                    if all(w in assignment for v, x in assignment.items() if x in core for w in g.adj[v]):
                        yield dict(assignment)
                    return
                v = order[i]
                if v not in centers:
                    yield from extend(i + 1)
                for side, pool in pools.items():
                    if v not in pool or centers.get(v, side) != side:
                        continue
                    for x in points[side]:
                        if x in used or not all(fits(v, x, w, y) for w, y in assignment.items()):
                            continue
                        if tick is not None:
                            tick()
                        assignment[v] = x
                        used.add(x)
                        yield from extend(i + 1)
                        del assignment[v]
                        used.discard(x)

            yield from extend(0)


def short_arm_guesses(g, dg, host, psi, d):
    """Продолжения Ψ на свободные части коротких плеч: каждая такая вершина хоста
    пуста или занята вершиной гостя, согласованной со всем уже размещённым."""
    d = as_ratio(d)
    host.ensure_balls(d)
    fits = _fits(dg.rows, host.distance, d.numerator, d.denominator)
    points = [x for i in sorted(host.short) for x in host.free_parts[i]]
    assignment = dict(psi)

    def extend(i):
        if i == len(points):
            yield dict(assignment)
            return
        yield from extend(i + 1)
        x = points[i]
        for v in range(g.n):
            if v in assignment or not all(fits(v, x, w, y) for w, y in assignment.items()):
                continue
            assignment[v] = x
            yield from extend(i + 1)
            del assignment[v]

    yield from extend(0)


def classify_components(g, psi, host):
    """Компоненты G - U, не поместившиеся в Ψ, с ролью и плечом; None - Ψ противоречиво."""
    core = host.core
    removed = {v for v, x in psi.items() if x in core}
    result = []
    for component in components_after_removal(g, removed):
        free = component - set(psi)
        if not free:
            continue
        anchored = [v for v in component if v in psi]
        if not anchored:
            return None
        arms = {host.where[psi[v]][0] for v in anchored}
        if len(arms) != 1:
            return None
        arm = arms.pop()
        if arm not in host.long_arms:
            # свободная часть плеча уже угадана целиком
            return None
        sides = {host.side(psi[v]) for v in anchored}
        if None in sides:
            return None
        role = 'full' if len(sides) == 2 else sides.pop()
        result.append(ResidualComponent(frozenset(component), frozenset(free), role, arm))
    return result


def enumerate_configurations(g, psi, host, d):
    """Раскладки остаточных компонент по плечам. Плечо компоненты определяется образами
    её вершин из Ψ, поэтому раскладка не больше одной."""
    host.ensure_balls(d)
    components = classify_components(g, psi, host)
    if components is None:
        return []
    if len(components) > 2 * host.k:
        logger.debug('theta: %s residual components for %s arms', len(components), host.k)
        return []
    by_arm = {}
    for component in components:
        by_arm.setdefault(component.arm, []).append(component)
    plans = []
    for arm, listed in sorted(by_arm.items()):
        listed.sort(key=lambda c: (c.role, min(c.vertices)))
        form = FORMS.get(tuple(c.role for c in listed))
        if form is None:
            return []
        plans.append(ArmPlan(arm, form, tuple(listed)))
    empty = frozenset(range(host.k)) - set(by_arm)
    configurations = [ThetaConfiguration(tuple(sorted(psi.items())), empty, tuple(plans))]
    if len(configurations) > host.k ** (2 * host.k):
        logger.error('theta: %s configurations exceed k^2k', len(configurations))
    return configurations


def last_vertex_candidates(component, a, dg, d):
    """Вершины компоненты, достаточно далёкие от a, чтобы оказаться последними на плече:
    не ближе max - d^2 или не ближе max / d."""
    d = as_ratio(d)
    row = dg.rows[a]
    far = max(row[v] for v in component)
    return frozenset(v for v in component if row[v] >= far - d * d or row[v] * d >= far)


class ThetaSearch:
    """Размещение остаточных компонент при фиксированном Ψ."""

    def __init__(self, g, dg, host, d, budget=None, max_paths=None):
        self.g, self.dg, self.host = g, dg, host
        self.d = as_ratio(d)
        host.ensure_balls(self.d)
        self.r = math.floor(self.d) + 1
        self.budget = budget or SearchBudget.from_settings()
        self.max_paths = setting('EMBED_THETA_MAX_PATHS') if max_paths is None else max_paths
        self.nodes = 0
        self.started = time.monotonic()

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes or (
                self.nodes & 1023 == 0 and time.monotonic() - self.started > self.budget.max_seconds):
            raise BudgetExceeded(self.nodes, time.monotonic() - self.started)

    def window(self, psi, vertices, slots, last=None):
        return WindowSearch(self.g, self.dg, self.d, self.r, psi, slots, self.host.distance,
                            universe=frozenset(vertices) | frozenset(psi), last_vertex=last, budget=self.budget)

    def placements(self, search):
        return list(islice(search.placements(max_paths=self.max_paths), self.max_paths))

    def full_placements(self, psi, component):
        return self.placements(self.window(psi, component.vertices, self.host.free_parts[component.arm]))

    def shortest_placements(self, psi, component, last):
        """(длина, размещения) для наименьшей длины отрезка плеча от полюса, на которой
        компонента укладывается с последней вершиной last; (None, []) - не укладывается."""
        host = self.host
        line = host.line(component.arm, component.role)
        start = host.wide + 1
        for length in range(start + len(component.free), len(line) - host.wide):
            self.tick()
            found = self.placements(self.window(psi, component.vertices, line[start:length], last=last))
            if found:
                return length, found
        return None, []

    def anchor_of(self, psi, component):
        """Вершина компоненты из Ψ со стороны её полюса, ближайшая к свободной части плеча."""
        pole = self.host.pole(component.role)
        anchored = [v for v in component.vertices if v in psi and self.host.side(psi[v]) == component.role]
        return max(anchored, key=lambda v: (self.host.distance(pole, psi[v]), -v))

    def component_placements(self, psi, component):
        if component.role == 'full':
            return self.full_placements(psi, component)
        a = self.anchor_of(psi, component)
        result = []
        for last in sorted(last_vertex_candidates(component.free, a, self.dg, self.d)):
            _, found = self.shortest_placements(psi, component, last)
            result.extend(found)
        return result

    def assemble(self, psi, options):
        for chosen in product(*options):
            self.tick()
            try:
                f = union_embedding([psi, *chosen], self.g.n)
            except (ConflictError, ContractViolation):
                continue
            if f.total and verify_nc_distortion(self.g, self.host.graph, self.dg, self.host.dh, f, self.d) is None:
                return f
        return None

    def solve(self, configuration):
        psi = dict(configuration.psi)
        options = []
        for plan in configuration.plans:
            for component in plan.components:
                found = self.component_placements(psi, component)
                if not found:
                    return None
                options.append(found)
        return self.assemble(psi, options)

    def floating(self, arm):
        """Весь гость в свободной части одного плеча, шары пусты."""
        search = self.window({}, range(self.g.n), self.host.free_parts[arm])
        return self.assemble({}, [self.placements(search)])


def shortest_component_embedding(g, dg, host, psi, component, last, d, budget=None):
    """Кратчайшее размещение s- или t-компоненты с последней вершиной last (частичное вложение)."""
    d = as_ratio(d)
    search = ThetaSearch(g, dg, host, d, budget=budget)
    _, found = search.shortest_placements(dict(psi), component, last)
    for placement in found:
        items = sorted(placement.items())
        if all(dg[u, v] <= host.distance(x, y) <= d * dg[u, v]
               for i, (u, x) in enumerate(items) for v, y in items[i + 1:]):
            return Embedding(placement, g.n)
    return None


def cycle_cross_check(g, dg, host, d, found, budget=None):
    """При k = 2 хост - цикл; True, если вердикт решателя для цикла совпал с found."""
    order = host.cycle_order()
    other = embed_into_cycle(g, dg, len(order), int(d), budget=budget)
    agreed = (other is None) == (found is None)
    if not agreed:
        logger.error('theta and cycle solvers disagree on %r, d=%s: theta %s, cycle %s',
                     host, d, found, other is not None and other.relabel(order))
    return agreed


def embed_into_theta(g, dg, h, d, budget=None, cross_check=False, stats=None):
    if not g.is_connected():
        raise InputError('guest graph must be connected', code='disconnected')
    if g.is_weighted:
        raise InputError('weighted guests are not supported by this solver', code='weighted')
    d = as_ratio(d)
    if d < 1:
        raise InputError('distortion must be >= 1', code='distortion')
    dg = all_pairs_distances(g) if dg is None else dg
    h.ensure_balls(d)
    budget = budget or SearchBudget.from_settings()
    found = _embed(g, dg, h, d, budget, stats)
    if cross_check and h.k == 2 and d.denominator == 1:
        cycle_cross_check(g, dg, h, d, found, budget)
    return found


def _embed(g, dg, h, d, budget, stats):
    if g.n > h.graph.n:
        return None
    if g.n == 1:
        return Embedding({0: h.s}, 1)
    if g.max_degree > (h.k + 1) * d or not degree_gate(g.max_degree, h.graph.max_degree, math.floor(d)):
        logger.info('theta: guest degree %s too large for %r at d=%s', g.max_degree, h, d)
        return None
    if h.overlapping:
        logger.info('theta: balls of radius %s around s and t meet, using exhaustive search', h.wide)
        return brute_force_embed(g, dg, h.graph, h.dh, d, budget=budget, node_counter=_counter(stats))

    search = ThetaSearch(g, dg, h, d, budget=budget)
    if stats is not None:
        stats['search'] = search
    logger.info('theta: %r, d=%s, short arms %s', h, d, sorted(h.short))

    def tasks():
        for psi in enumerate_psi(g, dg, h, d, tick=search.tick):
            for anchored in short_arm_guesses(g, dg, h, psi, d):
                if not anchored:
                    for arm in h.long_arms:
                        yield partial(search.floating, arm)
                    continue
                for configuration in enumerate_configurations(g, anchored, h, d):
                    yield partial(search.solve, configuration)

    found = first_success(tasks())
    logger.info('theta: %s after %s search nodes', 'found' if found is not None else 'infeasible', search.nodes)
    return found


def _counter(stats):
    if stats is None:
        return None

    def count(nodes):
        stats['nodes'] = nodes
    return count
