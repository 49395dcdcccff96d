"""Биективные вложения в хосты ограниченной древесной ширины.

Для узла u хорошей декомпозиции B(u) - объединение шаров радиуса r = dM+1 вокруг мешка.
u-частичное вложение - биекция части гостя на B(u) (пересечённое с красными вершинами).
Для соседа w узла u M[f, w] - вершины вне области определения, чьи образы обязаны лежать
по ту сторону w и дальше B(u); по ребру дерева эти обещания передаются от узла к узлу.
"""
import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product

from .decomposition import decompose, make_nice
from .embeddings import Ratio, as_ratio, union_embedding, verify_bijective, verify_nc_distortion
from .exceptions import BudgetExceeded, ConflictError, ContractViolation, EmbeddingError, InputError
from .graphs import all_pairs_distances, components_after_removal, degree_gate
from .oracle import SearchBudget
from .utilities import parallel_map


logger = logging.getLogger(__name__)


class DecompositionSides:
    """По какую сторону от узла u лежит вершина хоста y (y не в мешке u)."""

    def __init__(self, ntd):
        self.ntd = ntd
        self.tin, self.tout, self.top = {}, {}, {}
        clock = 0
        stack = [(ntd.root, False)]
        while stack:
            u, done = stack.pop()
            if done:
                self.tout[u] = clock - 1
                continue
            self.tin[u] = clock
            clock += 1
            for y in ntd[u].bag:
                # прямой обход: первым встречается верхний узел с y
                self.top.setdefault(y, u)
            stack.append((u, True))
            for c in reversed(ntd[u].children):
                stack.append((c, False))

    def below(self, u, t):
        return self.tin[u] <= self.tin[t] <= self.tout[u]

    def side(self, u, y):
        t = self.top[y]
        if t != u and self.below(u, t):
            return next(c for c in self.ntd[u].children if self.below(c, t))
        return self.ntd[u].parent

    def contains(self, u, w, y):
        """y лежит в H_uw - в мешках части дерева со стороны соседа w."""
        if y in self.ntd[u].bag:
            return y in self.ntd[w].bag
        return self.side(u, y) == w


@dataclass(frozen=True, eq=False)
class TwPartialEmbedding:
    node: int
    pairs: tuple  # (вершина гостя, вершина хоста) по возрастанию гостя
    bag: frozenset
    codomain: frozenset
    distortion: Ratio
    guest_size: int
    levels: dict  # вершина гостя -> расстояние от образа до мешка
    dom_by_side: dict
    m_sets: dict
    sides: DecompositionSides = field(repr=False)

    @property
    def mapping(self):
        return dict(self.pairs)

    @property
    def key(self):
        """Пустые отображения различаются стороной, по которую лежит гость."""
        towards = tuple(w for w, part in sorted(self.m_sets.items()) if part) if not self.pairs else ()
        return self.pairs, towards

    @property
    def domain(self):
        return frozenset(self.levels)

    @property
    def inverse(self):
        return {y: x for x, y in self.pairs}

    def dom(self, p, q=None):
        """Dom^{[p,q]}; Dom^0 - прообраз мешка."""
        q = p if q is None else q
        return frozenset(x for x, k in self.levels.items() if p <= k <= q)

    def dom_side(self, w, p=None, q=None):
        part = self.dom_by_side[w]
        return part if p is None else part & self.dom(p, q)


class TwContext:
    """Всё, что нужно для построения частичных вложений одного экземпляра."""

    def __init__(self, g, dg, h, dh, ntd, d, red_set=None):
        self.g, self.dg, self.h, self.dh, self.ntd = g, dg, h, dh, ntd
        self.d = as_ratio(d)
        self.radius = math.floor(self.d * g.max_weight) + 1
        self.red = frozenset(range(h.n)) if red_set is None else frozenset(red_set)
        self.sides = DecompositionSides(ntd)
        self.codomains = [ball & self.red for ball in ntd.balls(h, dh, self.radius)]
        self.nodes = 0
        self.started = time.monotonic()

    def partial(self, u, mapping, towards=None):
        """towards - для пустого отображения: сосед, по чью сторону лежит весь гость."""
        node = self.ntd[u]
        rows = self.dh.rows
        pairs = tuple(sorted(mapping.items()))
        levels = {x: min((rows[y][b] for b in node.bag), default=0) for x, y in pairs}
        dom_by_side = {w: frozenset(x for x, y in pairs if self.sides.contains(u, w, y))
                       for w in self.ntd.neighbours(u)}
        boundaries = []
        for component in components_after_removal(self.g, levels):
            touching = {a for v in component for a in self.g.adj[v] if a in levels}
            boundaries.append((component, touching))
        m_sets = {w: frozenset().union(*(c for c, touching in boundaries if touching & dom))
                  for w, dom in dom_by_side.items()}
        if not pairs and towards is not None:
            m_sets[towards] = frozenset(range(self.g.n))
        return TwPartialEmbedding(u, pairs, node.bag, self.codomains[u], self.d, self.g.n, levels,
                                  dom_by_side, m_sets, self.sides)

    def restrict(self, u, embedding):
        """Ограничение глобального вложения на прообраз B(u)."""
        codomain = self.codomains[u]
        mapping = {x: y for x, y in embedding.items() if y in codomain}
        towards = None
        if not mapping and len(embedding):
            towards = self.sides.side(u, next(iter(embedding.items()))[1])
        return self.partial(u, mapping, towards)

    def targets(self, u):
        bag = self.ntd[u].bag
        rows = self.dh.rows
        return sorted(self.codomains[u], key=lambda y: (min((rows[y][b] for b in bag), default=0), y))

    def tick(self, budget):
        self.nodes += 1
        if self.nodes > budget.max_nodes or (
                self.nodes & 1023 == 0 and time.monotonic() - self.started > budget.max_seconds):
            raise BudgetExceeded(self.nodes, time.monotonic() - self.started)

    def partials(self, u, budget, onto=True):
        """Все биекции части гостя на B(u) без сжатия и с растяжением <= d (перебор от хоста).
        onto=False - инъекции: любая вершина B(u) может остаться пустой."""
        targets = self.targets(u)
        guest, host = self.dg.rows, self.dh.rows
        num, den = self.d.numerator, self.d.denominator
        n = self.g.n
        assignment = []
        used = set()

        def fits(x, y, a, z):
            gd, hd = guest[x][a], host[y][z]
            return gd <= hd and hd * den <= num * gd

        def extend(i):
            if i == len(targets):
                if assignment:
                    yield self.partial(u, {x: y for y, x in assignment})
                else:
                    for w in self.ntd.neighbours(u):
                        yield self.partial(u, {}, towards=w)
                return
            y = targets[i]
            if assignment:
                # кандидаты - в шаре гостя вокруг прообраза ближайшей занятой вершины
                z, a = min(assignment, key=lambda pair: (host[pair[0]][y], pair[0]))
                pool = [x for x in range(n) if guest[a][x] <= host[z][y]]
            else:
                pool = range(n)
            for x in pool:
                if x in used or not all(fits(x, y, a, z) for z, a in assignment):
                    continue
                self.tick(budget)
                assignment.append((y, x))
                used.add(x)
                yield from extend(i + 1)
                assignment.pop()
                used.discard(x)
            if not onto:
                yield from extend(i + 1)

        yield from extend(0)

    def signature(self, u, c, f):
        shared = sorted(self.codomains[u] & self.codomains[c])
        inverse = f.inverse
        return tuple(inverse.get(y) for y in shared)


def tw_feasible(f, g, dg, dh, bijective=True):
    """Условия допустимости; bijective=False - для общей (инъективной) задачи."""
    images = [y for _, y in f.pairs]
    if len(set(images)) != len(images) or not set(images) <= f.codomain:
        return False
    if bijective and set(images) != f.codomain:
        return False
    num, den = f.distortion.numerator, f.distortion.denominator
    for i, (x, y) in enumerate(f.pairs):
        for a, z in f.pairs[i + 1:]:
            gd, hd = dg[x, a], dh[y, z]
            if hd < gd or hd * den > num * gd:
                return False
    claimed = set()
    for part in f.m_sets.values():
        if claimed & part:
            return False
        claimed |= part
    domain = f.domain
    if any(w not in domain for x in f.dom(0) for w in g.adj[x]):
        return False
    # каждая вершина вне области определения обещана какому-то соседу
    return len(claimed) + len(domain) == g.n


def tw_succeeds(f_u, f_v, kind):
    """f_v (ребёнок) следует за f_u (родитель узла вида kind)."""
    dom_u, dom_v = f_u.domain, f_v.domain
    if kind == 'introduce' and not dom_v <= dom_u:
        return False
    if kind == 'forget' and not dom_u <= dom_v:
        return False
    if kind == 'join' and dom_u != dom_v:
        return False
    map_u, map_v = f_u.mapping, f_v.mapping
    inv_u, inv_v = f_u.inverse, f_v.inverse
    if any(map_u[x] != map_v[x] for x in dom_u & dom_v):
        return False
    if any(inv_u.get(y) != inv_v.get(y) for y in f_u.codomain & f_v.codomain):
        return False
    u, v = f_u.node, f_v.node
    sides = f_u.sides
    for x in dom_u - dom_v:
        if x not in f_v.m_sets[sides.side(v, map_u[x])]:
            return False
    for x in dom_v - dom_u:
        if x not in f_u.m_sets[sides.side(u, map_v[x])]:
            return False
    towards_v, towards_u = f_u.m_sets[v], f_v.m_sets[u]
    for x in range(f_u.guest_size):
        if x in dom_u or x in dom_v:
            continue
        if (x in towards_v) == (x in towards_u):
            return False
    return True


def check_domain_subtrees(ntd, chosen, n):
    """Узлы, в чьих частичных вложениях есть вершина x, образуют поддерево."""
    for x in range(n):
        holders = {u for u, f in chosen.items() if x in f.domain}
        tops = [u for u in holders if ntd[u].parent not in holders]
        if len(tops) != 1:
            raise EmbeddingError(f'guest vertex {x} is covered by a disconnected set of nodes')


def selections(ntd, roots, options):
    """Полные выборы состояний сверху вниз, лексикографически меньшие - раньше.
    options(u, state) -> варианты состояний детей (кортежи по node.children)."""
    stack = [([(ntd.root, s)], {}) for s in reversed(roots)]
    while stack:
        pending, chosen = stack.pop()
        if not pending:
            yield chosen
            continue
        (u, state), rest = pending[0], pending[1:]
        chosen = {**chosen, u: state}
        kids = ntd[u].children
        combos = list(options(u, state)) if kids else [()]
        for combo in reversed(combos):
            stack.append((list(zip(kids, combo)) + rest, chosen))


def bijective_embed_tw(g, h, ntd, d, red_set=None, dg=None, dh=None, budget=None, stats=None):
    """Биекция V(g) -> V(h) (или на red_set) без сжатия с искажением d, либо None."""
    red = frozenset(range(h.n)) if red_set is None else frozenset(red_set)
    if g.n != len(red):
        raise InputError(f'bijective embedding needs {len(red)} guest vertices, got {g.n}', code='size')
    if not g.is_connected():
        raise InputError('guest graph must be connected', code='disconnected')
    d = as_ratio(d)
    if ntd is None:
        ntd = make_nice(decompose(h))
    ntd.validate(h)
    if not degree_gate(g.max_degree, h.max_degree, math.floor(d * g.max_weight)):
        logger.info('tw: guest degree %s too large for host degree %s', g.max_degree, h.max_degree)
        return None
    dg = all_pairs_distances(g) if dg is None else dg
    dh = all_pairs_distances(h) if dh is None else dh
    budget = budget or SearchBudget.from_settings()
    ctx = TwContext(g, dg, h, dh, ntd, d, red)
    if stats is not None:
        stats['search'] = ctx

    tables = {}
    matches = {}
    for u in ntd.postorder():
        node = ntd[u]
        states = sorted((f for f in ctx.partials(u, budget) if tw_feasible(f, g, dg, dh)),
                        key=lambda f: f.key)
        if node.children:
            indexes = []
            for c in node.children:
                index = defaultdict(list)
                for t in tables[c]:
                    index[ctx.signature(u, c, t)].append(t)
                indexes.append(index)

            def evaluate(f):
                found = []
                for c, index in zip(node.children, indexes):
                    succeeding = [t for t in index.get(ctx.signature(u, c, f), ()) if tw_succeeds(f, t, node.kind)]
                    if not succeeding:
                        return None
                    found.append(succeeding)
                return found

            true = []
            for f, found in zip(states, parallel_map(evaluate, states)):
                if found is not None:
                    true.append(f)
                    matches[u, f.key] = found
        else:
            true = states
        logger.debug('tw node %s (%s): %s feasible, %s true', u, node.kind, len(states), len(true))
        if not true:
            logger.info('tw: no true entry at node %s (%s)', u, node.kind)
            return None
        tables[u] = true

    def options(u, f):
        return product(*matches[u, f.key])

    for chosen in selections(ntd, tables[ntd.root], options):
        ctx.tick(budget)
        check_domain_subtrees(ntd, chosen, g.n)
        try:
            f = union_embedding((chosen[u].mapping for u in sorted(chosen)), g.n)
        except (ConflictError, ContractViolation):
            continue
        violation = verify_nc_distortion(g, h, dg, dh, f, d) if f.total else 'partial'
        if verify_bijective(f, h, red) and violation is None:
            logger.info('tw: embedding found after %s search nodes', ctx.nodes)
            return f
        logger.error('tw: reconstructed map fails verification: %s', violation)
    return None
