"""Инъективные вложения в хосты со связной древесной декомпозицией.

К частичным вложениям из treewidth добавляются типы: для вершины z, чей образ лежит
по сторону соседа v, и вершины y из Dom(v) тип хранит D_H(F(z), a) - D_G(z, y) для каждой
вершины мешка a, обрезанное функцией beta. Списки типов в сторону детей собираются
снизу вверх переносом из состояний детей, затем выбор восстанавливается перебором
с окончательной проверкой.
"""
import logging
import math
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import networkx as nx

from .decomposition import connectify, decompose
from .embeddings import Embedding, as_ratio, union_embedding, verify_nc_distortion
from .exceptions import ConflictError, ContractViolation, InputError
from .graphs import all_pairs_distances, degree_gate
from .oracle import SearchBudget
from .treewidth import TwContext, selections, tw_feasible, tw_succeeds
from .utilities import parallel_map


logger = logging.getLogger(__name__)

INFINITY = math.inf


def beta(k, gamma, d):
    return k if k < 2 * gamma + 3 * d + 3 else INFINITY


class TypeVector(NamedTuple):
    bag: tuple
    domain: tuple
    values: tuple  # values[i][j] = t^{bag[i]}(domain[j])


def vertex_type(f, w, z, image, dg, dh, gamma):
    """Тип вершины z с образом image относительно Dom_f(w)."""
    d = math.ceil(f.distortion)
    bag = tuple(sorted(f.bag))
    domain = tuple(sorted(f.dom_side(w)))
    host, guest = dh.rows[image], dg.rows[z]
    return TypeVector(bag, domain, tuple(tuple(beta(host[a] - guest[y], gamma, d) for y in domain) for a in bag))


def compatible(type_list, f, v, dg, dh, gamma):
    mapping = f.mapping
    return all(vertex_type(f, v, x, mapping[x], dg, dh, gamma) in type_list for x in f.dom_side(v))


def agree(first, second, dg):
    """Для каждой пары типов найдутся x, y с t1(x) + t2(y) >= D_G(x, y) сразу для всех вершин мешка."""
    rows = dg.rows
    for t1 in first:
        for t2 in second:
            k = len(t1.bag)
            if not any(all(t1.values[i][jx] + t2.values[i][jy] >= rows[x][y] for i in range(k))
                       for jx, x in enumerate(t1.domain) for jy, y in enumerate(t2.domain)):
                return False
    return True


def _covered(t, type_list):
    # бесконечность после переноса ничего не утверждает
    return any(all(a == b or a == INFINITY for ra, rb in zip(t.values, s.values) for a, b in zip(ra, rb))
               for s in type_list)


class CtwContext(TwContext):
    def __init__(self, g, dg, h, dh, cnd, d):
        super().__init__(g, dg, h, dh, cnd.ntd, d)
        self.cnd = cnd
        self.gamma = cnd.gamma

    def type_of(self, f, w, z, image):
        return vertex_type(f, w, z, image, self.dg, self.dh, self.gamma)

    def transfer(self, t1, target, side):
        """Тип соседнего узла, пересчитанный на мешок target и Dom_target(side)."""
        d = math.ceil(self.d)
        bag = tuple(sorted(target.bag))
        domain = tuple(sorted(target.dom_side(side)))
        source = {a: i for i, a in enumerate(t1.bag)}
        position = {y: j for j, y in enumerate(t1.domain)}
        host, guest = self.dh.rows, self.dg.rows

        def through(a, j):
            # путь от образа к a проходит через мешок соседа
            if a in source:
                return t1.values[source[a]][j]
            return min((host[a][b] + t1.values[i][j] for b, i in source.items()), default=INFINITY)

        values = []
        for a in bag:
            row = []
            for x in domain:
                if x in position:
                    value = through(a, position[x])
                else:
                    value = max((through(a, j) - guest[x][y] for y, j in position.items()), default=INFINITY)
                row.append(beta(value, self.gamma, d))
            values.append(tuple(row))
        return TypeVector(bag, domain, tuple(values))

    def down_lists(self, f, child):
        """Список типов в сторону ребёнка: свои вершины, вершины ребёнка вне B(u) и перенос снизу."""
        u, c = f.node, child.f.node
        own = f.dom_side(c)
        types = {self.type_of(f, c, z, y) for z, y in f.pairs if z in own}
        types.update(self.type_of(f, c, z, y) for z, y in child.f.pairs
                     if z not in f.levels and self.sides.contains(u, c, y))
        for w, listed in child.lists.items():
            if w != u:
                types.update(self.transfer(t, f, c) for t in listed)
        return frozenset(types)


@dataclass(frozen=True, eq=False)
class State:
    f: object  # TwPartialEmbedding
    lists: dict  # сосед -> frozenset(TypeVector)
    context: CtwContext = field(repr=False)

    @property
    def key(self):
        return self.f.key, frozenset(self.lists.items())

    def is_feasible(self):
        ctx = self.context
        if not all(compatible(listed, self.f, w, ctx.dg, ctx.dh, ctx.gamma) for w, listed in self.lists.items()):
            return False
        sides = sorted(self.lists)
        return all(agree(self.lists[v], self.lists[w], ctx.dg)
                   for i, v in enumerate(sides) for w in sides[i + 1:])


def state_succeeds(s_u, s_v, kind):
    """Условия следования; перенос в сторону, для которой у состояния нет списка, не проверяется."""
    if not tw_succeeds(s_u.f, s_v.f, kind):
        return False
    ctx = s_u.context
    u, v = s_u.f.node, s_v.f.node
    if v in s_u.lists:
        for w, listed in s_v.lists.items():
            if w != u and not all(_covered(ctx.transfer(t, s_u.f, v), s_u.lists[v]) for t in listed):
                return False
    if u in s_v.lists:
        for w, listed in s_u.lists.items():
            if w != v and not all(_covered(ctx.transfer(t, s_v.f, u), s_v.lists[u]) for t in listed):
                return False
    return True


def derive_state(ctx, u, embedding):
    """Состояние, которое глобальное вложение задаёт в узле u (списки для всех соседей)."""
    f = ctx.restrict(u, embedding)
    lists = {w: frozenset(ctx.type_of(f, w, z, y) for z, y in embedding.items() if ctx.sides.contains(u, w, y))
             for w in ctx.ntd.neighbours(u)}
    return State(f, lists, ctx)


def geodesic_cycle_length(h):
    """Длина самого длинного индуцированного цикла (0 для леса)."""
    return max((len(cycle) for cycle in nx.chordless_cycles(h.to_networkx())), default=0)


def embed_ctw(g, h, cnd, d, dg=None, dh=None, budget=None, stats=None):
    if not g.is_connected():
        raise InputError('guest graph must be connected', code='disconnected')
    if g.is_weighted:
        raise InputError('weighted guests are not supported by this solver', code='weighted')
    d = as_ratio(d)
    if g.n > h.n:
        return None
    if g.n == 1:
        return Embedding({0: 0}, 1)
    dg = all_pairs_distances(g) if dg is None else dg
    dh = all_pairs_distances(h) if dh is None else dh
    if not degree_gate(g.max_degree, h.max_degree, math.floor(d)):
        logger.info('ctw: guest degree %s too large for host degree %s', g.max_degree, h.max_degree)
        return None
    if cnd is None:
        cnd = connectify(decompose(h), h, dh)
    budget = budget or SearchBudget.from_settings()
    ctx = CtwContext(g, dg, h, dh, cnd, d)
    if stats is not None:
        stats['search'] = ctx
    ntd = cnd.ntd
    logger.info('ctw: width %s, gamma %s', cnd.width, cnd.gamma)

    tables = {}
    combos = {}
    for u in ntd.postorder():
        node = ntd[u]
        partials = sorted((f for f in ctx.partials(u, budget, onto=False)
                           if tw_feasible(f, g, dg, dh, bijective=False)), key=lambda f: f.key)
        if not node.children:
            states = [State(f, {}, ctx) for f in partials]
        else:
            indexes = []
            for c in node.children:
                index = {}
                for t in tables[c]:
                    index.setdefault(ctx.signature(u, c, t.f), []).append(t)
                indexes.append(index)

            def evaluate(f):
                per_child = []
                for c, index in zip(node.children, indexes):
                    grouped = {}
                    for t in index.get(ctx.signature(u, c, f), ()):
                        listed = ctx.down_lists(f, t)
                        if state_succeeds(State(f, {c: listed}, ctx), t, node.kind):
                            grouped.setdefault(listed, []).append(t)
                    if not grouped:
                        return []
                    per_child.append(grouped)
                produced = []
                for choice in product(*(grouped.items() for grouped in per_child)):
                    state = State(f, {c: listed for c, (listed, _) in zip(node.children, choice)}, ctx)
                    if state.is_feasible():
                        produced.append((state, [kids for _, kids in choice]))
                return produced

            states = []
            for produced in parallel_map(evaluate, partials):
                for state, kids in produced:
                    states.append(state)
                    combos[u, state.key] = kids
        logger.debug('ctw node %s (%s): %s partial embeddings, %s states', u, node.kind, len(partials), len(states))
        if not states:
            logger.info('ctw: no feasible state at node %s (%s)', u, node.kind)
            return None
        tables[u] = states

    def options(u, state):
        return product(*combos[u, state.key])

    for chosen in selections(ntd, tables[ntd.root], options):
        ctx.tick(budget)
        try:
            f = union_embedding((chosen[u].f.mapping for u in sorted(chosen)), g.n)
        except (ConflictError, ContractViolation):
            continue
        if f.total and verify_nc_distortion(g, h, dg, dh, f, d) is None:
            logger.info('ctw: embedding found after %s search nodes', ctx.nodes)
            return f
    return None
