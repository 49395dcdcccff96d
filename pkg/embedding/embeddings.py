import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import networkx as nx
import numpy as np

from .exceptions import (BudgetExceeded, ConflictError, ContractViolation, EmbeddingError,
                         InputError, PartialityError)
from .graphs import INF, DistanceMatrix, Graph, all_pairs_distances
from .utilities import setting


logger = logging.getLogger(__name__)


class Ratio(Fraction):
    """Точная дробь; всегда печатается как "a/b" (в том числе "2/1")."""

    def __str__(self):
        return f'{self.numerator}/{self.denominator}'

    @classmethod
    def parse(cls, text):
        try:
            value = cls(str(text).strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f'bad ratio {text!r}', code='ratio')
        return value


def as_ratio(value):
    return value if isinstance(value, Ratio) else Ratio(value)


class Embedding:
    """Инъективное (возможно частичное) отображение вершин гостя в вершины хоста."""

    __slots__ = ('mapping', 'guest_size', 'report')

    def __init__(self, mapping, guest_size=None):
        self.mapping = dict(sorted((int(v), int(x)) for v, x in dict(mapping).items()))
        self.guest_size = guest_size
        self.report = None  # DistortionReport после проверки
        owners = {}
        for v, x in self.mapping.items():
            if x in owners:
                raise ContractViolation(owners[x], v, x)
            owners[x] = v

    def __repr__(self):
        return f'<Embedding {self.mapping}>'

    def __eq__(self, other):
        return isinstance(other, Embedding) and self.mapping == other.mapping

    def __getitem__(self, v):
        return self.mapping[v]

    def __contains__(self, v):
        return v in self.mapping

    def __len__(self):
        return len(self.mapping)

    def items(self):
        return self.mapping.items()

    def get(self, v, default=None):
        return self.mapping.get(v, default)

    @property
    def total(self):
        return self.guest_size is not None and len(self.mapping) == self.guest_size

    def image(self):
        return frozenset(self.mapping.values())

    def inverse(self):
        return {x: v for v, x in self.mapping.items()}

    def restrict(self, vertices):
        return Embedding({v: x for v, x in self.mapping.items() if v in vertices}, self.guest_size)

    def relabel(self, host_ids):
        """Переводит образы через host_ids (список или словарь)."""
        return Embedding({v: host_ids[x] for v, x in self.mapping.items()}, self.guest_size)


def _checked(g, f):
    if not isinstance(f, Embedding):
        f = Embedding(f, g.n)
    missing = set(range(g.n)) - set(f.mapping)
    if missing:
        raise PartialityError(missing)
    return f


@dataclass(frozen=True)
class DistortionReport:
    expansion: Ratio
    contraction: Ratio
    distortion: Ratio
    expansion_pair: tuple = None
    contraction_pair: tuple = None

    @property
    def non_contracting(self):
        return self.contraction <= 1

    @property
    def scale_free(self):
        """expansion * contraction без округления сжатия до единицы."""
        return Ratio(self.expansion * self.contraction)


def distortion_report(g, h, dg, dh, f):
    """Точные коэффициенты растяжения и сжатия по всем неупорядоченным парам.
    При равенстве свидетелем остаётся лексикографически первая пара."""
    f = _checked(g, f)
    expansion = contraction = None
    expansion_pair = contraction_pair = None
    for u in range(g.n):
        for v in range(u + 1, g.n):
            guest = dg[u, v]
            host = dh[f[u], f[v]]
            if host == INF:
                raise EmbeddingError(f'images of {u} and {v} are disconnected in the host')
            if expansion is None or host * expansion[1] > expansion[0] * guest:
                expansion, expansion_pair = (host, guest), (u, v)
            if contraction is None or guest * contraction[1] > contraction[0] * host:
                contraction, contraction_pair = (guest, host), (u, v)
    if expansion is None:
        one = Ratio(1)
        return DistortionReport(one, one, one)
    expansion = Ratio(*expansion)
    contraction = Ratio(*contraction)
    # у несжимающего вложения искажение равно растяжению
    return DistortionReport(expansion, contraction, Ratio(expansion * max(contraction, 1)),
                            expansion_pair, contraction_pair)


class Violation(NamedTuple):
    u: int
    v: int
    guest_distance: int
    host_distance: int

    @property
    def kind(self):
        return 'contraction' if self.host_distance < self.guest_distance else 'expansion'

    def __str__(self):
        return (f'{self.kind} on pair ({self.u}, {self.v}): '
                f'D_G={self.guest_distance}, D_H={self.host_distance}')


def verify_nc_distortion(g, h, dg, dh, f, d):
    """None, если D_G <= D_H(F) <= d * D_G для всех пар, иначе первая (лексикографически)
    нарушающая пара. d может быть дробью."""
    f = _checked(g, f)
    d = as_ratio(d)
    if g.n < 2:
        return None
    images = np.array([f[v] for v in range(g.n)])
    guest = dg.array.astype(np.int64)
    host = dh.array[np.ix_(images, images)].astype(np.int64)
    bad = (host < guest) | (host * d.denominator > guest * d.numerator)
    bad = np.triu(bad, k=1)
    hits = np.argwhere(bad)
    if not len(hits):
        return None
    u, v = (int(x) for x in hits[0])
    return Violation(u, v, int(guest[u, v]), int(host[u, v]))


def verify_bijective(f, h, red_set=None):
    target = frozenset(range(h.n)) if red_set is None else frozenset(red_set)
    return f.image() == target and len(f) == len(target)


@dataclass(frozen=True)
class RedBlueHost:
    """Хост с красными (исходными) и синими (подразбиение) вершинами.
    Красные вершины сохраняют номера 0..N-1 исходного хоста."""
    graph: Graph
    red: frozenset
    p: int

    @property
    def blue(self):
        return frozenset(range(self.graph.n)) - self.red

    def blue_run(self):
        """Наибольшее число подряд идущих синих вершин на пути между красными."""
        blue = self.graph.to_networkx().subgraph(self.blue)
        return max((len(run) for run in nx.connected_components(blue)), default=0)

    def contract(self):
        """Стягивает синие пути обратно в рёбра."""
        edges = set()
        for r in sorted(self.red):
            for first in self.graph.adj[r]:
                previous, current = r, first
                while current not in self.red:
                    nxt = [w for w in self.graph.adj[current] if w != previous]
                    previous, current = current, nxt[0]
                if r < current:
                    edges.add((r, current))
        return Graph(len(self.red), sorted(edges))


def subdivide_red_blue(h, p):
    if h.is_weighted:
        raise InputError('weighted hosts are not supported', code='weighted-host')
    if p < 0:
        raise InputError('subdivision factor must be >= 0', code='subdivision')
    edges = []
    next_id = h.n
    for u, v in h.edges():
        chain = [u] + list(range(next_id, next_id + p)) + [v]
        next_id += p
        edges.extend(zip(chain, chain[1:]))
    return RedBlueHost(Graph(next_id, edges), frozenset(range(h.n)), p)


class ReductionInstance(NamedTuple):
    host: RedBlueHost
    guest_scale: int
    distortion: Ratio

    def guest_distances(self, dg):
        return DistanceMatrix(dg.array.astype(np.int64) * self.guest_scale)


def candidate_contractions(dg, dh):
    """Все возможные значения коэффициента сжатия a/b: a - расстояние в госте, b - в хосте."""
    guest = sorted({int(x) for x in np.unique(dg.array) if 0 < x < INF})
    host = sorted({int(x) for x in np.unique(dh.array) if 0 < x < INF})
    return sorted({Fraction(a, b) for a in guest for b in host})


def gen_reduction_instances(g, h, d_num, d_den, dg=None, dh=None, budget=None):
    """Экземпляры red-blue задачи. Для угаданного сжатия c = a/b хост подразбивается a-1 раз,
    расстояния гостя умножаются на b. Вложение с искажением d существует тогда и только тогда,
    когда у какого-то экземпляра есть несжимающее вложение в красные вершины с растяжением <= d."""
    d = Ratio(d_num, d_den)
    if d < 1:
        raise InputError('distortion must be >= 1', code='distortion')
    dg = all_pairs_distances(g) if dg is None else dg
    dh = all_pairs_distances(h) if dh is None else dh
    budget = setting('EMBED_REDUCTION_BUDGET') if budget is None else budget
    # экземпляр без подразбиения идёт первым, даже если у гостя нет ни одной пары
    ratios = [Fraction(1)] + [c for c in candidate_contractions(dg, dh) if c != 1]
    cap = g.n * h.n
    produced = 0
    for c in ratios:
        if c.numerator > cap or c.denominator > cap:
            continue
        if produced >= budget:
            raise BudgetExceeded(produced, 0.0)
        produced += 1
        yield ReductionInstance(subdivide_red_blue(h, c.numerator - 1), c.denominator, d)


def solve_rational(g, h, d, dg=None, dh=None, solver=None, budget=None):
    """Вложение с искажением не больше d (сжатие разрешено).

    solver(g, dg_scaled, host, dh_host, d, codomain) -> Embedding | None решает
    несжимающую задачу на каждом экземпляре; по умолчанию - перебор."""
    from .oracle import SearchBudget, brute_force_embed

    d = as_ratio(d)
    dg = all_pairs_distances(g) if dg is None else dg
    dh = all_pairs_distances(h) if dh is None else dh
    if solver is None:
        search_budget = budget or SearchBudget.from_settings()

        def solver(guest, scaled, host, host_dm, distortion, codomain):
            return brute_force_embed(guest, scaled, host, host_dm, distortion,
                                     codomain=codomain, budget=search_budget)

    if g.n == 1 and h.n:
        f = Embedding({0: 0}, 1)
        f.report = distortion_report(g, h, dg, dh, f)
        return f
    for instance in gen_reduction_instances(g, h, d.numerator, d.denominator, dg, dh):
        host = instance.host
        host_dm = all_pairs_distances(host.graph)
        found = solver(g, instance.guest_distances(dg), host.graph, host_dm, d, host.red)
        if found is None:
            continue
        # красные вершины сохранили номера хоста
        f = Embedding(found.mapping, g.n)
        report = distortion_report(g, h, dg, dh, f)
        if report.scale_free <= d:
            f.report = report
            logger.info('rational pipeline: found at contraction %s/%s',
                        host.p + 1, instance.guest_scale)
            return f
        logger.error('reduction instance produced distortion %s > %s', report.scale_free, d)
    return None


def union_embedding(parts, guest_size=None):
    merged = {}
    for part in parts:
        items = part.items() if hasattr(part, 'items') else part
        for v, x in items:
            if v in merged and merged[v] != x:
                raise ConflictError(v, merged[v], x)
            merged[v] = x
    return Embedding(merged, guest_size)


def bijective_reduction_gate(g, h_rb, d):
    """Условие на хост в биективном варианте: синие цепочки не длиннее d.
    g не участвует: условие зависит только от хоста."""
    return h_rb.blue_run() <= d


def long_empty_arcs(f, N, threshold):
    """Максимальные пустые дуги цикла C_N длины >= threshold: список (начало, длина)."""
    used = sorted(set(f.image()))
    if not used:
        return [(0, N)] if N >= threshold else []
    arcs = []
    for i, x in enumerate(used):
        following = used[(i + 1) % len(used)]
        gap = (following - x - 1) % N if len(used) > 1 else N - 1
        if gap >= threshold:
            arcs.append(((x + 1) % N, gap))
    return sorted(arcs)


def embedding_to_dot(g, h, f, red_set=None):
    """Хост в формате DOT: вершины с прообразом закрашены и подписаны номером гостя."""
    inverse = f.inverse()
    lines = ['graph H {']
    for x in range(h.n):
        attrs = [f'label="{x}"']
        if x in inverse:
            attrs = [f'label="{x}\\n{inverse[x]}"', 'style=filled', 'fillcolor=lightgrey']
        if red_set is not None:
            attrs.append('color=red' if x in red_set else 'color=blue')
        lines.append(f'    "{x}" [{", ".join(attrs)}];')
    for u, v in h.edges():
        lines.append(f'    "{u}" -- "{v}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'
