import logging
import random
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .exceptions import InputError


logger = logging.getLogger(__name__)

INF = int(np.iinfo(np.int32).max)  # расстояние между вершинами разных компонент


class Graph:
    """Неизменяемый неориентированный граф с вершинами 0..n-1.

    Веса рёбер необязательны; если заданы, то это целые числа >= 1."""

    __slots__ = ('n', 'adj', 'weights', '_edges')

    def __init__(self, n, edges=(), weights=None):
        if n < 0:
            raise InputError('negative vertex count', code='vertex-count')
        neighbours = [set() for _ in range(n)]
        edge_weights = {} if weights is not None else None
        for item in edges:
            u, v = item[0], item[1]
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f'edge {u} {v} outside 0..{n - 1}', code='vertex-id')
            if u == v:
                raise InputError(f'self-loop at {u}', code='self-loop')
            if v in neighbours[u]:
                raise InputError(f'parallel edge {u} {v}', code='parallel-edge')
            neighbours[u].add(v)
            neighbours[v].add(u)
            if edge_weights is not None:
                w = weights[(u, v)] if (u, v) in weights else weights[(v, u)]
                if not isinstance(w, (int, np.integer)) or w < 1:
                    raise InputError(f'weight of {u} {v} must be an integer >= 1', code='weight')
                edge_weights[(min(u, v), max(u, v))] = int(w)
        self.n = n
        self.adj = tuple(tuple(sorted(nb)) for nb in neighbours)
        self.weights = edge_weights
        self._edges = tuple(sorted((u, v) for u in range(n) for v in self.adj[u] if u < v))

    def __repr__(self):
        return f'<Graph n={self.n} m={len(self._edges)}{" weighted" if self.weights else ""}>'

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self._edges == other._edges \
            and self.weights == other.weights

    def __hash__(self):
        return hash((self.n, self._edges))

    @classmethod
    def from_edges(cls, edges, n=None):
        edges = list(edges)
        if n is None:
            n = 1 + max((max(e[0], e[1]) for e in edges), default=-1)
        if any(len(e) == 3 for e in edges):
            weights = {(e[0], e[1]): e[2] for e in edges}
            return cls(n, [(e[0], e[1]) for e in edges], weights)
        return cls(n, edges)

    @classmethod
    def from_networkx(cls, graph, weight=None):
        """Вершины переименовываются в 0..n-1 в порядке сортировки."""
        order = sorted(graph.nodes())
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in graph.edges()]
        weights = None
        if weight is not None:
            weights = {(index[u], index[v]): data.get(weight, 1) for u, v, data in graph.edges(data=True)}
        return cls(len(order), edges, weights)

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for u, v in self._edges:
            graph.add_edge(u, v, weight=self.weight(u, v))
        return graph

    def edges(self):
        return self._edges

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    @property
    def max_degree(self):
        return max((len(nb) for nb in self.adj), default=0)

    @property
    def is_weighted(self):
        return self.weights is not None

    @property
    def max_weight(self):
        if not self.weights:
            return 1
        return max(self.weights.values())

    def weight(self, u, v):
        if self.weights is None:
            return 1
        return self.weights[(min(u, v), max(u, v))]

    def is_connected(self):
        if self.n == 0:
            return True
        return len(components_after_removal(self, ())) == 1

    def induced(self, vertices):
        """Индуцированный подграф; возвращает (граф, список исходных номеров)."""
        order = sorted(vertices)
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self._edges if u in index and v in index]
        weights = None
        if self.weights is not None:
            weights = {(index[u], index[v]): self.weight(u, v) for u, v in self._edges
                       if u in index and v in index}
        return Graph(len(order), edges, weights), order


class DistanceMatrix:
    """Все попарные расстояния. array - numpy int32, rows - те же числа в виде кортежей
    для быстрого доступа из перебора."""

    __slots__ = ('array', 'rows', 'n')

    def __init__(self, array):
        self.array = np.asarray(array, dtype=np.int32)
        self.n = self.array.shape[0]
        self.rows = tuple(tuple(row) for row in self.array.tolist())

    def __getitem__(self, pair):
        u, v = pair
        return self.rows[u][v]

    def row(self, u):
        return self.rows[u]

    @property
    def diameter(self):
        finite = self.array[self.array != INF]
        return int(finite.max()) if finite.size else 0

    def is_metric(self):
        """Симметрия, нулевая диагональ и неравенство треугольника (через min-plus замыкание)."""
        a = self.array.astype(np.int64)
        if not np.array_equal(a, a.T) or np.any(np.diag(a) != 0):
            return False
        closure = np.min(a[:, :, None] + a[None, :, :], axis=1)
        return bool(np.all(closure >= a))


def all_pairs_distances(g):
    """BFS из каждой вершины для невзвешенного графа, Дейкстра для взвешенного."""
    result = np.full((g.n, g.n), INF, dtype=np.int32)
    graph = g.to_networkx()
    if g.is_weighted:
        lengths = nx.all_pairs_dijkstra_path_length(graph, weight='weight')
    else:
        lengths = nx.all_pairs_shortest_path_length(graph)
    for source, targets in lengths:
        for target, length in targets.items():
            result[source, target] = length
    return DistanceMatrix(result)


def components_after_removal(g, removed, universe=None):
    """Компоненты связности графа g без вершин removed, упорядоченные по наименьшей вершине.

    universe ограничивает рассматриваемые вершины (по умолчанию все)."""
    # горячий путь: вызывается на каждое состояние динамики
    removed = set(removed)
    allowed = range(g.n) if universe is None else sorted(universe)
    seen = set(removed)
    result = []
    for start in allowed:
        if start in seen:
            continue
        if universe is not None and start not in universe:
            continue
        component = {start}
        seen.add(start)
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if w not in seen and (universe is None or w in universe):
                    seen.add(w)
                    component.add(w)
                    stack.append(w)
        result.append(frozenset(component))
    return result


def degree_gate(g_delta, h_delta, d):
    """False, если вершина степени g_delta заведомо не помещается: у неё больше соседей,
    чем вершин хоста на расстоянии 1..d от её образа."""
    bound = sum(h_delta * (h_delta - 1) ** i for i in range(d))
    return g_delta <= bound


def ball(dm, center, r):
    return frozenset(v for v, dist in enumerate(dm.row(center)) if dist <= r)


@dataclass(frozen=True)
class HostSpec:
    family: str  # path | cycle | theta | general
    size: int = 0
    arms: tuple = ()
    graph: Graph = field(default=None, compare=False)

    def __post_init__(self):
        if self.family == 'path' and self.size < 1:
            raise InputError('path host needs N >= 1', code='host')
        if self.family == 'cycle' and self.size < 3:
            raise InputError('cycle host needs N >= 3', code='host')
        if self.family == 'theta':
            if len(self.arms) < 2:
                raise InputError('theta host needs at least two arms', code='host')
            if any(length < 1 for length in self.arms):
                raise InputError('theta arm lengths must be >= 1', code='host')
            if sum(1 for length in self.arms if length == 1) > 1:
                # два ребра s-t дали бы кратное ребро
                raise InputError('at most one theta arm may have length 1', code='host')
        if self.family == 'general' and self.graph is None:
            raise InputError('general host needs a graph', code='host')
        if self.family not in ('path', 'cycle', 'theta', 'general'):
            raise InputError(f'unknown host family {self.family!r}', code='host')

    def __str__(self):
        if self.family == 'theta':
            return 'theta:' + ','.join(map(str, self.arms))
        if self.family == 'general':
            return f'general:{self.graph.n}'
        return f'{self.family}:{self.size}'


def theta_arm_vertices(arms):
    """Последовательности вершин каждого плеча от s=0 до t=1."""
    sequences = []
    next_id = 2
    for length in arms:
        interior = list(range(next_id, next_id + length - 1))
        next_id += length - 1
        sequences.append(tuple([0] + interior + [1]))
    return sequences


def generate(spec):
    if spec.family == 'path':
        return Graph(spec.size, [(i, i + 1) for i in range(spec.size - 1)])
    if spec.family == 'cycle':
        return Graph(spec.size, [(i, (i + 1) % spec.size) for i in range(spec.size)])
    if spec.family == 'theta':
        sequences = theta_arm_vertices(spec.arms)
        n = 2 + sum(length - 1 for length in spec.arms)
        edges = [(seq[i], seq[i + 1]) for seq in sequences for i in range(len(seq) - 1)]
        return Graph(n, edges)
    return spec.graph


def parse_host_spec(text, read_file=None):
    """path:N, cycle:N, theta:l1,...,lk или file:PATH (read_file(path) -> Graph)."""
    family, _, rest = text.partition(':')
    family = family.strip().lower()
    try:
        if family in ('path', 'cycle'):
            return HostSpec(family, size=int(rest))
        if family == 'theta':
            return HostSpec('theta', arms=tuple(int(x) for x in rest.split(',') if x.strip()))
    except ValueError:
        raise InputError(f'bad host spec {text!r}', code='host')
    if family == 'file':
        if read_file is None:
            raise InputError('file hosts need a reader', code='host')
        return HostSpec('general', graph=read_file(rest))
    raise InputError(f'bad host spec {text!r}', code='host')


def parse_edge_list(text):
    """Список рёбер "u v" или "u v w"; '#' - комментарий. Строка из одной метки объявляет
    изолированную вершину. Метки перенумеровываются по возрастанию: возвращается (граф, метки)."""
    triples = []
    labels = set()
    weighted = None
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise InputError(f'non-integer token in {raw.strip()!r}', code='parse', line=number)
        if len(values) == 1:
            labels.add(values[0])
            continue
        if len(values) not in (2, 3):
            raise InputError(f'expected "u v" or "u v w", got {raw.strip()!r}', code='parse', line=number)
        has_weight = len(values) == 3
        if weighted is None:
            weighted = has_weight
        elif weighted != has_weight:
            raise InputError('mixed weighted and unweighted lines', code='parse', line=number)
        if has_weight and values[2] < 1:
            raise InputError('weights must be integers >= 1', code='weight', line=number)
        if values[0] == values[1]:
            raise InputError(f'self-loop at {values[0]}', code='self-loop', line=number)
        labels.update(values[:2])
        triples.append((values, number))
    order = sorted(labels)
    index = {label: i for i, label in enumerate(order)}
    edges, weights, seen = [], {}, set()
    for values, number in triples:
        u, v = index[values[0]], index[values[1]]
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InputError(f'parallel edge {values[0]} {values[1]}', code='parallel-edge', line=number)
        seen.add(key)
        edges.append((u, v))
        if weighted:
            weights[(u, v)] = values[2]
    return Graph(len(order), edges, weights if weighted else None), order


def format_edge_list(g, labels=None):
    labels = labels or list(range(g.n))
    lines = []
    if g.n and not g.edges():
        lines.append(str(labels[0]))
    for u, v in g.edges():
        if g.is_weighted:
            lines.append(f'{labels[u]} {labels[v]} {g.weight(u, v)}')
        else:
            lines.append(f'{labels[u]} {labels[v]}')
    return '\n'.join(lines) + '\n'


def read_guest(text):
    """Разбор гостевого графа: он обязан быть связным."""
    g, labels = parse_edge_list(text)
    if g.n == 0:
        raise InputError('empty graph', code='empty')
    if not g.is_connected():
        raise InputError('guest graph must be connected', code='disconnected')
    return g, labels


def guest_family(family, size, seed=0, max_degree=None, arms=()):
    """Гостевые графы для команды gen и тестов."""
    if family == 'path':
        return generate(HostSpec('path', size=size))
    if family == 'cycle':
        return generate(HostSpec('cycle', size=size))
    if family == 'theta':
        return generate(HostSpec('theta', arms=tuple(arms)))
    if family == 'star':
        return Graph.from_networkx(nx.star_graph(size - 1))
    if family == 'complete':
        return Graph.from_networkx(nx.complete_graph(size))
    if family == 'tree':
        return Graph.from_networkx(_random_tree(size, seed))
    if family == 'random':
        return Graph.from_networkx(_random_connected(size, seed, max_degree))
    raise InputError(f'unknown family {family!r}', code='family')


def _random_tree(size, seed):
    if size == 1:
        graph = nx.Graph()
        graph.add_node(0)
        return graph
    maker = getattr(nx, 'random_labeled_tree', None)
    if maker is not None:
        return maker(size, seed=seed)
    return nx.random_tree(size, seed=seed)


def _random_connected(size, seed, max_degree):
    graph = _random_tree(size, seed)
    if max_degree is not None and max(dict(graph.degree()).values(), default=0) > max_degree:
        # дерево с нарушением ограничения заменяем путём
        graph = nx.path_graph(size)
    rng = random.Random(seed)
    cap = max_degree if max_degree is not None else size
    candidates = [(u, v) for u in range(size) for v in range(u + 1, size) if not graph.has_edge(u, v)]
    rng.shuffle(candidates)
    for u, v in candidates[:size]:
        if graph.degree(u) < cap and graph.degree(v) < cap:
            graph.add_edge(u, v)
    return graph
