import logging
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree

from .exceptions import DecompositionError, InputError
from .graphs import components_after_removal
from .utilities import setting


logger = logging.getLogger(__name__)


class TreeDecomposition:
    """Дерево на узлах 0..m-1 с мешками (множествами вершин хоста)."""

    def __init__(self, bags, edges):
        self.bags = tuple(frozenset(b) for b in bags)
        self.edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        self.adj = [[] for _ in self.bags]
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        for nb in self.adj:
            nb.sort()

    def __repr__(self):
        return f'<TreeDecomposition bags={len(self.bags)} width={self.width}>'

    @property
    def width(self):
        return max((len(b) for b in self.bags), default=0) - 1

    def validate(self, h):
        m = len(self.bags)
        if m == 0:
            if h.n:
                raise DecompositionError('cover', 'no bags')
            return self
        tree = networkx_tree(self)
        if not nx.is_tree(tree):
            raise DecompositionError('tree', 'decomposition graph is not a tree')
        covered = set().union(*self.bags)
        missing = set(range(h.n)) - covered
        if missing or covered - set(range(h.n)):
            raise DecompositionError('cover', f'uncovered vertices {sorted(missing)[:5]}')
        for u, v in h.edges():
            if not any(u in b and v in b for b in self.bags):
                raise DecompositionError('edge', f'edge {u} {v} is in no bag')
        for v in range(h.n):
            nodes = [i for i, b in enumerate(self.bags) if v in b]
            if not nx.is_connected(tree.subgraph(nodes)):
                raise DecompositionError('subtree', f'bags with vertex {v} are not connected')
        return self


@dataclass
class NiceNode:
    id: int
    kind: str  # leaf | introduce | forget | join
    bag: frozenset
    children: tuple = ()
    parent: int = None
    vertex: int = None  # введённая или забытая вершина

    def __repr__(self):
        return f'<{self.kind} {self.id}: {sorted(self.bag)}>'

    def is_leaf(self):
        return not self.children

    def is_root(self):
        return self.parent is None


class NiceTreeDecomposition:
    def __init__(self, nodes, root):
        self.nodes = list(nodes)
        self.root = root
        self._balls = {}

    def __repr__(self):
        return f'<NiceTreeDecomposition nodes={len(self.nodes)} width={self.width}>'

    def __getitem__(self, u):
        return self.nodes[u]

    def __len__(self):
        return len(self.nodes)

    @property
    def width(self):
        return max((len(node.bag) for node in self.nodes), default=0) - 1

    def postorder(self):
        result = []
        stack = [(self.root, False)]
        while stack:
            u, expanded = stack.pop()
            if expanded:
                result.append(u)
                continue
            stack.append((u, True))
            for c in reversed(self.nodes[u].children):
                stack.append((c, False))
        return result

    def neighbours(self, u):
        node = self.nodes[u]
        return list(node.children) + ([] if node.parent is None else [node.parent])

    def as_tree_decomposition(self):
        edges = [(node.id, c) for node in self.nodes for c in node.children]
        return TreeDecomposition([node.bag for node in self.nodes], edges)

    def balls(self, h, dh, r):
        """B(u, r) для каждого узла; кэшируется по r."""
        if r not in self._balls:
            self._balls[r] = [ball_union(h, dh, node.bag, r) for node in self.nodes]
        return self._balls[r]

    def validate(self, h):
        self.as_tree_decomposition().validate(h)
        root = self.nodes[self.root]
        if root.bag or not root.is_root():
            raise DecompositionError('nice', 'root bag must be empty')
        for node in self.nodes:
            kids = [self.nodes[c] for c in node.children]
            if node.kind == 'leaf':
                ok = not kids and not node.bag
            elif node.kind == 'introduce':
                ok = len(kids) == 1 and node.bag == kids[0].bag | {node.vertex} and node.vertex not in kids[0].bag
            elif node.kind == 'forget':
                ok = len(kids) == 1 and node.bag == kids[0].bag - {node.vertex} and node.vertex in kids[0].bag
            elif node.kind == 'join':
                ok = len(kids) == 2 and kids[0].bag == node.bag == kids[1].bag
            else:
                ok = False
            if not ok or any(k.parent != node.id for k in kids):
                raise DecompositionError('nice', f'node {node.id} is not a valid {node.kind} node')
        return self


def make_nice(td, root=0):
    """Приведение к хорошему виду той же ширины: листья и корень с пустыми мешками."""
    nodes = []

    def add(kind, bag, children=(), vertex=None):
        node = NiceNode(len(nodes), kind, frozenset(bag), tuple(children), None, vertex)
        nodes.append(node)
        for c in children:
            nodes[c].parent = node.id
        return node.id

    def morph(top, source, target):
        # сначала забываем лишнее, затем вводим недостающее
        bag = set(nodes[top].bag) if top is not None else set()
        for v in sorted(bag - set(target)):
            bag.discard(v)
            top = add('forget', bag, (top,), v)
        for v in sorted(set(target) - bag):
            bag.add(v)
            top = add('introduce', bag, (top,), v)
        return top

    if not td.bags:
        rid = add('leaf', ())
        return NiceTreeDecomposition(nodes, rid)

    # обход без рекурсии: дети раньше родителей
    order, parent = [], {root: None}
    stack = [root]
    while stack:
        t = stack.pop()
        order.append(t)
        for c in td.adj[t]:
            if c not in parent:
                parent[c] = t
                stack.append(c)
    top_of = {}
    for t in reversed(order):
        bag = td.bags[t]
        kids = [c for c in td.adj[t] if parent.get(c) == t]
        if not kids:
            top_of[t] = morph(add('leaf', ()), None, bag)
            continue
        tops = [morph(top_of[c], td.bags[c], bag) for c in kids]
        current = tops[0]
        for other in tops[1:]:
            current = add('join', bag, (current, other))
        top_of[t] = current
    rid = morph(top_of[root], td.bags[root], ())
    return NiceTreeDecomposition(nodes, rid)


def ball_union(h, dh, bag, r):
    result = set()
    for v in bag:
        row = dh.row(v)
        result.update(w for w in range(h.n) if row[w] <= r)
    return frozenset(result)


def parse_td(text, index=None):
    """Формат PACE .td: "s td <мешков> <ширина+1> <вершин>", строки "b <id> <вершины...>"
    (id мешков с единицы), затем рёбра дерева "a b".
    index переводит номера вершин файла в номера вершин хоста."""
    header = None
    bags = {}
    edges = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        parts = line.split()
        try:
            if parts[0] == 's':
                if header is not None or len(parts) != 5 or parts[1] != 'td':
                    raise InputError('bad "s td" line', code='td', line=number)
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == 'b':
                if header is None:
                    raise InputError('bag before "s td" line', code='td', line=number)
                values = [int(x) for x in parts[1:]]
                vertices = values[1:]
                if values[0] in bags:
                    raise InputError(f'duplicate bag {values[0]}', code='td', line=number)
                bags[values[0]] = [v if index is None else index[v] for v in vertices]
            else:
                if header is None or len(parts) != 2:
                    raise InputError(f'unexpected line {line!r}', code='td', line=number)
                edges.append((int(parts[0]), int(parts[1])))
        except (ValueError, KeyError) as exc:
            raise InputError(f'bad value in {line!r}: {exc}', code='td', line=number)
    if header is None:
        raise InputError('missing "s td" line', code='td')
    count, size, _ = header
    if sorted(bags) != list(range(1, count + 1)):
        raise InputError(f'expected bags 1..{count}', code='td')
    if any(len(b) > size for b in bags.values()):
        raise InputError('bag larger than declared width + 1', code='td')
    try:
        return TreeDecomposition([bags[i] for i in range(1, count + 1)], [(a - 1, b - 1) for a, b in edges])
    except IndexError:
        raise InputError('tree edge refers to an unknown bag', code='td')


def format_td(td, n, labels=None):
    lines = [f's td {len(td.bags)} {td.width + 1} {n}']
    for i, bag in enumerate(td.bags, 1):
        vertices = sorted(bag) if labels is None else sorted(labels[v] for v in bag)
        lines.append(' '.join(['b', str(i)] + [str(v) for v in vertices]))
    lines.extend(f'{a + 1} {b + 1}' for a, b in td.edges)
    return '\n'.join(lines) + '\n'


def decomposition_from_order(h, order):
    """Мешок вершины v - v и её старшие соседи в графе с добавленными рёбрами;
    родитель - мешок самого раннего из этих соседей."""
    position = {v: i for i, v in enumerate(order)}
    graph = {v: set(h.adj[v]) for v in range(h.n)}
    higher = {}
    for v in order:
        later = {w for w in graph[v] if position[w] > position[v]}
        higher[v] = later
        for a, b in combinations(later, 2):
            graph[a].add(b)
            graph[b].add(a)
    bags = [frozenset({v} | higher[v]) for v in order]
    edges = []
    roots = []
    for i, v in enumerate(order):
        if higher[v]:
            edges.append((i, position[min(higher[v], key=position.get)]))
        else:
            roots.append(i)
    edges.extend(zip(roots, roots[1:]))
    return TreeDecomposition(bags, edges)


def exact_decomposition(h):
    """Минимальная ширина: динамика по подмножествам уже исключённых вершин."""
    n = h.n
    if n == 0:
        return TreeDecomposition([], [])

    def q_value(eliminated, v):
        # соседи v вне eliminated, достижимые через eliminated
        seen, stack, result = {v}, [v], set()
        while stack:
            a = stack.pop()
            for b in h.adj[a]:
                if b in seen:
                    continue
                seen.add(b)
                if eliminated >> b & 1:
                    stack.append(b)
                else:
                    result.add(b)
        return len(result)

    best = {0: (-1, None)}
    for mask in range(1, 1 << n):
        value = None
        for v in range(n):
            if mask >> v & 1:
                rest = mask & ~(1 << v)
                candidate = max(best[rest][0], q_value(rest, v))
                if value is None or candidate < value[0]:
                    value = (candidate, v)
        best[mask] = value
    order = []
    mask = (1 << n) - 1
    while mask:
        v = best[mask][1]
        order.append(v)
        mask &= ~(1 << v)
    order.reverse()
    return decomposition_from_order(h, order)


def heuristic_decomposition(h):
    _, tree = treewidth_min_degree(h.to_networkx())
    nodes = sorted(tree.nodes(), key=lambda bag: sorted(bag))
    index = {bag: i for i, bag in enumerate(nodes)}
    return TreeDecomposition(list(nodes), [(index[a], index[b]) for a, b in tree.edges()])


def decompose(h):
    if h.n <= setting('EMBED_EXACT_TW_LIMIT'):
        td = exact_decomposition(h)
    else:
        td = heuristic_decomposition(h)
        logger.info('heuristic tree decomposition of width %s', td.width)
    return td.validate(h)


@dataclass
class ConnectedNiceDecomposition:
    ntd: NiceTreeDecomposition
    gamma: int
    width: int
    bags: tuple  # связные мешки до приведения к хорошему виду


def connectify(td, h, dh):
    """Жадно дополняет мешки кратчайшими путями, пока каждый мешок не станет связным,
    и восстанавливает свойство поддерева. Ширина может вырасти - она измеряется."""
    if isinstance(td, NiceTreeDecomposition):
        td = td.as_tree_decomposition()
    bags = [set(b) for b in td.bags]
    graph, tree = h.to_networkx(), networkx_tree(td)
    changed = True
    while changed:
        changed = False
        for bag in bags:
            while True:
                parts = components_after_removal(h, (), universe=bag)
                if len(parts) <= 1:
                    break
                a, b = min(((x, y) for x in parts[0] for part in parts[1:] for y in part),
                           key=lambda pair: (dh[pair], pair))
                bag.update(min(nx.all_shortest_paths(graph, a, b)))
                changed = True
        for v in range(h.n):
            holders = sorted(i for i, bag in enumerate(bags) if v in bag)
            for other in holders[1:]:
                for node in nx.shortest_path(tree, holders[0], other):
                    if v not in bags[node]:
                        bags[node].add(v)
                        changed = True
    connected = TreeDecomposition(bags, td.edges).validate(h)
    ntd = make_nice(connected)
    gamma = max((dh[a, b] for bag in connected.bags for a in bag for b in bag), default=0)
    logger.info('connected decomposition: width %s -> %s, gamma %s', td.width, connected.width, gamma)
    return ConnectedNiceDecomposition(ntd, gamma, connected.width, connected.bags)


def networkx_tree(td):
    """Дерево декомпозиции как граф networkx."""
    tree = nx.Graph()
    tree.add_nodes_from(range(len(td.bags)))
    tree.add_edges_from(td.edges)
    return tree
