"""Скользящее окно для вложений в путь и цикл.

Свободные позиции хоста пронумерованы 0..S-1 (slot_points[i] - соответствующая точка хоста).
Часть гостя заранее закреплена (anchors: вершина -> точка). Состояние - содержимое окна
из 2r+1 позиций вокруг середины mid, множество вершин, уже размещённых левее окна,
и "хвост" - последняя размещённая левее пустого окна вершина с расстоянием до окна.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from .exceptions import BudgetExceeded
from .graphs import INF, components_after_removal
from .oracle import brute_force_embed


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Anchor:
    """Закреплённая часть: Ψ как кортеж пар (вершина, позиция окна S_0), позиции -r..r."""
    psi: tuple

    @property
    def W(self):
        return frozenset(v for v, _ in self.psi)

    def mapping(self):
        return dict(self.psi)

    def start(self):
        return next(v for v, p in self.psi if p == 0)


@dataclass(frozen=True)
class WindowPartialEmbedding:
    mid: int
    slots: tuple  # вершина или None для индексов mid-r..mid+r
    left: frozenset = frozenset()
    tail: tuple = None  # (вершина, расстояние до левого края окна), только при пустом окне

    @property
    def radius(self):
        return len(self.slots) // 2

    @property
    def domain(self):
        return frozenset(v for v in self.slots if v is not None)

    def positions(self):
        r = self.radius
        return {v: self.mid - r + k for k, v in enumerate(self.slots) if v is not None}

    def dom(self, p, q=None):
        """Dom^{[p,q]}: вершины со смещением от p до q относительно середины."""
        q = p if q is None else q
        r = self.radius
        return frozenset(v for k, v in enumerate(self.slots) if v is not None and p <= k - r <= q)

    @property
    def sequence(self):
        return tuple(v for v in self.slots if v is not None)

    def offsets(self, dg):
        """x_0 - пустые позиции перед первой вершиной; x_i - зазор сверх D_G(u_i, u_{i+1})."""
        occupied = [(k, v) for k, v in enumerate(self.slots) if v is not None]
        if not occupied:
            return (len(self.slots),)
        result = [occupied[0][0]]
        for (k1, u), (k2, w) in zip(occupied, occupied[1:]):
            result.append(k2 - k1 - dg[u, w])
        return tuple(result)


class WindowSearch:
    """Динамика по окнам: от начальных окон слева направо, с проверкой допустимости
    каждого окна и преемственности соседних."""

    def __init__(self, g, dg, d, radius, anchors, slot_points, distance, universe=None, end_check=None,
                 last_vertex=None, budget=None):
        self.g = g
        self.dg = dg
        self.rows = dg.rows
        d = Fraction(d)
        self.num, self.den = d.numerator, d.denominator
        self.d = d
        self.r = radius
        self.anchors = dict(anchors)
        self.slot_points = tuple(slot_points)
        self.distance = distance
        self.universe = frozenset(range(g.n)) if universe is None else frozenset(universe)
        self.free = self.universe - set(self.anchors)
        self.end_check = end_check
        self.last_vertex = last_vertex
        self.budget = budget
        finite = [x for v in self.universe for x in (self.rows[v][w] for w in self.universe) if x < INF]
        self.cap = max(finite, default=0) + 1
        self.layers = 0
        self.states = 0

    @property
    def size(self):
        return len(self.slot_points)

    def fits(self, u, p, v, q):
        gd = self.rows[u][v]
        hd = self.distance(p, q)
        return gd <= hd and hd * self.den <= self.num * gd

    def anchors_valid(self):
        items = sorted(self.anchors.items())
        points = [p for _, p in items]
        if len(set(points)) != len(points):
            return False
        return all(self.fits(u, p, v, q) for i, (u, p) in enumerate(items) for v, q in items[i + 1:])

    # условия допустимости

    def is_feasible(self, f):
        r = self.r
        first = f.mid == r
        last = f.mid == self.size - 1 - r
        placed = [(f.mid - r + k, v) for k, v in enumerate(f.slots) if v is not None]
        vertices = [v for _, v in placed]
        if len(set(vertices)) != len(vertices):
            return False
        if any(v not in self.free or v in f.left for v in vertices):
            return False
        # попарно внутри окна и с закреплёнными вершинами
        for i, (a, u) in enumerate(placed):
            p = self.slot_points[a]
            for b, v in placed[i + 1:]:
                if not self.fits(u, p, v, self.slot_points[b]):
                    return False
            for w, q in self.anchors.items():
                if not self.fits(u, p, w, q):
                    return False
        # замкнутые окрестности Dom^0 (и краёв на первом и последнем окне)
        inside = set(vertices) | set(self.anchors)
        for a, u in placed:
            offset = a - f.mid
            if offset == 0 or (first and offset < 0) or (last and offset > 0):
                if any(w in self.universe and w not in inside for w in self.g.adj[u]):
                    return False
        # L* и R* не пересекаются
        unplaced = self.free - f.left - set(vertices)
        for component in components_after_removal(self.g, inside, universe=self.universe):
            if component & f.left and component & unplaced:
                return False
        return True

    def unplaced(self, f):
        return self.free - f.left - f.domain

    def successor(self, f, entering):
        """Окно f, сдвинутое на одну позицию вправо, с новой вершиной entering (или None)."""
        departing = f.slots[0]
        slots = f.slots[1:] + (entering,)
        left = f.left | {departing} if departing is not None else f.left
        tail = None
        if not any(v is not None for v in slots):
            if departing is not None:
                tail = (departing, 1)
            elif f.tail is not None:
                tail = (f.tail[0], min(f.tail[1] + 1, self.cap))
        return WindowPartialEmbedding(f.mid + 1, slots, frozenset(left), tail)

    def chain_ok(self, f, entering):
        """Несжимаемость для соседних занятых позиций, разделённых пустым окном."""
        if entering is None or any(v is not None for v in f.slots[1:]):
            return True
        gap_extra = 2 * self.r + 1
        if f.slots[0] is not None:
            return self.rows[f.slots[0]][entering] <= gap_extra
        if f.tail is not None:
            return self.rows[f.tail[0]][entering] <= f.tail[1] + gap_extra
        return True

    def succeeds(self, f_a, f_b):
        """f_b - сдвиг f_a на одну позицию: неразмещённые f_a = неразмещённые f_b плюс вошедшая вершина."""
        if f_b.mid != f_a.mid + 1 or f_a.slots[1:] != f_b.slots[:-1]:
            return False
        departing, entering = f_a.slots[0], f_b.slots[-1]
        expected_left = f_a.left | ({departing} if departing is not None else set())
        if f_b.left != expected_left:
            return False
        if entering is not None and entering not in self.unplaced(f_a):
            return False
        return self.chain_ok(f_a, entering) and self.successor(f_a, entering) == f_b

    def accepts(self, f):
        if self.unplaced(f):
            return False
        last = self.last_free(f)
        if self.last_vertex is not None and (last is None or last[0] != self.last_vertex):
            return False
        if self.end_check is not None and not self.end_check(last):
            return False
        return True

    def last_free(self, f):
        """(вершина, точка) последней размещённой свободной вершины; точка None, если
        хвост дальше порога cap."""
        for k in range(len(f.slots) - 1, -1, -1):
            if f.slots[k] is not None:
                return f.slots[k], self.slot_points[f.mid - self.r + k]
        if f.tail is not None:
            vertex, dist = f.tail
            if dist >= self.cap:
                return vertex, None
            return vertex, self.slot_points[f.mid - self.r - dist]
        return None

    # перебор

    def initial_windows(self):
        r = self.r
        candidates = sorted(self.free)
        chosen = []

        def extend(k):
            if k == 2 * r + 1:
                yield WindowPartialEmbedding(r, tuple(chosen))
                return
            point = self.slot_points[k]
            for v in [None] + candidates:
                if v is not None:
                    if v in chosen:
                        continue
                    if any(u is not None and not self.fits(u, self.slot_points[j], v, point)
                           for j, u in enumerate(chosen)):
                        continue
                    if any(not self.fits(v, point, w, q) for w, q in self.anchors.items()):
                        continue
                chosen.append(v)
                yield from extend(k + 1)
                chosen.pop()

        for f in extend(0):
            if self.is_feasible(f):
                yield f

    def layered(self):
        """Слои состояний; parents[i][f] - список предшественников f в слое i-1."""
        layer = {f: [] for f in self.initial_windows()}
        parents = [layer]
        self.states = len(layer)
        for mid in range(self.r + 1, self.size - self.r):
            following = {}
            for f in layer:
                for entering in [None] + sorted(self.unplaced(f)):
                    nxt = self.successor(f, entering)
                    if not self.succeeds(f, nxt):
                        continue
                    if nxt in following:
                        following[nxt].append(f)
                        continue
                    if self.is_feasible(nxt):
                        following[nxt] = [f]
            layer = following
            parents.append(layer)
            self.states += len(layer)
            if self.budget is not None and self.states > self.budget.max_nodes:
                raise BudgetExceeded(self.states, 0.0)
            if not layer:
                break
        self.layers = len(parents)
        logger.debug('window search: %s layers, %s states', self.layers, self.states)
        return parents

    def placements(self, max_paths=None):
        """Все размещения (вершина -> точка), соответствующие путям из начального слоя
        в принимающее состояние последнего слоя; первыми идут лексикографически первые."""
        if not self.anchors_valid():
            return
        if self.size < 2 * self.r + 1:
            yield from self._fallback()
            return
        parents = self.layered()
        if len(parents) != self.size - 2 * self.r:
            return
        finals = [f for f in parents[-1] if self.accepts(f)]
        produced = 0
        path = []

        def walk(level, f):
            nonlocal produced
            path.append(f)
            if level == 0:
                yield self._assemble(path)
                produced += 1
            else:
                for parent in parents[level][f]:
                    if max_paths is not None and produced >= max_paths:
                        break
                    yield from walk(level - 1, parent)
            path.pop()

        for f in finals:
            if max_paths is not None and produced >= max_paths:
                return
            yield from walk(len(parents) - 1, f)

    def _assemble(self, path):
        placement = dict(self.anchors)
        for f in path:
            for v, index in f.positions().items():
                placement[v] = self.slot_points[index]
        return placement

    def _fallback(self):
        """Короткая дуга: полный перебор с той же метрикой."""
        if self.last_vertex is None:
            codomain = list(self.slot_points) + list(self.anchors.values())
            found = brute_force_embed(self.g, self.dg, None, None, self.d, codomain=codomain,
                                      budget=self.budget, fixed=self.anchors, universe=self.universe,
                                      host_distance=self.distance)
            if found is not None:
                yield dict(found.items())
            return
        # вершина last_vertex занимает последнюю использованную свободную позицию
        for index in range(self.size):
            fixed = dict(self.anchors)
            fixed[self.last_vertex] = self.slot_points[index]
            codomain = list(self.slot_points[:index + 1]) + list(self.anchors.values())
            found = brute_force_embed(self.g, self.dg, None, None, self.d, codomain=codomain,
                                      budget=self.budget, fixed=fixed, universe=self.universe,
                                      host_distance=self.distance)
            if found is not None:
                yield dict(found.items())
                return


def enumerate_anchors(g, dg, d, radius=None, start=None):
    """Все Ψ на позициях -r..r с занятой позицией 0, попарно несжимающие с растяжением <= d
    (расстояние между позициями - |p - q|)."""
    radius = d + 1 if radius is None else radius
    d = Fraction(d)
    rows = dg.rows
    positions = [p for p in range(-radius, radius + 1) if p != 0]
    starts = range(g.n) if start is None else [start]
    result = []
    for x in starts:
        chosen = [(x, 0)]

        def extend(k):
            if k == len(positions):
                result.append(Anchor(tuple(sorted(chosen, key=lambda item: item[1]))))
                return
            extend(k + 1)
            p = positions[k]
            used = {v for v, _ in chosen}
            for v in range(g.n):
                if v in used:
                    continue
                if all(rows[u][v] <= abs(p - q) and abs(p - q) * d.denominator <= d.numerator * rows[u][v]
                       for u, q in chosen):
                    chosen.append((v, p))
                    extend(k + 1)
                    chosen.pop()

        extend(0)
    return result


def window_count_bound(d, x):
    return (4 * d * (2 * d + 2)) ** x


def anchor_count_bound(n, d):
    return n * window_count_bound(d, 2 * d + 2)


def window_count(g, dg, d, x, start):
    """Число последовательностей u_1 = start, u_2, ... с зазорами 1..d между соседними
    образами, попарно несжимающих с растяжением <= d и с размахом ровно x."""
    rows = dg.rows
    count = 0
    chosen = [(start, 0)]

    def extend():
        nonlocal count
        last = chosen[-1][1]
        if last == x:
            count += 1
            return
        used = {v for v, _ in chosen}
        for gap in range(1, d + 1):
            p = last + gap
            if p > x:
                break
            for v in range(g.n):
                if v in used:
                    continue
                if all(rows[u][v] <= p - q <= d * rows[u][v] for u, q in chosen):
                    chosen.append((v, p))
                    extend()
                    chosen.pop()

    extend()
    return count
