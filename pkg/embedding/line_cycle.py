import logging

import numpy as np

from .embeddings import Embedding, verify_nc_distortion
from .exceptions import InputError
from .graphs import DistanceMatrix, HostSpec, degree_gate, generate
from .oracle import brute_force_embed
from .utilities import first_success
from .windows import WindowSearch, enumerate_anchors


logger = logging.getLogger(__name__)


def line_distances(N):
    idx = np.arange(N)
    return DistanceMatrix(np.abs(idx[:, None] - idx[None, :]))


def cycle_distances(N):
    idx = np.arange(N)
    diff = np.abs(idx[:, None] - idx[None, :])
    return DistanceMatrix(np.minimum(diff, N - diff))


def line_metric(p, q):
    return abs(p - q)


def cycle_metric(N):
    def distance(p, q):
        diff = abs(p - q)
        return min(diff, N - diff)
    return distance


def weight_bound(g):
    """M - наибольший вес ребра гостя (1 для невзвешенного)."""
    return g.max_weight


def _verified(g, dg, mapping, host, dh, d):
    f = Embedding(mapping, g.n)
    violation = verify_nc_distortion(g, host, dg, dh, f, d)
    if violation is not None:
        # по построению недостижимо; оставляем след в логах
        logger.error('window search produced an invalid embedding: %s', violation)
        return None
    return f


def _first_verified(g, dg, placements, host, dh, d):
    for placement in placements:
        f = _verified(g, dg, placement, host, dh, d)
        if f is not None:
            return f
    return None


def embed_into_line(g, dg, N, d, budget=None):
    """Вложение в путь из N вершин 0..N-1. Самая левая занятая позиция - 0, а зазоры между
    соседними образами не больше dM, поэтому хватает d*M*(n-1)+1 позиций."""
    n = g.n
    if n > N:
        return None
    if n == 1:
        return Embedding({0: 0}, 1)
    M = weight_bound(g)
    if not degree_gate(g.max_degree, 2, d * M):
        logger.info('line: degree %s exceeds 2dM=%s', g.max_degree, 2 * d * M)
        return None
    length = min(N, d * M * (n - 1) + 1)
    r = d * M + 1
    host, dh = generate(HostSpec('path', size=N)), line_distances(N)

    def task(x):
        def run():
            search = WindowSearch(g, dg, d, r, {x: 0}, range(1, length), line_metric, budget=budget)
            return _first_verified(g, dg, search.placements(), host, dh, d)
        return run

    return first_success(task(x) for x in range(n))


def embed_into_cycle(g, dg, N, d, budget=None):
    """Несжимающее вложение с искажением d в цикл C_N (вершины 0..N-1)."""
    return _embed_cycle(g, dg, N, d, 1, budget)


def embed_weighted_into_cycle(g_weighted, dg, N, d, budget=None):
    """Тот же алгоритм с радиусом окна dM+1 (M - наибольший вес ребра)."""
    return _embed_cycle(g_weighted, dg, N, d, weight_bound(g_weighted), budget)


def _embed_cycle(g, dg, N, d, M, budget):
    n = g.n
    if n > N:
        return None
    if n == 1:
        return Embedding({0: 0}, 1)
    if not degree_gate(g.max_degree, 2, d * M):
        logger.info('cycle: degree %s exceeds 2dM=%s', g.max_degree, 2 * d * M)
        return None
    host = generate(HostSpec('cycle', size=N))
    dh = cycle_distances(N)
    if N < 4 * d * M + 6:
        logger.info('cycle: N=%s below 4dM+6, using exhaustive search', N)
        return brute_force_embed(g, dg, host, dh, d, budget=budget)
    if N > 4 * d * M * n:
        # большой цикл: образ помещается на дуге, дальше пусто
        logger.info('cycle: N=%s above 4dMn, solving on a path', N)
        f = embed_into_line(g, dg, d * M * (n - 1) + 1, d, budget=budget)
        return None if f is None else _verified(g, dg, dict(f.items()), host, dh, d)

    r = d * M + 1
    free = range(r + 1, N - r)
    distance = cycle_metric(N)
    anchors = enumerate_anchors(g, dg, d, radius=r)
    logger.debug('cycle: %s anchors', len(anchors))

    def task(anchor):
        x = anchor.start()
        psi = {v: p % N for v, p in anchor.psi}
        right_zone = any(p < 0 for _, p in anchor.psi)

        def end_check(last):
            # пара (x, последняя вершина) через разрез в позиции 0
            if right_zone or last is None or last[1] is None:
                return True
            y, e = last
            return dg[x, y] <= N - e

        def run():
            search = WindowSearch(g, dg, d, r, psi, free, distance, end_check=end_check, budget=budget)
            return _first_verified(g, dg, search.placements(), host, dh, d)
        return run

    return first_success(task(anchor) for anchor in anchors)


def _zones(N, psi1, psi2, zone1, zone2):
    a1 = zone1 if zone1 is not None else max(psi1.values(), default=0)
    a2 = zone2 if zone2 is not None else (N - min(psi2.values()) + 1 if psi2 else 0)
    if any(not 1 <= p <= a1 for p in psi1.values()):
        raise InputError('prefix anchor outside its zone', code='anchor')
    if any(not N - a2 + 1 <= p <= N for p in psi2.values()):
        raise InputError('suffix anchor outside its zone', code='anchor')
    if a1 + a2 > N:
        raise InputError('anchor zones overlap', code='anchor')
    if set(psi1) & set(psi2):
        raise InputError('anchor domains overlap', code='anchor')
    return a1, a2


def line_fixed_ends_placements(g, dg, N, d, psi1, psi2, zone1=None, zone2=None, universe=None,
                               max_paths=None, budget=None):
    """Все найденные размещения (позиции 1..N) с Ψ1 в префиксе и Ψ2 в суффиксе."""
    psi1, psi2 = dict(psi1), dict(psi2)
    a1, a2 = _zones(N, psi1, psi2, zone1, zone2)
    size = g.n if universe is None else len(universe)
    M = weight_bound(g)
    if 1 in psi1.values() and N in psi2.values() and N > 2 * d * M * size:
        logger.info('line: both ends anchored and N=%s > 2dMn', N)
        return
    search = WindowSearch(g, dg, d, d * M + 1, {**psi1, **psi2}, range(a1 + 1, N - a2 + 1), line_metric,
                          universe=universe, budget=budget)
    yield from search.placements(max_paths=max_paths)


def embed_line_fixed_ends(g, dg, N, d, psi1, psi2, zone1=None, zone2=None, budget=None):
    """Продолжение Ψ1 (префикс [1..a1]) и Ψ2 (суффикс [N-a2+1..N]) до вложения в путь 1..N."""
    placements = line_fixed_ends_placements(g, dg, N, d, psi1, psi2, zone1, zone2, budget=budget)
    return _first_line_result(g, dg, N, d, placements)


def line_prefix_last_placements(g, dg, N, d, psi1, v, zone1=None, universe=None, max_paths=None, budget=None):
    psi1 = dict(psi1)
    a1, _ = _zones(N, psi1, {}, zone1, 0)
    universe = frozenset(range(g.n)) if universe is None else frozenset(universe)
    if v in psi1:
        # последняя вершина закреплена: свободных вершин быть не может
        if universe - set(psi1) or psi1[v] != max(psi1.values()):
            return
        yield psi1
        return
    search = WindowSearch(g, dg, d, d * weight_bound(g) + 1, psi1, range(a1 + 1, N + 1), line_metric,
                          universe=universe, last_vertex=v, budget=budget)
    yield from search.placements(max_paths=max_paths)


def embed_line_prefix_last(g, dg, N, d, psi1, v, zone1=None, budget=None):
    """Продолжение Ψ1, при котором F(u) <= F(v) для всех u."""
    placements = line_prefix_last_placements(g, dg, N, d, psi1, v, zone1, budget=budget)
    return _first_line_result(g, dg, N, d, placements)


def _first_line_result(g, dg, N, d, placements):
    # позиции 1..N соответствуют вершинам пути 0..N-1
    host, dh = generate(HostSpec('path', size=N)), line_distances(N)
    shifted = ({u: p - 1 for u, p in placement.items()} for placement in placements)
    f = _first_verified(g, dg, shifted, host, dh, d)
    return None if f is None else Embedding({u: p + 1 for u, p in f.items()}, g.n)
