import logging
import time
from dataclasses import dataclass
from fractions import Fraction

from .embeddings import Embedding
from .exceptions import BudgetExceeded, InputError
from .utilities import setting


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int
    max_seconds: float

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise InputError('search budget must be positive', code='budget')

    @classmethod
    def from_settings(cls):
        return cls(setting('EMBED_ORACLE_MAX_NODES'), setting('EMBED_ORACLE_MAX_SECONDS'))


def brute_force_embed(g, dg, h, dh, d, bijective=False, codomain=None, budget=None, fixed=None,
                      universe=None, host_distance=None, node_counter=None):
    """Полный перебор инъективных отображений с отсечением по несжимаемости и растяжению d.

    Вершина гостя выбирается по наименьшему числу оставшихся кандидатов (при равенстве -
    наименьший номер), кандидаты перебираются по возрастанию номера хоста.
    fixed - уже зафиксированная часть отображения, universe - какие вершины гостя размещать,
    host_distance(x, y) заменяет dh для хостов, не заданных графом (тогда обязателен codomain).
    Возвращает Embedding или None; BudgetExceeded - если бюджет исчерпан раньше ответа."""
    budget = budget or SearchBudget.from_settings()
    d = Fraction(d)
    num, den = d.numerator, d.denominator
    fixed = dict(fixed or {})
    if host_distance is None:
        rows = dh.rows

        def host_distance(x, y):
            return rows[x][y]
        hosts = sorted(range(h.n) if codomain is None else codomain)
    else:
        if codomain is None:
            raise InputError('host_distance needs an explicit codomain', code='codomain')
        hosts = sorted(codomain)
    guest = dg.rows
    todo = sorted(set(range(g.n) if universe is None else universe) - set(fixed))

    if bijective and len(todo) + len(fixed) != len(hosts):
        logger.debug('bijective oracle: %s guest vertices, %s host vertices', len(todo) + len(fixed), len(hosts))
        return None

    def fits(v, x, w, y):
        gd = guest[v][w]
        hd = host_distance(x, y)
        return gd <= hd and hd * den <= num * gd

    used = set(fixed.values())
    candidates = {}
    for v in todo:
        candidates[v] = [x for x in hosts if x not in used
                         and all(fits(v, x, w, y) for w, y in fixed.items())]
        if not candidates[v]:
            _report(node_counter, 0)
            return None

    nodes = 0
    started = time.monotonic()
    assignment = dict(fixed)

    def search(domains):
        nonlocal nodes
        if not domains:
            return True
        nodes += 1
        if nodes > budget.max_nodes or (nodes & 1023 == 0 and time.monotonic() - started > budget.max_seconds):
            raise BudgetExceeded(nodes, time.monotonic() - started)
        v = min(domains, key=lambda w: (len(domains[w]), w))
        rest = {w: xs for w, xs in domains.items() if w != v}
        for x in domains[v]:
            narrowed = {}
            for w, xs in rest.items():
                kept = [y for y in xs if y != x and fits(v, x, w, y)]
                if not kept:
                    break
                narrowed[w] = kept
            else:
                assignment[v] = x
                if search(narrowed):
                    return True
                del assignment[v]
        return False

    try:
        found = search(candidates)
    finally:
        _report(node_counter, nodes)
    if not found:
        return None
    return Embedding(assignment, g.n)


def _report(node_counter, nodes):
    if node_counter is not None:
        node_counter(nodes)


def min_distortion_integer(g, dg, h, dh, d_max, budget=None):
    """Наименьшее целое d <= d_max, при котором есть несжимающее вложение с искажением d."""
    if d_max < 1:
        raise InputError('d_max must be >= 1', code='distortion')
    for d in range(1, d_max + 1):
        if brute_force_embed(g, dg, h, dh, d, budget=budget) is not None:
            return d
    return None
