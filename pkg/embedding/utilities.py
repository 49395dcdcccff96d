import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from django.conf import settings


logger = logging.getLogger(__name__)

DEFAULTS = {
    'EMBED_THREADS': 1,
    'EMBED_SEED': 0,
    'EMBED_ORACLE_MAX_NODES': 2_000_000,
    'EMBED_ORACLE_MAX_SECONDS': 60.0,
    'EMBED_REDUCTION_BUDGET': 5000,
    'EMBED_EXACT_TW_LIMIT': 12,
    'EMBED_THETA_MAX_PATHS': 32,
}


def setting(name):
    '''значение из settings.py, а если проект не сконфигурирован (или ключа нет) - значение по умолчанию'''
    if settings.configured:
        return getattr(settings, name, DEFAULTS[name])
    return DEFAULTS[name]


def first_success(tasks, threads=None):
    """Выполняет функции без аргументов и возвращает первый результат, отличный от None,
    в порядке списка tasks. При threads > 1 задачи считаются параллельно пачками,
    но результат тот же, что и при последовательном выполнении."""
    threads = setting('EMBED_THREADS') if threads is None else threads
    tasks = iter(tasks)
    if threads <= 1:
        for task in tasks:
            result = task()
            if result is not None:
                return result
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        while True:
            batch = [task for _, task in zip(range(threads), tasks)]
            if not batch:
                return None
            # результаты читаются в порядке отправки
            for future in [pool.submit(task) for task in batch]:
                result = future.result()
                if result is not None:
                    return result


def parallel_map(function, items, threads=None):
    """map с сохранением порядка; потоки только при EMBED_THREADS > 1."""
    threads = setting('EMBED_THREADS') if threads is None else threads
    if threads <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, items))


@contextmanager
def stopwatch():
    """with stopwatch() as elapsed: ... ; elapsed() - миллисекунды с начала блока."""
    start = time.perf_counter()
    yield lambda: int((time.perf_counter() - start) * 1000)
