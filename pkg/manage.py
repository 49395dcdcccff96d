#!/usr/bin/env python
"""Точка входа: solve, verify, oracle, gen, bench и стандартные команды Django."""
import os
import sys


def main(argv=None):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'metricembed.settings')
    try:
        from embedding.management import run
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to install requirements.txt?"
        ) from exc
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == '__main__':
    sys.exit(main())
