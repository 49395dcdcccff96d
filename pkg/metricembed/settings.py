"""
Django settings for metricembed project.

Веб-сервера нет: проект используется только через manage.py
(команды solve, verify, oracle, gen, bench) и тесты.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# ключ нужен django даже без сессий и форм
SECRET_KEY = os.environ.get('EMBED_SECRET_KEY', 'metricembed-insecure-local-key')

DEBUG = os.environ.get('EMBED_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'embedding',
    'api',
]

# базы данных нет, все вычисления в памяти
DATABASES = {}

LANGUAGE_CODE = 'ru'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Параметры вычислений

EMBED_THREADS = int(os.environ.get('EMBED_THREADS', os.cpu_count() or 1))
EMBED_SEED = int(os.environ.get('EMBED_SEED', '0'))  # используется только командой gen
EMBED_ORACLE_MAX_NODES = int(os.environ.get('EMBED_ORACLE_MAX_NODES', '2000000'))
EMBED_ORACLE_MAX_SECONDS = float(os.environ.get('EMBED_ORACLE_MAX_SECONDS', '60'))
EMBED_REDUCTION_BUDGET = int(os.environ.get('EMBED_REDUCTION_BUDGET', '5000'))
EMBED_EXACT_TW_LIMIT = int(os.environ.get('EMBED_EXACT_TW_LIMIT', '12'))
EMBED_THETA_MAX_PATHS = int(os.environ.get('EMBED_THETA_MAX_PATHS', '32'))  # размещений на компоненту


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'short': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'short',
        },
    },
    'loggers': {
        'embedding': {
            'handlers': ['console'],
            'level': os.environ.get('EMBED_LOG_LEVEL', 'WARNING'),
        },
    },
}
