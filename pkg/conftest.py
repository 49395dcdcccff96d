"""Django wiring for running the test suite under pytest."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'metricembed.settings')
django.setup()
