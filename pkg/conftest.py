"""Configure Django before pytest collects the test modules."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fringelab.settings')
django.setup()
