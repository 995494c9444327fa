"""
WSGI config for the excited_annealer project (serves the results admin).
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'excited_annealer.settings')

application = get_wsgi_application()
