#!/usr/bin/env python
"""Command-line entry point: benchmark commands and Django administration."""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'excited_annealer.settings')
    try:
        from exclqa.cli import dispatch
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
