"""Allows `python -m qconcurrence`."""

import sys

from .cli import main

sys.exit(main())
