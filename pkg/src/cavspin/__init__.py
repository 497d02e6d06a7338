"""Desk-scale numerics for collective spins coupled to optical cavities.

Submodules are imported explicitly, e.g. ``from cavspin import metrology``.
"""

__version__ = "0.1.0"
