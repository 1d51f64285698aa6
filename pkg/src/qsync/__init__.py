"""Quantum synchronizable codes built from nested pairs of binary cyclic codes."""

from qsync.gf2 import BitPoly, GF2mField, RingElement

__version__ = "0.1.0"

__all__ = ["BitPoly", "GF2mField", "RingElement", "__version__"]
