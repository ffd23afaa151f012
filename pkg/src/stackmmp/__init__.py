"""Exact toolkit for complete simplicial stacky fans: validation, walls,
the toric minimal model program, sheaf cohomology, and construction plus
verification of complete exceptional collections.  All arithmetic is exact
(arbitrary-precision integers and rationals)."""

__version__ = "1.0.0"

from .fans import BUILTIN_FANS, FanError, StackyFan, load_fan  # noqa: F401
