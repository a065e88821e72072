"""Lattice stochastic heat equation toolkit (C++ core)."""

from ._shelab import *  # noqa: F401,F403
from ._shelab import __doc__  # noqa: F401
