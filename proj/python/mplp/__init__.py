"""Parallel lazy planning with deferred edge evaluation.

The planners run entirely in C++ and release the GIL while searching.
"""

from ._mplp import *  # noqa: F401,F403
from ._mplp import __doc__  # noqa: F401
