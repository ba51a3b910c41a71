"""Python bindings for the felab C++ core."""

from ._felab import *  # noqa: F401,F403
from ._felab import __doc__  # noqa: F401
