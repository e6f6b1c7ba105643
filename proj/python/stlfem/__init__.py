"""Finite-element sound transmission loss simulator."""

from ._stlfem import *  # noqa: F401,F403
from ._stlfem import __doc__, __version__  # noqa: F401
