"""Rational-inattention electoral competition: attention solver, equilibria and news."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
