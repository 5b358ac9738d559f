"""Weak discrete gradient optimisation: problems, schemes and certificates."""

from ._wdgopt import *  # noqa: F401,F403
from ._wdgopt import __doc__  # noqa: F401
