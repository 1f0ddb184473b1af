"""Magnetic dipole chains and rings: discrete energies, continuum limits and ring mechanics."""

from ._magchain import *  # noqa: F401,F403
from ._magchain import __doc__  # noqa: F401
