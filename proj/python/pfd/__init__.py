"""Phase-field damage elastodynamics: mesh, laws, time steppers and the
tension-rupture scenario, backed by a C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
