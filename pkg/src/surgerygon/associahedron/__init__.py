"""Ribbon trees and the face, gluing and annular structure of the associahedron."""

from .trees import *  # noqa: F401,F403
from .trees import __all__ as _trees_all
from .arrangements import *  # noqa: F401,F403
from .arrangements import __all__ as _arr_all

__all__ = list(_trees_all) + list(_arr_all)
