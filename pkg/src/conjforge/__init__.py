"""Explicit conjugators between unipotent elements of split semisimple groups."""
from .rootsys import RootSystemKind, build_root_system, builtin_order, search_order, verify_order
from .liealg import chevalley_basis
from .unipotent import ConjugatorWord, UnipotentCoords, conj_word
from .reduce import conjugate, reduce_to_simple

__all__ = ["RootSystemKind", "build_root_system", "builtin_order", "search_order", "verify_order",
           "chevalley_basis", "ConjugatorWord", "UnipotentCoords", "conj_word", "conjugate", "reduce_to_simple"]
__version__ = "0.1.0"
