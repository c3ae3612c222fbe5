"""Exact-arithmetic engine for compatible Lie-bracket pairs on semisimple
Lie algebras: root systems, Chevalley bases, weak Nijenhuis operators and the
Class I / Class II constructions, with machine verification of every identity.
"""

from .scalars import Q, qf
from .rootsys import build_root_system, from_tag

__all__ = ["Q", "qf", "build_root_system", "from_tag"]
__version__ = "0.1.0"
