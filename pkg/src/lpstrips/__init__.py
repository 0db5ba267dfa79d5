"""Exact L^p-cohomology strip tables for solvable Lie groups R^r x| R^n.

Submodules: ``core`` (rationals, interval sets, weights, eigenvalue profiles),
``structure``, ``straight``, ``strips``, ``heis``, ``asymptotics``, ``verify``
and the ``cli`` entry point.
"""

from .core import (INF, ContractError, DomainError, EigProfile, Piece, PuncturedIntervalSet,
                   Status, WeightConfig, conjugate, dual_pair, parse_rat, parse_xrat, rat_str,
                   threshold, w_k, W_k)
from .straight import CanonicalMu, canonicalize, is_straight, p_alpha, quasi_isometric
from .strips import (StripFlags, StripReport, classify, complex_hyperbolic_table,
                     real_hyperbolic_table, s_alpha_degree2, sl3_degree2, strip_report)
from .structure import StructureReport, analyze

__version__ = "0.1.0"

__all__ = [
    "INF", "ContractError", "DomainError", "EigProfile", "Piece", "PuncturedIntervalSet", "Status",
    "WeightConfig", "conjugate", "dual_pair", "parse_rat", "parse_xrat", "rat_str", "threshold",
    "w_k", "W_k", "CanonicalMu", "canonicalize", "is_straight", "p_alpha", "quasi_isometric",
    "StripFlags", "StripReport", "classify", "complex_hyperbolic_table", "real_hyperbolic_table",
    "s_alpha_degree2", "sl3_degree2", "strip_report", "StructureReport", "analyze",
]
