"""ellone: exact computational homological algebra on finite complexes.

Chain complexes over exact rationals, barycentric subdivision operators
with their chain homotopies, group cohomology over bar resolutions,
covering-space averaging constructions, and l1/linf seminorms on
(co)homology computed by exact linear programming.
"""

from .core import (
    CapError,
    Chain,
    ChainOperator,
    Cochain,
    DegreeError,
    ElloneError,
    OrientedComplex,
    ParseError,
    PreconditionError,
    boundary,
    coboundary,
    homology_rank,
    kronecker,
    l1_norm,
    linf_norm,
    rat,
    rat_str,
)

__version__ = "0.1.0"
