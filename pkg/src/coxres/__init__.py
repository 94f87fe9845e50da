"""Exact toolkit for quotient singularities C^2/G with G small in GL(2, C).

The package builds the group, its minimal resolution graph, the kernel
lattice of the Cox ring, the toric fans of the ambient space, and the Cox
ring equation with its torsor checks.
"""

from .errors import (
    AmbiguityError,
    CoxresError,
    EnumerationSizeError,
    InadmissibleGroupError,
    InconsistencyError,
    ParameterError,
    UnsupportedFamilyError,
)
from .groups import GroupSpec

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "CoxresError",
    "EnumerationSizeError",
    "GroupSpec",
    "InadmissibleGroupError",
    "InconsistencyError",
    "ParameterError",
    "UnsupportedFamilyError",
]
