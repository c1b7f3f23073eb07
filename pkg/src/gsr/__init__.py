"""Induced representations of group-graded *-algebras.

Construct characters of the commutative degree-zero subalgebra, run the
partial group action on them, induce Hilbert-space representations as
explicit (truncated) matrices, and verify the results exactly or in floats.
"""

__version__ = "0.1.0"

from .scalars import Scalar
from .groups import GroupSpec
from .words import GradedWord, NCPolynomial
from .algebra import GradedAlgebraSpec

__all__ = [
    "Scalar",
    "GroupSpec",
    "GradedWord",
    "NCPolynomial",
    "GradedAlgebraSpec",
    "__version__",
]
