"""Exception hierarchy shared across the package.

Validation failures mean the input itself is malformed; semantic negatives
mean the input is well formed but the answer is a definite no. The CLI maps
the two families to distinct exit codes (1 and 2), and internal-check
failures, which always indicate a bug, to exit 3.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for every error raised by this package."""


class ValidationFailure(WorkbenchError):
    """Input data violates a structural invariant."""


class SemanticNegative(WorkbenchError):
    """Well-formed input whose answer is a definite no."""


class InternalCheckFailed(WorkbenchError):
    """An invariant the algorithms guarantee was violated; always a bug."""


class BadField(ValidationFailure):
    """Field descriptor is malformed or the modulus is not prime."""


class FieldMismatch(ValidationFailure):
    """Operands live over different ground fields."""


class BadShape(ValidationFailure):
    """Matrix or component dimensions are inconsistent."""


class DependentInput(ValidationFailure):
    """A matrix whose columns were required to be independent is not."""


class NotAComplex(ValidationFailure):
    """Differentials do not square to zero or shapes disagree with dims."""


class NotAChainMap(ValidationFailure):
    """Components do not commute with the differentials."""


class BadDegree(ValidationFailure):
    """Degree argument outside the allowed range."""


class NotACommutingSquare(ValidationFailure):
    """The four maps of a lifting problem do not commute."""


class NotACategory(ValidationFailure):
    """Composition table fails totality, typing, or unit laws."""


class NotAssociative(NotACategory):
    """Composition table fails associativity; message carries the triple."""


class NotFunctorial(ValidationFailure):
    """A diagram does not respect identities or the composition table."""


class NotNatural(ValidationFailure):
    """A transformation's naturality square fails; message names the arrow."""


class NotReedy(ValidationFailure):
    """Degree or factorization axioms fail for a claimed Reedy structure."""


class DegreeViolation(NotReedy):
    """A raising/lowering arrow does not strictly raise/lower degree."""


class FactorizationNotUnique(NotReedy):
    """Two distinct lower-then-raise factorizations of the same arrow."""


class FactorizationMissing(NotReedy):
    """An arrow admits no lower-then-raise factorization."""


class Infeasible(SemanticNegative):
    """A linear system has no solution."""
