"""Exception hierarchy shared by every pwprank module."""


class PwpError(Exception):
    """Base class for all pwprank errors."""


class ShapeError(PwpError, ValueError):
    """Matrix dimensions are wrong (ragged, non-square, empty, out of range)."""


class ParseError(PwpError, ValueError):
    """A token in an input file could not be parsed."""


class DuplicateEdge(PwpError, ValueError):
    """The same (source, target) pair appears twice in an edge list."""


class BadWeight(PwpError, ValueError):
    """An edge weight or matrix entry is NaN or infinite."""


class BlockStructureError(PwpError, ValueError):
    """A process-matter block matrix has a nonzero diagonal block."""


class TruncationNotConverged(PwpError, ArithmeticError):
    """The PWP series hit ``max_terms`` before its tail bound met ``tol``.

    Attributes:
        partial: the normalized partial sum reached so far.
        bound: the last a-priori term bound.
        terms: number of terms summed.
        param_value: the sweep parameter at which it happened, if any.
    """

    def __init__(self, message, partial=None, bound=None, terms=None, param_value=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound
        self.terms = terms
        self.param_value = param_value


class NotRealDiagonalizable(PwpError, ArithmeticError):
    """The matrix has eigenvalues with non-negligible imaginary part."""

    def __init__(self, message, imaginary_parts=()):
        super().__init__(message)
        self.imaginary_parts = tuple(imaginary_parts)


class IllConditionedBasis(PwpError, ArithmeticError):
    """The eigenbasis is singular or too ill-conditioned to reconstruct D."""

    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class NoBracket(PwpError, ValueError):
    """The function does not change sign over the requested bracket."""


class Degenerate(PwpError, ValueError):
    """An exponential sum vanishes identically (the two scores coincide)."""
