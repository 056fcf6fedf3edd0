"""Exception types shared by the whole package."""


class InvalidParameterError(ValueError):
    """A numeric parameter is outside the range an operation accepts."""


class InvalidInputError(ValueError):
    """Input data (vectors, matrices, points) is malformed or out of region."""


class NumericalFailureError(ArithmeticError):
    """An iterative or scaled computation failed to produce a usable value.

    ``residual`` carries the last residual norm when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
