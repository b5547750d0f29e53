from __future__ import annotations


class StfError(ValueError):
    """Base class for every error raised by stfharmonics."""


class RankMismatchError(StfError):
    pass


class DimensionError(StfError):
    pass


class ExactArithmeticError(StfError):
    """Raised when an operation would leave the rational-times-power-of-pi field."""


class NotUnitVectorError(StfError):
    pass


class NotOrthogonalError(StfError):
    pass


class PreconditionError(StfError):
    pass


class PoleProximityError(PreconditionError):
    pass


class QuadratureNotConvergedError(StfError):
    def __init__(self, message: str, last_difference: float) -> None:
        super().__init__(message)
        self.last_difference = last_difference


class FormatError(StfError):
    """Malformed tensor, polynomial, expansion or coefficient file."""


class BasisMismatchError(StfError):
    pass


class ArgumentError(StfError):
    """An argument outside the documented domain (zero wave vector, bad m, ...)."""
