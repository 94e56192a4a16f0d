"""Exception hierarchy shared by all ttoconj modules."""


class TTOError(ValueError):
    """Base class for every error raised by the library."""


class PoleProximityError(TTOError):
    pass


class DomainError(TTOError):
    """A point lies outside the closed unit disk or too close to the circle."""


class IndexOutOfRangeError(TTOError, IndexError):
    pass


class EmptySubsetError(TTOError):
    pass


class DuplicateZerosError(TTOError):
    pass


class SeparationTooSmallError(TTOError):
    pass


class GridMismatchError(TTOError):
    pass


class NotInModelSpaceError(TTOError):
    pass


class DimensionMismatchError(TTOError):
    pass


class IllConditionedGramError(TTOError):
    pass


class BasisMismatchError(TTOError):
    pass


class NotTTOError(TTOError):
    pass


class DegenerateConstraintsError(TTOError):
    pass


class GenerationExhaustedError(TTOError):
    pass
