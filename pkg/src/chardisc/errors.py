"""Exception hierarchy shared by every module of the package."""


class CharDiscError(Exception):
    """Base class for all package errors."""


class UnsupportedGroup(CharDiscError, ValueError):
    pass


class NonDominantWeight(CharDiscError, ValueError):
    pass


class WeightSystemTooLarge(CharDiscError):
    pass


class NumericalInconsistency(CharDiscError, ArithmeticError):
    pass


class SingularPoint(CharDiscError, ValueError):
    pass


class SamplerStall(CharDiscError, RuntimeError):
    pass


class ResolutionTooCoarse(CharDiscError, ValueError):
    pass


class CandidateSetTooLarge(CharDiscError):
    pass


class DomainExceeded(CharDiscError, ValueError):
    pass


class SequenceFormatError(CharDiscError, ValueError):
    """Malformed sequence CSV; the message carries the row/column location."""
