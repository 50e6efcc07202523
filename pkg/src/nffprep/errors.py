"""Exception hierarchy shared by every module of the package."""


class NFFError(Exception):
    """Base class for all domain errors raised by nffprep."""


class DomainError(NFFError, ValueError):
    """An input lies outside the region where an operation is defined."""


class NonHermitian(DomainError):
    pass


class DecompositionFailure(NFFError, RuntimeError):
    pass


class SpectrumOutOfRange(DomainError):
    pass


class NonFiniteSample(DomainError):
    pass


class FilterConstructionError(NFFError):
    pass


class DegenerateGroundState(DomainError):
    pass


class DimensionTooLarge(DomainError):
    pass


class NonUnitaryTerm(DomainError):
    pass


class EmptyTermList(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class ZeroOverlap(DomainError):
    pass


class BandNotIsolated(DomainError):
    pass
