"""Exception hierarchy shared by every module."""


class WmcsError(Exception):
    """Base class for all library errors."""


class CycleError(WmcsError):
    pass


class DuplicateLabelError(WmcsError):
    pass


class SizeLimitError(WmcsError):
    pass


class MissingJoinError(WmcsError):
    pass


class HypothesisError(WmcsError):
    """A theorem's premise does not hold for the supplied instance."""


class NotLatticeError(WmcsError):
    pass


class EmptyDomainError(WmcsError):
    pass


class BudgetExceeded(WmcsError):
    def __init__(self, message: str, coverage: int = 0, total: int | None = None):
        super().__init__(message)
        self.coverage = coverage
        self.total = total


class TheoremViolation(WmcsError):
    """Raised when a proven statement fails on a concrete instance."""


class NotInXPlusError(WmcsError):
    pass


class DeadEndError(WmcsError):
    pass


class UnknownGalleryName(WmcsError):
    pass


class DemandAxiomViolation(WmcsError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class RuleDomainError(WmcsError):
    pass


class AllocationError(WmcsError):
    pass


class InfeasibleCapacityError(WmcsError):
    pass


class SchemaError(WmcsError):
    pass
