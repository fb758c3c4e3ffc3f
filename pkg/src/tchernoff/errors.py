"""Exception hierarchy shared by every module."""


class TChernoffError(Exception):
    """Base class for library errors."""


class StructuralError(TChernoffError, ValueError):
    """Shapes or layouts are incompatible with the requested operation."""


class ContractError(TChernoffError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(TChernoffError, ArithmeticError):
    """A function is evaluated outside its mathematical domain."""


class ResourceError(TChernoffError, RuntimeError):
    """The request would exceed a combinatorial or memory guard."""
