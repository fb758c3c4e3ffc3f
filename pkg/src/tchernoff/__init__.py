"""T-product tensor algebra, majorization checks and expander Chernoff bounds."""
from ._backend import BACKEND
from .errors import ContractError, DomainError, ResourceError, StructuralError, TChernoffError
from .tensor import Tensor3

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ContractError",
    "DomainError",
    "ResourceError",
    "StructuralError",
    "TChernoffError",
    "Tensor3",
    "__version__",
]
