"""k-bounded all-pairs edge and vertex connectivity on directed graphs.

Randomised algebraic algorithms over a prime field, with a max-flow oracle
for checking them.
"""

from .errors import (
    BoundedConnError,
    DimensionError,
    EncodingExhausted,
    EncodingFailure,
    FieldMismatchError,
    ParameterError,
    ParseError,
    SingularError,
)
from .field import DEFAULT_PRIME, FieldElement, PrimeField
from .graph import Digraph, parse_graph
from .linalg import FpMatrix
from .results import ConnectivityMatrix

__all__ = [
    "BoundedConnError",
    "ConnectivityMatrix",
    "DEFAULT_PRIME",
    "Digraph",
    "DimensionError",
    "EncodingExhausted",
    "EncodingFailure",
    "FieldElement",
    "FieldMismatchError",
    "FpMatrix",
    "ParameterError",
    "ParseError",
    "PrimeField",
    "SingularError",
    "parse_graph",
]

__version__ = "0.1.0"
