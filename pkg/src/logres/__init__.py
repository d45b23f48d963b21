"""Exact residue analysis of log-symplectic structures in normal-crossing normal form."""

from .errors import (
    ConsistencyError,
    DegenerateStructureError,
    DimensionError,
    InvalidResidueError,
    LogresError,
    ModelError,
    NotSkewError,
)
from .model import Model, example_model
from .skewlinalg import SkewMatrix, SpanCertificate

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DegenerateStructureError",
    "DimensionError",
    "InvalidResidueError",
    "LogresError",
    "Model",
    "ModelError",
    "NotSkewError",
    "SkewMatrix",
    "SpanCertificate",
    "example_model",
]
