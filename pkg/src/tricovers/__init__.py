"""Exact computations on translation surfaces unfolded from rational
triangles: vertex combinatorics, fingerprints, J-invariants and covers."""

from .core import TriangleSignature, genus, normalize, signatures, vertex_classes
from .cyclotomic import CyclotomicNumber, RealCyclotomic
from .errors import DomainError, InvariantViolation
from .fingerprint import fingerprint, reconstruct_from_type2
from .unfold import unfold

__version__ = "0.1.0"

__all__ = [
    "CyclotomicNumber",
    "DomainError",
    "InvariantViolation",
    "RealCyclotomic",
    "TriangleSignature",
    "fingerprint",
    "genus",
    "normalize",
    "reconstruct_from_type2",
    "signatures",
    "unfold",
    "vertex_classes",
]
