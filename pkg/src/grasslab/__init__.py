"""Workbench for middle Grassmannians over small prime fields.

Builds the Grassmannian of n-subspaces of GF(p)^{2n}, its adjacency and
distant graphs, pencils, the projective line over the n x n matrix ring,
and reguli, and verifies their structure theorems exhaustively at desk
scale.
"""

__version__ = "0.1.0"

from .errors import GrasslabError
from .gfcore import FpMatrix, invert, matmul, rref
from .grassmann import (
    GrassmannianIndex,
    build_index,
    graph_metrics,
    is_adjacent,
    is_distant,
    pencil,
    star,
    top,
)
from .reguli import Regulus, frame_regulus, is_regulus, regulus_through
from .ringline import Frame, GL2Element, RingPoint, make_point, to_grassmannian
from .subspace import Subspace, enumerate_subspaces, gaussian_binomial, span

__all__ = [
    "__version__",
    "GrasslabError",
    "FpMatrix",
    "invert",
    "matmul",
    "rref",
    "GrassmannianIndex",
    "build_index",
    "graph_metrics",
    "is_adjacent",
    "is_distant",
    "pencil",
    "star",
    "top",
    "Regulus",
    "frame_regulus",
    "is_regulus",
    "regulus_through",
    "Frame",
    "GL2Element",
    "RingPoint",
    "make_point",
    "to_grassmannian",
    "Subspace",
    "enumerate_subspaces",
    "gaussian_binomial",
    "span",
]
