"""Triangle counting and k-truss kernels written in sparse linear algebra.

Submodules: ``sparse`` (matrix core), ``graph`` (edge lists, adjacency and
incidence), ``ingest`` (TSV / MatrixMarket), ``generator`` (synthetic grid
graphs), ``triangles``, ``ktruss`` and ``bench``.
"""

from .errors import (
    ContractViolation,
    GraphChallengeError,
    InvalidAdjacencyError,
    MalformedIncidenceError,
    ParseError,
)
from .generator import GridSpec
from .graph import EdgeList, Graph
from .sparse import SparseMatrix

__version__ = "0.1.0"
