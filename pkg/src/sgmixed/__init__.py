"""Nonconforming mixed finite elements for nearly incompressible strain gradient elasticity.

The displacement element enriches ``P_r`` with edge and element bubbles
built from Jacobi polynomials; the pressure is continuous ``P_{r-1}``.
"""
__version__ = "0.1.0"

from ._core import BACKEND  # noqa: E402
from .assembly import MaterialParams, assemble_blocks, build_saddle_system  # noqa: E402
from .mesh import Mesh, unit_square_mesh  # noqa: E402
from .space import BoundaryData, FESpace  # noqa: E402
from .solver import infsup_probe, solve_saddle  # noqa: E402
from .norms import rate_table, relative_error, weighted_broken_norm  # noqa: E402

__all__ = [
    "BACKEND", "MaterialParams", "assemble_blocks", "build_saddle_system", "Mesh",
    "unit_square_mesh", "BoundaryData", "FESpace", "infsup_probe", "solve_saddle",
    "rate_table", "relative_error", "weighted_broken_norm", "__version__",
]
