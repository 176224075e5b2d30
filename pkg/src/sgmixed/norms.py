"""Broken weighted norms, relative errors and convergence rates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .exact import ExactSolution
from .quadrature import QuadRule, graded_corner_rule, triangle_quadrature
from .space import FESpace

ERROR_QUAD_DEGREE = 20
GRADING_LEVELS = 4
CHUNK = 1024


def _chunks(cells: np.ndarray, size: int = CHUNK):
    for s in range(0, len(cells), size):
        yield cells[s:s + size]


def _field_derivatives(space: FESpace, u: np.ndarray, rule: QuadRule, cells: np.ndarray):
    """Gradient ``(ne, nq, 2, 2)`` and Hessian ``(ne, nq, 2, 2, 2)`` of a vector field."""
    ns = space.dofmap.nscalar
    _, g, H = space.tabulate(rule.points, 2, cells)
    cd = space.dofmap.cell_dofs[cells]
    G = np.stack([np.einsum("eqdx,ed->eqx", g, u[c * ns + cd]) for c in range(2)], axis=2)
    Hs = np.stack([np.einsum("eqdxy,ed->eqxy", H, u[c * ns + cd]) for c in range(2)], axis=2)
    return G, Hs


def _sq_norms(space: FESpace, u: np.ndarray, rule: QuadRule, cells, exact=None):
    """``(||grad e||^2, ||grad^2_h e||^2, ||grad u||^2, ||grad^2 u||^2)`` over ``cells``.

    ``e = exact - u_h`` when ``exact`` is given, otherwise ``e = u_h``.
    """
    mesh = space.mesh
    acc = np.zeros(4)
    for ch in _chunks(np.asarray(cells)):
        w = mesh.areas[ch, None] * rule.weights[None, :]
        G, H = _field_derivatives(space, u, rule, ch)
        if exact is not None:
            xy = space.quad_xy(rule, ch)
            Ge = np.moveaxis(exact.grad(xy[..., 0], xy[..., 1]), (0, 1), (-2, -1))
            He = np.moveaxis(exact.hess(xy[..., 0], xy[..., 1]), (0, 1, 2), (-3, -2, -1))
            acc[2] += np.einsum("eq,eqij->", w, Ge ** 2)
            acc[3] += np.einsum("eq,eqijk->", w, He ** 2)
            G = Ge - G
            H = He - H
        acc[0] += np.einsum("eq,eqij->", w, G ** 2)
        acc[1] += np.einsum("eq,eqijk->", w, H ** 2)
    return acc


def weighted_broken_norm(space: FESpace, u: np.ndarray, iota: float,
                         quad_degree: int = ERROR_QUAD_DEGREE) -> float:
    """``||grad v|| + iota ||grad^2_h v||`` for a vector field with global DoFs ``u``."""
    rule = triangle_quadrature(quad_degree)
    s = _sq_norms(space, np.asarray(u, float), rule, np.arange(space.mesh.ntriangles))
    return math.sqrt(s[0]) + iota * math.sqrt(s[1])


@dataclass(frozen=True)
class ErrorReport:
    grad_error: float
    hess_error: float
    grad_exact: float
    hess_exact: float
    iota: float

    @property
    def absolute(self) -> float:
        return self.grad_error + self.iota * self.hess_error

    @property
    def reference(self) -> float:
        return self.grad_exact + self.iota * self.hess_exact

    @property
    def relative(self) -> float:
        return self.absolute / self.reference


def singular_cells(space: FESpace, point, tol: float = 1e-12) -> np.ndarray:
    """``(cells, local vertex index)`` for triangles with a vertex at ``point``."""
    X = space.mesh.corners
    hit = np.linalg.norm(X - np.asarray(point)[None, None, :], axis=2) < tol
    cells = np.flatnonzero(hit.any(axis=1))
    return cells, hit[cells].argmax(axis=1)


def error_report(space: FESpace, u: np.ndarray, exact: ExactSolution, iota: float,
                 quad_degree: int = ERROR_QUAD_DEGREE,
                 grading_levels: int = GRADING_LEVELS) -> ErrorReport:
    """Error pieces of ``u_h`` against ``exact``.

    Cells touching ``exact.singular_point`` use a rule graded toward that vertex.
    """
    rule = triangle_quadrature(quad_degree)
    u = np.asarray(u, float)
    nt = space.mesh.ntriangles
    regular = np.arange(nt)
    acc = np.zeros(4)
    if exact.singular:
        cells, corners = singular_cells(space, exact.singular_point)
        mask = np.ones(nt, bool)
        mask[cells] = False
        regular = np.flatnonzero(mask)
        for c, k in zip(cells, corners):
            acc += _sq_norms(space, u, graded_corner_rule(rule, int(k), grading_levels),
                             np.array([c]), exact)
    acc += _sq_norms(space, u, rule, regular, exact)
    return ErrorReport(*np.sqrt(acc), iota=iota)


def relative_error(space: FESpace, u: np.ndarray, exact: ExactSolution, iota: float,
                   quad_degree: int = ERROR_QUAD_DEGREE,
                   grading_levels: int = GRADING_LEVELS) -> float:
    """``||grad(u - u_h)||_{iota,h} / (||grad u|| + iota ||grad^2 u||)``."""
    return error_report(space, u, exact, iota, quad_degree, grading_levels).relative


@dataclass(frozen=True)
class RateRow:
    iota: float
    h: float
    rel_error: float
    rate: Optional[float]


@dataclass(frozen=True)
class RateTable:
    rows: tuple
    label: str = ""

    @property
    def errors(self) -> List[float]:
        return [r.rel_error for r in self.rows]

    @property
    def rates(self) -> List[Optional[float]]:
        return [r.rate for r in self.rows[1:]]


def convergence_rates(errors: Sequence[float]) -> List[Optional[float]]:
    """``log2(e_{i-1} / e_i)``; ``None`` where an error is zero or not finite."""
    out = []
    for a, b in zip(errors[:-1], errors[1:]):
        if a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b):
            out.append(math.log2(a / b))
        else:
            out.append(None)
    return out


def rate_table(errors: Sequence[float], hs: Sequence[float], iota: float,
               label: str = "") -> RateTable:
    if len(errors) != len(hs):
        raise ValueError("errors and mesh sizes differ in length")
    if len(errors) < 2:
        raise ValueError("need at least two levels")
    rates = [None] + convergence_rates(errors)
    rows = tuple(RateRow(iota, float(h), float(e), r) for h, e, r in zip(hs, errors, rates))
    return RateTable(rows, label)
