"""Global spaces: displacement ``V_h = [X_h]^2`` and continuous P1 pressure.

Scalar DoFs of ``X_h`` are numbered entity by entity::

    [ vertex values | edge moments | edge normal moments | interior moments ]

with ``r - 1`` moments per edge and ``r (r - 1) / 2`` per triangle.
Component ``c`` of the displacement uses ids ``c * nscalar + s``.  Edge
moments use the global edge parameterisation (low to high vertex id) and
the global edge normal, so neighbours share them without sign bookkeeping.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .element import (
    EdgeMoment,
    EdgeNormalMoment,
    Geometry,
    InteriorMoment,
    VertexValue,
    dual_coefficients,
    physical_derivatives,
    reference_element,
)
from .mesh import Mesh, edge_normals
from .quadrature import QuadRule, edge_quadrature, triangle_quadrature
from .simplex_poly import jacobi_1d


@dataclass(frozen=True)
class DofMap:
    r: int
    nscalar: int
    cell_dofs: np.ndarray          # (ntri, nb) scalar ids, local DoF order
    boundary_scalar: np.ndarray    # bool (nscalar,)
    boundary_vertices: np.ndarray
    nvertices: int
    mean_constraint: bool = False
    pin_pressure: bool = True      # pressure prescribed at boundary vertices

    @property
    def pressure_boundary(self) -> np.ndarray:
        """Vertex ids with prescribed pressure (empty unless pinned)."""
        if self.pin_pressure:
            return self.boundary_vertices
        return np.zeros(0, dtype=np.int64)

    @property
    def pressure_free(self) -> np.ndarray:
        """Vertex ids carrying pressure unknowns."""
        if not self.pin_pressure:
            return np.arange(self.nvertices)
        mask = np.ones(self.nvertices, bool)
        mask[self.boundary_vertices] = False
        return np.flatnonzero(mask)

    @property
    def free_scalar(self) -> np.ndarray:
        return np.flatnonzero(~self.boundary_scalar)

    @property
    def fixed_scalar(self) -> np.ndarray:
        return np.flatnonzero(self.boundary_scalar)

    @property
    def nu_full(self) -> int:
        return 2 * self.nscalar

    @property
    def free_u(self) -> np.ndarray:
        f = self.free_scalar
        return np.concatenate([f, f + self.nscalar])

    @property
    def fixed_u(self) -> np.ndarray:
        f = self.fixed_scalar
        return np.concatenate([f, f + self.nscalar])

    @property
    def n_u(self) -> int:
        return 2 * int((~self.boundary_scalar).sum())

    @property
    def n_p(self) -> int:
        return len(self.pressure_free)

    def cell_vector_dofs(self) -> np.ndarray:
        """``(ntri, 2 nb)``: component-0 DoFs then component-1 DoFs."""
        return np.hstack([self.cell_dofs, self.cell_dofs + self.nscalar])

    def with_mean_constraint(self, on: bool) -> "DofMap":
        return replace(self, mean_constraint=bool(on))

    def with_pinned_pressure(self, on: bool) -> "DofMap":
        return replace(self, pin_pressure=bool(on))


def build_dofmap(mesh: Mesh, r: int = 2, mean_constraint: bool = False,
                 pin_pressure: bool = True) -> DofMap:
    nv, ne, nt = mesh.nvertices, mesh.nedges, mesh.ntriangles
    m = r - 1
    nint = r * (r - 1) // 2
    off_edge = nv
    off_norm = nv + m * ne
    off_int = nv + 2 * m * ne
    nscalar = off_int + nint * nt

    ref = reference_element(r)
    cols = []
    for d in ref.dofs:
        if isinstance(d, VertexValue):
            cols.append(mesh.triangles[:, d.vertex])
        elif isinstance(d, EdgeMoment):
            cols.append(off_edge + m * mesh.triangle_edges[:, d.edge] + d.k)
        elif isinstance(d, EdgeNormalMoment):
            cols.append(off_norm + m * mesh.triangle_edges[:, d.edge] + d.k)
    for j in range(nint):
        cols.append(off_int + nint * np.arange(nt) + j)
    cell = np.stack(cols, axis=1)

    bnd = np.zeros(nscalar, bool)
    bnd[mesh.boundary_vertices] = True
    for k in range(m):
        bnd[off_edge + m * mesh.boundary_edges + k] = True
        bnd[off_norm + m * mesh.boundary_edges + k] = True

    return DofMap(r, nscalar, cell, bnd, np.asarray(mesh.boundary_vertices), nv,
                  mean_constraint, pin_pressure)


@dataclass
class FESpace:
    """Scalar nonconforming space ``X_h`` on a mesh (per-element dual bases cached)."""

    mesh: Mesh
    r: int = 2
    dofmap: DofMap = field(init=False)
    geometry: Geometry = field(init=False)
    coeffs: np.ndarray = field(init=False)

    def __post_init__(self):
        self.dofmap = build_dofmap(self.mesh, self.r)
        self.geometry = Geometry.from_vertices(self.mesh.corners)
        self.ref = reference_element(self.r)
        self.coeffs = dual_coefficients(self.ref, self.geometry,
                                        self.mesh.normal_signs(), self.mesh.edge_flips())

    @property
    def nb(self) -> int:
        return self.ref.ndofs

    # -- tabulation -------------------------------------------------------
    def tabulate(self, points: np.ndarray, order: int = 2, cells=None):
        """Shape functions of (a subset of) cells at shared barycentric points.

        Returns ``(values, grads, hessians)`` with shapes ``(ne, nq, nb)``,
        ``(ne, nq, nb, 2)``, ``(ne, nq, nb, 2, 2)`` (``None`` beyond ``order``).
        """
        cells = slice(None) if cells is None else cells
        C = self.coeffs[cells]
        gl = self.geometry.grad_lambda[cells]
        tabs = self.ref.tables(points, order)
        vals = np.einsum("qj,ejd->eqd", tabs[0], C)
        if order == 0:
            return vals, None, None
        g, H = physical_derivatives(tabs[1], tabs[2] if order >= 2 else None, gl)
        grads = np.einsum("eqjx,ejd->eqdx", g, C)
        hess = None if H is None else np.einsum("eqjxy,ejd->eqdxy", H, C)
        return vals, grads, hess

    def scalar_dof_coordinates(self) -> np.ndarray:
        """A representative point per scalar DoF (vertex, edge midpoint or centroid)."""
        mesh, m = self.mesh, self.r - 1
        nint = self.r * (self.r - 1) // 2
        mid = np.repeat(mesh.vertices[mesh.edges].mean(axis=1), m, axis=0)
        cen = np.repeat(mesh.corners.mean(axis=1), nint, axis=0)
        return np.vstack([mesh.vertices, mid, mid, cen])

    def quad_xy(self, rule: QuadRule, cells=None) -> np.ndarray:
        X = self.mesh.corners if cells is None else self.mesh.corners[cells]
        return rule.xy(X)

    # -- interpolation ----------------------------------------------------
    def interpolate(self, f: Callable, grad_f: Callable, quad_degree: int = 20) -> np.ndarray:
        """Global DoF vector of ``Pi_h f`` (all DoFs, boundary included)."""
        mesh, r = self.mesh, self.r
        out = np.zeros(self.dofmap.nscalar)
        V = mesh.vertices
        out[:mesh.nvertices] = f(V[:, 0], V[:, 1])
        ev = self._edge_values(f, grad_f, np.arange(mesh.nedges), quad_degree)
        m = r - 1
        out[mesh.nvertices:mesh.nvertices + 2 * m * mesh.nedges] = ev
        rule = triangle_quadrature(quad_degree)
        xy = self.quad_xy(rule)
        fv = f(xy[..., 0], xy[..., 1])
        interior = [d for d in self.ref.dofs if isinstance(d, InteriorMoment)]
        off = mesh.nvertices + 2 * m * mesh.nedges
        nint = len(interior)
        for j, d in enumerate(interior):
            q = d.weight(rule.points)
            out[off + j:off + nint * mesh.ntriangles:nint] = fv @ (rule.weights * q)
        return out

    def _edge_values(self, f, grad_f, edges, quad_degree: int) -> np.ndarray:
        """Edge and normal moments for the given edges, laid out like the DoF vector."""
        mesh, m = self.mesh, self.r - 1
        rule = edge_quadrature(quad_degree)
        a = mesh.vertices[mesh.edges[edges, 0]]
        b = mesh.vertices[mesh.edges[edges, 1]]
        pts = a[:, None, :] + rule.points[None, :, None] * (b - a)[:, None, :]
        t = 2 * rule.points - 1
        fv = f(pts[..., 0], pts[..., 1])
        gv = _as_last_axis(grad_f(pts[..., 0], pts[..., 1]))
        nrm = edge_normals(mesh)[edges]
        dn = np.einsum("eqx,ex->eq", gv, nrm)
        ne = mesh.nedges
        em = np.zeros(m * ne)
        nm = np.zeros(m * ne)
        for k in range(m):
            em[m * edges + k] = fv @ (rule.weights * jacobi_1d(k, 0, 0)(t))
            nm[m * edges + k] = dn @ (rule.weights * jacobi_1d(k, 2, 2)(t))
        return np.concatenate([em, nm])

    def boundary_values(self, f, grad_f, quad_degree: int = 20) -> np.ndarray:
        """Values of the boundary DoFs (vertex values, edge and normal moments)."""
        mesh, m = self.mesh, self.r - 1
        vals = np.zeros(self.dofmap.nscalar)
        bv = mesh.boundary_vertices
        V = mesh.vertices[bv]
        vals[bv] = f(V[:, 0], V[:, 1])
        ev = self._edge_values(f, grad_f, mesh.boundary_edges, quad_degree)
        vals[mesh.nvertices:mesh.nvertices + 2 * m * mesh.nedges] = ev
        return vals[self.dofmap.boundary_scalar]

    # -- evaluation -------------------------------------------------------
    def evaluate(self, u: np.ndarray, points: np.ndarray, order: int = 0, cells=None):
        """Scalar field with DoF vector ``u`` at barycentric ``points`` of each cell."""
        cells_idx = np.arange(self.mesh.ntriangles) if cells is None else np.asarray(cells)
        loc = u[self.dofmap.cell_dofs[cells_idx]]
        vals, grads, hess = self.tabulate(points, order, cells_idx)
        out = [np.einsum("eqd,ed->eq", vals, loc)]
        if order >= 1:
            out.append(np.einsum("eqdx,ed->eqx", grads, loc))
        if order >= 2:
            out.append(np.einsum("eqdxy,ed->eqxy", hess, loc))
        return out[0] if order == 0 else tuple(out)


def _as_last_axis(g) -> np.ndarray:
    """Accept gradients as ``(2, ...)`` sequences or ``(..., 2)`` arrays."""
    if isinstance(g, (tuple, list)):
        return np.stack([np.asarray(x, dtype=float) for x in g], axis=-1)
    return np.asarray(g, dtype=float)


@dataclass(frozen=True)
class BoundaryData:
    """Essential data on the boundary.  ``None`` entries mean zero.

    ``u(x, y)`` returns ``(u1, u2)``; ``grad_u(x, y)`` returns
    ``((du1/dx, du1/dy), (du2/dx, du2/dy))``; ``p(x, y)`` the pressure.
    """

    u: Optional[Callable] = None
    grad_u: Optional[Callable] = None
    p: Optional[Callable] = None

    @property
    def homogeneous(self) -> bool:
        return self.u is None and self.p is None


def apply_essential_bcs(space: FESpace, data: BoundaryData, quad_degree: int = 20,
                        dofmap: Optional[DofMap] = None):
    """Prescribed values ``(u_fixed, p_fixed)`` ordered like ``dofmap.fixed_u`` / ``pressure_boundary``."""
    dm = space.dofmap if dofmap is None else dofmap
    nfix = int(dm.boundary_scalar.sum())
    if data.u is None:
        ufix = np.zeros(2 * nfix)
    else:
        comps = []
        for c in range(2):
            fc = lambda x, y, c=c: np.asarray(data.u(x, y)[c], dtype=float)  # noqa: E731
            gc = lambda x, y, c=c: _as_last_axis(data.grad_u(x, y)[c])  # noqa: E731
            comps.append(space.boundary_values(fc, gc, quad_degree))
        ufix = np.concatenate(comps)
    V = space.mesh.vertices[dm.pressure_boundary]
    pfix = np.zeros(len(V)) if data.p is None else np.asarray(data.p(V[:, 0], V[:, 1]), float)
    return ufix, pfix


def mean_constraint_row(dofmap: DofMap, mesh: Mesh) -> np.ndarray:
    """``w`` with ``w . p = int_Omega p_h`` for pressure unknowns at free vertices."""
    w = np.zeros(mesh.nvertices)
    np.add.at(w, mesh.triangles.ravel(), np.repeat(mesh.areas / 3.0, 3))
    return w[dofmap.pressure_free]


def hat_integrals(mesh: Mesh) -> np.ndarray:
    w = np.zeros(mesh.nvertices)
    np.add.at(w, mesh.triangles.ravel(), np.repeat(mesh.areas / 3.0, 3))
    return w
