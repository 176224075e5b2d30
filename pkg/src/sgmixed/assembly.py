"""Sparse assembly of the mixed system.

The forms split into geometry-only pieces that are assembled once per mesh
and then combined for any ``(nu, iota)``::

    a = 2 mu [A_eps + iota^2 A_geps]      (eps, eps) and (grad eps, grad eps)
    b = B0 + iota^2 B2                    (div v, q) and (grad div v, grad q)
    c = M + iota^2 K                      P1 mass and stiffness

Global displacement ids are ``c * nscalar + s`` (see :mod:`sgmixed.space`);
pressure ids are vertex ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from . import _core
from .mesh import Mesh
from .quadrature import triangle_quadrature
from .space import (BoundaryData, DofMap, FESpace, apply_essential_bcs, hat_integrals)

SYSTEM_QUAD_DEGREE = 12
CHUNK = 2048


class CapabilityError(ValueError):
    """Requested configuration is outside what the implementation supports."""


@dataclass(frozen=True)
class MaterialParams:
    """Isotropic material with intrinsic length ``iota``."""

    E: float = 1.0
    nu: float = 0.3
    iota: float = 1.0

    def __post_init__(self):
        if not self.nu < 0.5:
            raise ValueError("Poisson ratio must be < 0.5")
        if not self.nu > -1.0:
            raise ValueError("Poisson ratio must be > -1")
        if not self.iota > 0:
            raise ValueError("iota must be positive")
        if not self.E > 0:
            raise ValueError("E must be positive")

    @classmethod
    def from_nu(cls, nu: float, iota: float = 1.0, E: float = 1.0) -> "MaterialParams":
        return cls(E=E, nu=nu, iota=iota)

    @property
    def lam(self) -> float:
        return self.E * self.nu / ((1 + self.nu) * (1 - 2 * self.nu))

    @property
    def mu(self) -> float:
        return self.E / (2 * (1 + self.nu))


def min_system_degree(r: int) -> int:
    """Exactness needed for products of shape-function gradients (degree ``r + 4`` functions)."""
    return 2 * (r + 3)


def _check_degree(space: FESpace, quad_degree: int) -> None:
    need = min_system_degree(space.r)
    if quad_degree < need:
        raise CapabilityError(
            f"quadrature degree {quad_degree} too low for r={space.r} (need >= {need})")


def _coo(rows, cols, vals, shape) -> sp.csr_matrix:
    M = sp.coo_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=shape)
    return M.tocsr()


@dataclass
class GeometricBlocks:
    """Parameter-free pieces of the forms over all (free and fixed) DoFs."""

    A_eps: sp.csr_matrix
    A_geps: sp.csr_matrix
    B0: sp.csr_matrix
    B2: sp.csr_matrix
    M: sp.csr_matrix
    K: sp.csr_matrix
    quad_degree: int

    def A(self, params: MaterialParams) -> sp.csr_matrix:
        return (2 * params.mu) * (self.A_eps + params.iota ** 2 * self.A_geps)

    def B(self, params: MaterialParams) -> sp.csr_matrix:
        return self.B0 + params.iota ** 2 * self.B2

    def C(self, params: MaterialParams) -> sp.csr_matrix:
        return self.M + params.iota ** 2 * self.K


def p1_blocks(mesh: Mesh):
    """P1 mass and stiffness matrices (exact formulas)."""
    T = mesh.triangles
    area = mesh.areas
    X = mesh.corners
    # gradients of barycentric coordinates
    e = np.stack([X[:, 2] - X[:, 1], X[:, 0] - X[:, 2], X[:, 1] - X[:, 0]], axis=1)
    G = np.stack([-e[..., 1], e[..., 0]], axis=-1) / (2 * area)[:, None, None]
    Kloc = np.einsum("eix,ejx->eij", G, G) * area[:, None, None]
    Mloc = (np.ones((3, 3)) + np.eye(3)) / 12.0 * area[:, None, None]
    rows = np.repeat(T[:, :, None], 3, axis=2)
    cols = np.repeat(T[:, None, :], 3, axis=1)
    n = mesh.nvertices
    return _coo(rows, cols, Mloc, (n, n)), _coo(rows, cols, Kloc, (n, n)), G


def assemble_blocks(space: FESpace, quad_degree: int = SYSTEM_QUAD_DEGREE,
                    chunk: int = CHUNK) -> GeometricBlocks:
    _check_degree(space, quad_degree)
    mesh, dm = space.mesh, space.dofmap
    rule = triangle_quadrature(quad_degree)
    nt = mesh.ntriangles
    nu_full = dm.nu_full
    nv = mesh.nvertices
    vdofs = dm.cell_vector_dofs()
    M, K, G = p1_blocks(mesh)
    area = mesh.areas

    trips = {k: ([], [], []) for k in ("Ae", "Ag", "B0", "B2")}
    for s in range(0, nt, chunk):
        cells = np.arange(s, min(s + chunk, nt))
        _, g, H = space.tabulate(rule.points, 2, cells)
        w = area[cells, None] * rule.weights[None, :]
        Ae, Ag, b0, b2 = _core.local_blocks(g, H, w, rule.points, G[cells])
        vd = vdofs[cells]
        pd = mesh.triangles[cells]
        nl = vd.shape[1]
        for key, loc in (("Ae", Ae), ("Ag", Ag)):
            trips[key][0].append(np.repeat(vd[:, :, None], nl, axis=2))
            trips[key][1].append(np.repeat(vd[:, None, :], nl, axis=1))
            trips[key][2].append(loc)
        for key, loc in (("B0", b0), ("B2", b2)):
            trips[key][0].append(np.repeat(pd[:, :, None], nl, axis=2))
            trips[key][1].append(np.repeat(vd[:, None, :], 3, axis=1))
            trips[key][2].append(loc)

    def build(key, shape):
        r, c, v = (np.concatenate([a.ravel() for a in x]) for x in trips[key])
        return _coo(r, c, v, shape)

    return GeometricBlocks(build("Ae", (nu_full, nu_full)), build("Ag", (nu_full, nu_full)),
                           build("B0", (nv, nu_full)), build("B2", (nv, nu_full)),
                           M, K, quad_degree)


# Public single-form entry points ------------------------------------------

def assemble_A(space: FESpace, params: MaterialParams, blocks: Optional[GeometricBlocks] = None,
               quad_degree: int = SYSTEM_QUAD_DEGREE) -> sp.csr_matrix:
    """Matrix of ``a_{iota,h}`` over all displacement DoFs."""
    blocks = blocks or assemble_blocks(space, quad_degree)
    return blocks.A(params)


def assemble_B(space: FESpace, params: MaterialParams, blocks: Optional[GeometricBlocks] = None,
               quad_degree: int = SYSTEM_QUAD_DEGREE) -> sp.csr_matrix:
    """Matrix of ``b_{iota,h}``: rows are vertex pressures, columns displacement DoFs."""
    blocks = blocks or assemble_blocks(space, quad_degree)
    return blocks.B(params)


def assemble_C(mesh: Mesh, params: MaterialParams) -> sp.csr_matrix:
    M, K, _ = p1_blocks(mesh)
    return M + params.iota ** 2 * K


def assemble_load(space: FESpace, f: Optional[Callable], quad_degree: int = SYSTEM_QUAD_DEGREE,
                  chunk: int = CHUNK) -> np.ndarray:
    """``(f, phi)`` for every displacement DoF; ``f(x, y)`` returns ``(f1, f2)``."""
    dm = space.dofmap
    F = np.zeros(dm.nu_full)
    if f is None:
        return F
    need = space.r + 9
    if quad_degree < need:
        raise CapabilityError(f"load quadrature degree must be >= {need}")
    rule = triangle_quadrature(quad_degree)
    mesh = space.mesh
    nt = mesh.ntriangles
    for s in range(0, nt, chunk):
        cells = np.arange(s, min(s + chunk, nt))
        vals, _, _ = space.tabulate(rule.points, 0, cells)
        xy = space.quad_xy(rule, cells)
        fv = f(xy[..., 0], xy[..., 1])
        w = mesh.areas[cells, None] * rule.weights[None, :]
        for c in range(2):
            fc = np.broadcast_to(np.asarray(fv[c], dtype=float), w.shape)
            loc = np.einsum("eq,eqd->ed", w * fc, vals)
            np.add.at(F, dm.cell_dofs[cells] + c * dm.nscalar, loc)
    return F


# Saddle system -------------------------------------------------------------

@dataclass
class SaddleSystem:
    """Blocks restricted to unknowns, with the lifting of prescribed values applied.

    ``K = [[A, B^T, 0], [B, -C / lam, w], [0, w^T, 0]]`` (the last row and
    column only when ``w`` is present).
    """

    A: sp.csr_matrix
    B: sp.csr_matrix
    C: sp.csr_matrix
    rhs_u: np.ndarray
    rhs_p: np.ndarray
    lam: float
    w: Optional[np.ndarray] = None
    dofmap: Optional[DofMap] = None
    u_fixed: np.ndarray = field(default_factory=lambda: np.zeros(0))
    p_fixed: np.ndarray = field(default_factory=lambda: np.zeros(0))
    coords: Optional[np.ndarray] = None  # point per unknown (u then p), for ordering

    @property
    def n_u(self) -> int:
        return self.A.shape[0]

    @property
    def n_p(self) -> int:
        return self.C.shape[0]

    @property
    def n_dofs(self) -> int:
        return self.n_u + self.n_p + (0 if self.w is None else 1)

    def matrix(self, bordered: bool = True) -> sp.csc_matrix:
        """Full matrix; ``bordered=False`` drops the mean row and column."""
        blocks = [[self.A, self.B.T], [self.B, -self.C / self.lam]]
        if bordered and self.w is not None:
            w = sp.csr_matrix(self.w.reshape(-1, 1))
            blocks[0].append(None)
            blocks[1].append(w)
            blocks.append([None, w.T, None])
        return sp.bmat(blocks, format="csc")

    def rhs(self) -> np.ndarray:
        parts = [self.rhs_u, self.rhs_p]
        if self.w is not None:
            parts.append(np.zeros(1))
        return np.concatenate(parts)

    def full_u(self, u_free: np.ndarray) -> np.ndarray:
        """Global displacement vector including prescribed DoFs."""
        dm = self.dofmap
        out = np.zeros(dm.nu_full)
        out[dm.free_u] = u_free
        out[dm.fixed_u] = self.u_fixed
        return out

    def full_p(self, p_free: np.ndarray) -> np.ndarray:
        dm = self.dofmap
        out = np.zeros(dm.nvertices)
        out[dm.pressure_free] = p_free
        out[dm.pressure_boundary] = self.p_fixed
        return out


def resolve_mean_constraint(setting, bc: BoundaryData) -> bool:
    """``"auto"`` enables the zero-mean row exactly when all essential data vanish."""
    if setting in (True, "on"):
        return True
    if setting in (False, "off", None):
        return False
    if setting == "auto":
        return bc.homogeneous
    raise ValueError(f"mean constraint must be on, off or auto, got {setting!r}")


def build_saddle_system(space: FESpace, params: MaterialParams, f: Optional[Callable] = None,
                        bc: Optional[BoundaryData] = None, mean_constraint="auto",
                        blocks: Optional[GeometricBlocks] = None,
                        quad_degree: int = SYSTEM_QUAD_DEGREE, load_vector=None,
                        bc_quad_degree: int = 20) -> SaddleSystem:
    """Assemble, restrict to unknowns and lift prescribed boundary values.

    Pressures vanish on the boundary unless ``bc.p`` supplies values there.
    """
    bc = bc or BoundaryData()
    blocks = blocks or assemble_blocks(space, quad_degree)
    dm = space.dofmap.with_pinned_pressure(True)
    dm = dm.with_mean_constraint(resolve_mean_constraint(mean_constraint, bc))

    A = blocks.A(params)
    B = blocks.B(params)
    C = blocks.C(params)
    F = assemble_load(space, f, quad_degree) if load_vector is None else load_vector
    fu, xu = dm.free_u, dm.fixed_u
    fp, xp = dm.pressure_free, dm.pressure_boundary
    ufix, pfix = apply_essential_bcs(space, bc, bc_quad_degree, dofmap=dm)

    A_ff = A[fu][:, fu]
    B_ff = B[fp][:, fu]
    C_ff = C[fp][:, fp]
    rhs_u = F[fu].copy()
    rhs_p = np.zeros(len(fp))
    if np.any(ufix):
        rhs_u -= A[fu][:, xu] @ ufix
        rhs_p -= B[fp][:, xu] @ ufix
    if len(xp) and np.any(pfix):
        rhs_u -= B[xp][:, fu].T @ pfix
        rhs_p += (C[fp][:, xp] @ pfix) / params.lam
    w = hat_integrals(space.mesh)[fp] if dm.mean_constraint else None
    sc = space.scalar_dof_coordinates()
    coords = np.vstack([np.vstack([sc, sc])[fu], space.mesh.vertices[fp]])
    return SaddleSystem(A_ff.tocsr(), B_ff.tocsr(), C_ff.tocsr(), rhs_u, rhs_p, params.lam, w,
                        dm, ufix, pfix, coords)
