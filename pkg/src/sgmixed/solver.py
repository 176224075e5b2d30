"""Direct solution of the saddle system and a dense inf-sup probe."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import (CapabilityError, GeometricBlocks, MaterialParams, SaddleSystem,
                       assemble_blocks)
from .mesh import Mesh
from .quadrature import triangle_quadrature
from .space import FESpace, hat_integrals

RESIDUAL_TOL = 1e-8
DENSE_CAP = 6000


class IllPosedError(RuntimeError):
    """Factorization failed: the configuration has no unique solution."""


class ConditioningError(RuntimeError):
    """The computed solution misses the residual contract."""

    def __init__(self, msg: str, report: "SolveReport"):
        super().__init__(msg)
        self.report = report


@dataclass(frozen=True)
class SolveReport:
    residual: float
    n_dofs: int
    nnz_factor: int
    min_abs_pivot: float
    max_abs_pivot: float
    wall_time: float

    def as_dict(self) -> dict:
        return dict(residual=self.residual, n_dofs=self.n_dofs, nnz_factor=self.nnz_factor,
                    min_abs_pivot=self.min_abs_pivot, max_abs_pivot=self.max_abs_pivot,
                    wall_time=self.wall_time)


def nested_dissection(G: sp.spmatrix, coords: np.ndarray, leaf: int = 64) -> np.ndarray:
    """Fill-reducing symmetric ordering by recursive coordinate bisection.

    Each set is split at the median of its longer extent; the nodes of the
    lower half adjacent to the upper half form the separator, ordered last.
    """
    G = sp.csr_matrix(G, copy=True)
    G.data = np.ones_like(G.data)
    G = (G + G.T).tocsr()
    parts: List[np.ndarray] = []
    stack = [(np.arange(G.shape[0]), False)]
    while stack:
        idx, done = stack.pop()
        if done or len(idx) <= leaf:
            parts.append(idx)
            continue
        p = coords[idx]
        ax = int(np.argmax(p.max(axis=0) - p.min(axis=0)))
        low = p[:, ax] <= np.median(p[:, ax])
        if low.all() or not low.any():
            parts.append(idx)
            continue
        L, R = idx[low], idx[~low]
        cut = np.diff(G[L][:, R].indptr) > 0
        # popped in reverse: L, R, then separator
        stack.append((L[cut], True))
        stack.append((R, False))
        stack.append((L[~cut], False))
    return np.concatenate(parts)


class _Factor:
    """Factorization of the unbordered saddle matrix with iterative refinement."""

    def __init__(self, K: sp.csc_matrix, coords: Optional[np.ndarray]):
        self.K = K
        self.perm = None
        self.lu = None
        if coords is not None:
            perm = nested_dissection(K, coords)
            try:
                # quasi-definite: any symmetric ordering is stable without pivoting
                lu = spla.splu(K[perm][:, perm].tocsc(), permc_spec="NATURAL",
                               diag_pivot_thresh=0.0, options=dict(SymmetricMode=True))
                if np.all(np.isfinite(lu.U.diagonal())):
                    self.lu, self.perm = lu, perm
            except RuntimeError:
                pass
        if self.lu is None:
            try:
                self.lu = spla.splu(K, permc_spec="COLAMD")
            except RuntimeError as exc:  # "Factor is exactly singular"
                raise IllPosedError(f"singular saddle matrix ({exc})") from exc

    def _raw(self, b: np.ndarray) -> np.ndarray:
        if self.perm is None:
            return self.lu.solve(b)
        x = np.empty_like(b)
        x[self.perm] = self.lu.solve(b[self.perm])
        return x

    def solve(self, b: np.ndarray, steps: int = 4) -> np.ndarray:
        """Solve with refinement; the iterate and residual are kept in extended precision.

        Fourth-order operators make ``|K| |x|`` exceed ``|b|`` by ``O(h^-4)``, so
        rounding ``x`` to double alone already costs a relative residual near 1e-8.
        """
        Kl = self._K_long
        bl = np.asarray(b, dtype=np.longdouble)
        x = self._raw(b).astype(np.longdouble)
        for _ in range(steps):
            r = bl - Kl @ x
            x = x + self._raw(r.astype(float))
        return x

    @property
    def _K_long(self):
        if getattr(self, "_kl", None) is None:
            self._kl = self.K.astype(np.longdouble).tocsr()
        return self._kl

    @property
    def nnz(self) -> int:
        return int(self.lu.L.nnz + self.lu.U.nnz)

    @property
    def pivots(self) -> np.ndarray:
        return np.abs(self.lu.U.diagonal())


def solve_saddle(system: SaddleSystem, tol: float = RESIDUAL_TOL):
    """Return ``(u, p, multiplier, report)`` on the unknowns of ``system``.

    The mean row, when present, is eliminated by bordering so that only the
    quasi-definite block is factorized.  ``multiplier`` is ``None`` without
    a mean row.
    """
    t0 = time.perf_counter()
    K0 = system.matrix(bordered=False)
    fac = _Factor(K0, system.coords)
    b0 = np.concatenate([system.rhs_u, system.rhs_p])
    x = fac.solve(b0)
    mult = None
    if system.w is not None:
        W = np.concatenate([np.zeros(system.n_u), system.w])
        z = fac.solve(W)
        denom = W @ z
        if not np.isfinite(denom) or abs(denom) < 1e-300:
            raise IllPosedError("mean constraint is incompatible with the system")
        mult = float((W @ x) / denom)
        x = x - mult * z
        x = np.append(x, np.longdouble(mult))
    K = system.matrix().astype(np.longdouble).tocsr()
    b = system.rhs().astype(np.longdouble)
    nb = float(np.linalg.norm(b.astype(float)))
    res = float(np.linalg.norm((K @ x - b).astype(float)))
    rel = res / nb if nb > 0 else res
    x = x.astype(float)
    piv = fac.pivots
    report = SolveReport(float(rel), K.shape[0], fac.nnz, float(piv.min()), float(piv.max()),
                         time.perf_counter() - t0)
    if not np.all(np.isfinite(x)) or piv.min() == 0.0:
        raise IllPosedError("saddle matrix is numerically singular")
    if rel >= tol:
        raise ConditioningError(f"relative residual {rel:.2e} exceeds {tol:.0e}", report)
    nu, npr = system.n_u, system.n_p
    return x[:nu], x[nu:nu + npr], mult, report


def gradient_gram(space: FESpace, quad_degree: int, iota: float) -> sp.csr_matrix:
    """Gram matrix of ``(grad v, grad w) + iota^2 (grad^2_h v, grad^2_h w)`` over all DoFs."""
    rule = triangle_quadrature(quad_degree)
    mesh, dm = space.mesh, space.dofmap
    _, g, H = space.tabulate(rule.points, 2)
    w = mesh.areas[:, None] * rule.weights[None, :]
    loc = (np.einsum("eq,eqax,eqbx->eab", w, g, g)
           + iota ** 2 * np.einsum("eq,eqaxy,eqbxy->eab", w, H, H))
    nb = loc.shape[1]
    S = sp.coo_matrix((loc.ravel(),
                       (np.repeat(dm.cell_dofs[:, :, None], nb, 2).ravel(),
                        np.repeat(dm.cell_dofs[:, None, :], nb, 1).ravel())),
                      shape=(dm.nscalar, dm.nscalar)).tocsr()
    return sp.block_diag([S, S], format="csr")


def infsup_constant(space: FESpace, params: MaterialParams,
                    blocks: Optional[GeometricBlocks] = None, cap: int = DENSE_CAP) -> float:
    """Discrete inf-sup constant of ``b_{iota,h}`` in the broken and weighted H^1 norms.

    Smallest ``theta`` of ``B X^{-1} B^T q = theta C q`` over pressures that
    vanish on the boundary and have zero mean; ``X`` is the displacement Gram
    matrix on clamped fields.
    """
    blocks = blocks or assemble_blocks(space)
    dm = space.dofmap
    fu, fp = dm.free_u, dm.pressure_free
    if len(fu) + len(fp) > cap:
        raise CapabilityError(f"dense eigensolve limited to {cap} unknowns")
    X = gradient_gram(space, blocks.quad_degree, params.iota)[fu][:, fu].toarray()
    B = blocks.B(params)[fp][:, fu].toarray()
    C = blocks.C(params)[fp][:, fp].toarray()
    # orthonormal basis of the zero-mean pressures
    w = hat_integrals(space.mesh)[fp]
    Z = sla.null_space(w[None, :])
    if Z.shape[1] == 0:
        return math.inf  # no admissible pressure
    Bz = Z.T @ B
    Cz = Z.T @ C @ Z
    L = sla.cho_factor(X)
    S = Bz @ sla.cho_solve(L, Bz.T)
    S = 0.5 * (S + S.T)
    theta = sla.eigh(S, Cz, eigvals_only=True, subset_by_index=[0, 0])[0]
    return float(np.sqrt(max(theta, 0.0)))


def infsup_probe(meshes: Iterable[Mesh], params: MaterialParams, r: int = 2) -> List[float]:
    """``beta_h`` for each mesh of a (small) sequence."""
    return [infsup_constant(FESpace(m, r), params) for m in meshes]
