"""The nonconforming element ``(K, P_K, Sigma_K)``.

``P_K = P_r + b_K sum_i b_i Q_i + b_K^2 R`` where the bubble factors are
triangle Jacobi polynomials.  Degrees of freedom (in this order):

* vertex values ``v(a_i)``,
* edge moments ``mean_{e_i} v P_k^{(0,0)}(t)``,
* edge normal moments ``mean_{e_i} d_n v P_k^{(2,2)}(t)``,
* interior moments ``mean_K v q`` with ``q = P_{k,m}^{(0,0,0)}`` for
  ``m <= r-3`` and ``q = P_{k,r-2}^{(2,2,2)}`` on the top band.

Edge ``e_i`` is opposite vertex ``a_i``.  On it ``t = l_{i+1} - l_{i+2}``
(indices mod 3), which equals ``l_i^+ - l_i^-`` with the counterclockwise
convention.  The normal is the outward one.  A mesh may flip either
convention per edge through ``normal_signs`` and ``edge_flips``; since
both Jacobi weights are symmetric this only multiplies DoF rows by signs.

The normal-derivative DoFs depend on the element shape through
``|grad l_i|``, so the dual basis is obtained per element by inverting
the DoF matrix.  The vectorised path (:func:`dual_coefficients`) handles a
whole mesh at once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .quadrature import triangle_quadrature
from .simplex_poly import (
    BaryPoly,
    ParameterDomainError,
    bubble,
    edge_bubble,
    homogeneous_monomials,
    jacobi_1d,
    jacobi_tri,
)

SUPPORTED_ORDERS = (2, 3)


class UnisolvenceError(RuntimeError):
    """The DoF matrix of an element is singular."""


# ---------------------------------------------------------------------------
# DoF descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexValue:
    vertex: int


@dataclass(frozen=True)
class EdgeMoment:
    edge: int
    k: int


@dataclass(frozen=True)
class EdgeNormalMoment:
    edge: int
    k: int


@dataclass(frozen=True)
class InteriorMoment:
    k: int
    n: int
    weight: BaryPoly = field(compare=False, repr=False)


def _check_order(r: int) -> None:
    if r not in SUPPORTED_ORDERS:
        raise ParameterDomainError(f"element order r={r} not supported (use 2 or 3)")


def local_dof_count(r: int) -> int:
    return (r * r + 11 * r - 6) // 2


def local_dofs(r: int) -> list:
    _check_order(r)
    dofs: list = [VertexValue(i) for i in range(3)]
    dofs += [EdgeMoment(i, k) for i in range(3) for k in range(r - 1)]
    dofs += [EdgeNormalMoment(i, k) for i in range(3) for k in range(r - 1)]
    for m in range(r - 2):
        for k in range(m + 1):
            dofs.append(InteriorMoment(k, m, jacobi_tri(k, m, 0, 0, 0)))
    for k in range(r - 1):
        dofs.append(InteriorMoment(k, r - 2, jacobi_tri(k, r - 2, 2, 2, 2)))
    return dofs


# ---------------------------------------------------------------------------
# bubble spaces and closed-form dual coefficients
# ---------------------------------------------------------------------------

def _cyclic(i: int):
    return [i % 3, (i + 1) % 3, (i + 2) % 3]


def edge_bubble_basis(r: int, i: int) -> list:
    """``b_K b_i P_{k,r-2}^{(1,2,2)}(l_i, l_i^+, l_i^-)`` for ``k = 0..r-2``."""
    _check_order(r)
    perm = _cyclic(i)
    bb = bubble() * edge_bubble(i)
    return [bb * jacobi_tri(k, r - 2, 1, 2, 2).permute(perm) for k in range(r - 1)]


def interior_bubble_basis(r: int) -> list:
    """``b_K^2 P_{k,r-2}^{(2,2,2)}`` for ``k = 0..r-2``."""
    _check_order(r)
    b2 = bubble() ** 2
    return [b2 * jacobi_tri(k, r - 2, 2, 2, 2) for k in range(r - 1)]


def dual_coefficient_edge(r: int, k: int) -> Fraction:
    """Coefficient of ``b_K b_i P_{k,r-2}^{(1,2,2)}`` in the normal-moment shape function.

    The true coefficient is this value divided by ``|grad l_i|``.
    """
    if not 0 <= k <= r - 2:
        raise ParameterDomainError(f"k={k} outside 0..{r - 2}")
    sign = -1 if (r - k - 1) % 2 else 1
    return Fraction(sign * (k + 3) * (k + 4) * (2 * k + 5),
                    (r - k - 1) * (k + 1) * (k + 2))


def dual_coefficient_interior(r: int, k: int) -> Fraction:
    """Coefficient of ``b_K^2 P_{k,r-2}^{(2,2,2)}`` in the interior shape function."""
    if not 0 <= k <= r - 2:
        raise ParameterDomainError(f"k={k} outside 0..{r - 2}")
    return Fraction((2 * r + 4) * (2 * k + 5) * (r + k + 4) * (r + k + 5) * (k + 3) * (k + 4),
                    2 * (r - k) * (r - 1 - k) * (k + 1) * (k + 2))


# ---------------------------------------------------------------------------
# reference data shared by all elements of one order
# ---------------------------------------------------------------------------

def _edge_mean(p: BaryPoly, i: int, weight) -> Fraction:
    """``mean_{e_i} p(s) w(2s - 1) ds``, exact."""
    tr = p.edge_trace(i)
    from .simplex_poly import Poly1D
    w = Poly1D.from_coeffs([0])
    # compose weight with t = 2s - 1
    t = Poly1D.from_coeffs([-1, 2])
    acc = Poly1D.from_coeffs([1])
    for c in weight.coeffs:
        w = w + acc.scale(c)
        acc = acc * t
    return (tr * w).integral(0, 1)


@dataclass(frozen=True)
class ReferenceElement:
    """Geometry-independent data for order ``r``.

    ``fixed_rows`` holds the exact DoF rows that do not depend on geometry
    (``None`` in normal-moment rows).  ``normal_tensor[i, k, m, j]`` is
    ``mean_{e_i} (d span_j / d l_m) P_k^{(2,2)}(t)``.
    """

    r: int
    span: tuple
    dofs: tuple
    fixed_rows: tuple
    normal_tensor: tuple

    @property
    def ndofs(self) -> int:
        return len(self.dofs)

    def normal_row_index(self, i: int, k: int) -> int:
        return 3 + 3 * (self.r - 1) + i * (self.r - 1) + k

    def edge_row_index(self, i: int, k: int) -> int:
        return 3 + i * (self.r - 1) + k

    def dof_sign_pattern(self, normal_signs, edge_flips) -> np.ndarray:
        """Per-DoF sign factors for elements with given edge conventions.

        ``normal_signs``/``edge_flips`` have shape ``(..., 3)``.
        """
        normal_signs = np.asarray(normal_signs, dtype=float)
        edge_flips = np.asarray(edge_flips, dtype=bool)
        shape = normal_signs.shape[:-1] + (self.ndofs,)
        d = np.ones(shape)
        for i in range(3):
            for k in range(self.r - 1):
                par = np.where(edge_flips[..., i] & (k % 2 == 1), -1.0, 1.0)
                d[..., self.edge_row_index(i, k)] = par
                d[..., self.normal_row_index(i, k)] = par * normal_signs[..., i]
        return d

    def tables(self, points: np.ndarray, order: int = 2):
        """Span values and barycentric derivatives at barycentric ``points``.

        Returns ``V (nq, nb)``, ``D1 (nq, nb, 3)`` and ``D2 (nq, nb, 3, 3)``
        (the latter two only up to ``order``).
        """
        return _span_tables(self.r, np.asarray(points, dtype=float), order)


@lru_cache(maxsize=None)
def reference_element(r: int) -> ReferenceElement:
    _check_order(r)
    span = list(homogeneous_monomials(r))
    for i in range(3):
        span += edge_bubble_basis(r, i)
    span += interior_bubble_basis(r)
    dofs = local_dofs(r)
    if len(span) != len(dofs) or len(dofs) != local_dof_count(r):
        raise UnisolvenceError("dimension count mismatch")

    verts = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    legendre = [jacobi_1d(k, 0, 0) for k in range(r - 1)]
    gegen = [jacobi_1d(k, 2, 2) for k in range(r - 1)]
    rows = []
    for d in dofs:
        if isinstance(d, VertexValue):
            rows.append(tuple(p(*verts[d.vertex]) for p in span))
        elif isinstance(d, EdgeMoment):
            rows.append(tuple(_edge_mean(p, d.edge, legendre[d.k]) for p in span))
        elif isinstance(d, InteriorMoment):
            rows.append(tuple((p * d.weight).mean() for p in span))
        else:
            rows.append(None)
    T = [[[[_edge_mean(p.diff(m), i, gegen[k]) for p in span]
           for m in range(3)] for k in range(r - 1)] for i in range(3)]
    return ReferenceElement(r, tuple(span), tuple(dofs), tuple(rows),
                            tuple(tuple(tuple(tuple(x) for x in a) for a in b) for b in T))


def _poly_table(polys: Sequence[BaryPoly], points: np.ndarray) -> np.ndarray:
    return np.stack([p(points) for p in polys], axis=-1)


@lru_cache(maxsize=64)
def _span_tables_cached(r: int, key: bytes, shape: tuple, order: int):
    points = np.frombuffer(key, dtype=float).reshape(shape)
    ref = reference_element(r)
    V = _poly_table(ref.span, points)
    out = [V]
    if order >= 1:
        d1 = [[p.diff(m) for m in range(3)] for p in ref.span]
        D1 = np.stack([_poly_table([d[m] for d in d1], points) for m in range(3)], axis=-1)
        out.append(D1)
        if order >= 2:
            D2 = np.empty(V.shape + (3, 3))
            for m in range(3):
                for n in range(m, 3):
                    t = _poly_table([d[m].diff(n) for d in d1], points)
                    D2[..., m, n] = t
                    D2[..., n, m] = t
            out.append(D2)
    return tuple(out)


def _span_tables(r: int, points: np.ndarray, order: int):
    points = np.ascontiguousarray(points, dtype=float)
    return _span_tables_cached(r, points.tobytes(), points.shape, order)


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Geometry:
    """Affine data of one or many triangles (leading batch axis optional)."""

    vertices: np.ndarray      # (..., 3, 2)
    grad_lambda: np.ndarray   # (..., 3, 2)
    area: np.ndarray          # (...)

    @classmethod
    def from_vertices(cls, vertices) -> "Geometry":
        X = np.asarray(vertices, dtype=float)
        J = np.stack([X[..., 1, :] - X[..., 0, :], X[..., 2, :] - X[..., 0, :]], axis=-1)
        det = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
        if np.any(det <= 0):
            raise UnisolvenceError("degenerate or clockwise triangle")
        inv = np.empty_like(J)
        inv[..., 0, 0] = J[..., 1, 1] / det
        inv[..., 0, 1] = -J[..., 0, 1] / det
        inv[..., 1, 0] = -J[..., 1, 0] / det
        inv[..., 1, 1] = J[..., 0, 0] / det
        g = np.empty(X.shape)
        g[..., 1, :] = inv[..., 0, :]
        g[..., 2, :] = inv[..., 1, :]
        g[..., 0, :] = -g[..., 1, :] - g[..., 2, :]
        return cls(X, g, det / 2.0)

    @property
    def grad_norms(self) -> np.ndarray:
        return np.linalg.norm(self.grad_lambda, axis=-1)

    @property
    def outward_normals(self) -> np.ndarray:
        """Unit outward normal of edge ``e_i`` (opposite vertex ``i``)."""
        return -self.grad_lambda / self.grad_norms[..., None]

    @property
    def edge_lengths(self) -> np.ndarray:
        X = self.vertices
        return np.stack([np.linalg.norm(X[..., (i + 2) % 3, :] - X[..., (i + 1) % 3, :], axis=-1)
                         for i in range(3)], axis=-1)

    def normal_factors(self) -> np.ndarray:
        """``G[..., i, m] = grad l_m . n_i``."""
        return np.einsum("...md,...id->...im", self.grad_lambda, self.outward_normals)


# ---------------------------------------------------------------------------
# dual basis
# ---------------------------------------------------------------------------

def dof_matrix(ref: ReferenceElement, geom: Geometry) -> np.ndarray:
    """``M[..., d, j] = DoF_d(span_j)`` with local edge conventions."""
    G = geom.normal_factors()
    batch = G.shape[:-2]
    nb = ref.ndofs
    M = np.empty(batch + (nb, nb))
    T = np.array(ref.normal_tensor, dtype=float)  # (3, r-1, 3, nb)
    for d, row in enumerate(ref.fixed_rows):
        if row is not None:
            M[..., d, :] = np.array(row, dtype=float)
    for i in range(3):
        for k in range(ref.r - 1):
            M[..., ref.normal_row_index(i, k), :] = np.einsum("...m,mj->...j", G[..., i, :], T[i, k])
    return M


def dual_coefficients(ref: ReferenceElement, geom: Geometry,
                      normal_signs=None, edge_flips=None, check: bool = True) -> np.ndarray:
    """Coefficients ``C`` with ``phi_d = sum_j span_j C[..., j, d]``.

    Signs for global edge conventions are folded into the columns.
    """
    M = dof_matrix(ref, geom)
    try:
        C = np.linalg.inv(M)
    except np.linalg.LinAlgError as exc:
        raise UnisolvenceError("singular DoF matrix") from exc
    if check:
        res = np.abs(np.einsum("...ij,...jk->...ik", M, C) - np.eye(ref.ndofs)).max()
        if not np.isfinite(res) or res > 1e-6:
            raise UnisolvenceError(f"DoF matrix inversion residual {res:.3e}")
    if normal_signs is not None or edge_flips is not None:
        batch = M.shape[:-2]
        ns = np.ones(batch + (3,)) if normal_signs is None else normal_signs
        ef = np.zeros(batch + (3,), bool) if edge_flips is None else edge_flips
        C = C * ref.dof_sign_pattern(ns, ef)[..., None, :]
    return C


def physical_derivatives(D1: np.ndarray, D2: Optional[np.ndarray], grad_lambda: np.ndarray):
    """Chain rule through the constant ``grad l``.

    ``D1 (nq, nb, 3)`` -> ``(ne, nq, nb, 2)``; ``D2 (nq, nb, 3, 3)`` -> ``(ne, nq, nb, 2, 2)``.
    """
    g = np.einsum("qjm,emx->eqjx", D1, grad_lambda)
    if D2 is None:
        return g, None
    tmp = np.einsum("qjmn,enx->eqjmx", D2, grad_lambda)
    H = np.einsum("eqjmx,emy->eqjxy", tmp, grad_lambda)
    return g, H


def _fraction_inverse(M):
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise UnisolvenceError("singular DoF matrix (exact)")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


@dataclass
class ElementBasis:
    """Dual shape functions of one triangle.

    ``coefficients[j, d]`` expresses shape function ``d`` in ``span``.  In
    exact mode (rational vertices with rational ``|grad l_i|``) the
    coefficients are :class:`~fractions.Fraction` objects.
    """

    r: int
    span: tuple
    dofs: tuple
    geometry: Geometry
    coefficients: np.ndarray
    normal_signs: np.ndarray
    edge_flips: np.ndarray
    exact: bool = False

    @property
    def ndofs(self) -> int:
        return len(self.dofs)

    @property
    def grad_norms(self) -> np.ndarray:
        return self.geometry.grad_norms

    @property
    def edge_lengths(self) -> np.ndarray:
        return self.geometry.edge_lengths

    @property
    def area(self) -> float:
        return float(self.geometry.area)

    def dual_basis(self) -> list:
        C = self.coefficients
        out = []
        for d in range(self.ndofs):
            p = BaryPoly()
            for j, s in enumerate(self.span):
                c = C[j, d]
                if c != 0:
                    p = p + s * (c if self.exact else Fraction(float(c)))
            out.append(p)
        return out

    def evaluate(self, points, derivative_order: int = 0):
        """Values ``(nq, nb)``, gradients ``(nq, nb, 2)`` or Hessians ``(nq, nb, 2, 2)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        C = np.asarray(self.coefficients, dtype=float)
        tabs = _span_tables(self.r, pts, derivative_order)
        if derivative_order == 0:
            return tabs[0] @ C
        if derivative_order not in (1, 2):
            raise ValueError("derivative_order must be 0, 1 or 2")
        g, H = physical_derivatives(tabs[1], tabs[2] if derivative_order == 2 else None,
                                    self.geometry.grad_lambda[None])
        if derivative_order == 1:
            return np.einsum("qjx,jd->qdx", g[0], C)
        return np.einsum("qjxy,jd->qdxy", H[0], C)

    def apply_dofs(self, f, grad_f, quad_degree: int = 20) -> np.ndarray:
        """The DoF functionals applied to a smooth function (with gradient)."""
        return local_dof_values(self, f, grad_f, quad_degree)


def _exact_geometry(vertices):
    X = [[Fraction(c) for c in v] for v in vertices]
    J = [[X[1][0] - X[0][0], X[2][0] - X[0][0]], [X[1][1] - X[0][1], X[2][1] - X[0][1]]]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    inv = [[J[1][1] / det, -J[0][1] / det], [-J[1][0] / det, J[0][0] / det]]
    g = [None, inv[0], inv[1]]
    g[0] = [-g[1][0] - g[2][0], -g[1][1] - g[2][1]]
    norms = []
    for v in g:
        sq = v[0] ** 2 + v[1] ** 2
        num, den = sq.numerator, sq.denominator
        rn, rd = _isqrt_exact(num), _isqrt_exact(den)
        if rn is None or rd is None:
            return None
        norms.append(Fraction(rn, rd))
    return g, norms


def _isqrt_exact(n: int):
    import math
    s = math.isqrt(n)
    return s if s * s == n else None


def build_element_basis(vertices, r: int = 2, normal_signs=None, edge_flips=None,
                        exact: bool = False) -> ElementBasis:
    """Dual basis of one triangle by inverting its DoF matrix.

    With ``exact=True`` the vertices must be rational and every
    ``|grad l_i|`` rational (e.g. a 3-4-5 right triangle); the inverse is
    then computed in rational arithmetic.
    """
    ref = reference_element(r)
    geom = Geometry.from_vertices(vertices)
    ns = np.ones(3) if normal_signs is None else np.asarray(normal_signs, dtype=float)
    ef = np.zeros(3, bool) if edge_flips is None else np.asarray(edge_flips, dtype=bool)
    if not exact:
        C = dual_coefficients(ref, geom, ns, ef)
        return ElementBasis(r, ref.span, ref.dofs, geom, C, ns, ef, False)

    eg = _exact_geometry(vertices)
    if eg is None:
        raise ValueError("exact mode needs rational |grad lambda_i|")
    g, norms = eg
    M = []
    for d, row in enumerate(ref.fixed_rows):
        if row is not None:
            M.append(list(row))
            continue
        dof = ref.dofs[d]
        i, k = dof.edge, dof.k
        G = [-(g[m][0] * g[i][0] + g[m][1] * g[i][1]) / norms[i] for m in range(3)]
        M.append([sum(G[m] * ref.normal_tensor[i][k][m][j] for m in range(3))
                  for j in range(ref.ndofs)])
    Cinv = _fraction_inverse(M)
    sign = ref.dof_sign_pattern(ns, ef)
    C = np.empty((ref.ndofs, ref.ndofs), dtype=object)
    for j in range(ref.ndofs):
        for d in range(ref.ndofs):
            C[j, d] = Cinv[j][d] * int(sign[d])
    return ElementBasis(r, ref.span, ref.dofs, geom, C, ns, ef, True)


# ---------------------------------------------------------------------------
# local interpolation
# ---------------------------------------------------------------------------

def local_dof_values(basis: ElementBasis, f, grad_f, quad_degree: int = 20) -> np.ndarray:
    """Apply the (sign-adjusted) DoFs of ``basis`` to ``f``.

    ``f(x, y)`` returns values, ``grad_f(x, y)`` returns an array whose
    last axis holds the two partial derivatives.
    """
    from .quadrature import edge_quadrature

    ref = reference_element(basis.r)
    X = basis.geometry.vertices
    nrm = basis.geometry.outward_normals
    eq = edge_quadrature(quad_degree)
    tq = triangle_quadrature(quad_degree)
    sign = ref.dof_sign_pattern(basis.normal_signs, basis.edge_flips)
    legendre = [jacobi_1d(k, 0, 0) for k in range(basis.r - 1)]
    gegen = [jacobi_1d(k, 2, 2) for k in range(basis.r - 1)]
    vals = np.empty(ref.ndofs)
    xy_int = tq.xy(X)
    for d, dof in enumerate(ref.dofs):
        if isinstance(dof, VertexValue):
            vals[d] = f(*X[dof.vertex])
        elif isinstance(dof, (EdgeMoment, EdgeNormalMoment)):
            i = dof.edge
            a, b = X[(i + 2) % 3], X[(i + 1) % 3]
            pts = a[None] + eq.points[:, None] * (b - a)[None]
            t = 2 * eq.points - 1
            if isinstance(dof, EdgeMoment):
                g = f(pts[:, 0], pts[:, 1]) * legendre[dof.k](t)
            else:
                gr = np.asarray(grad_f(pts[:, 0], pts[:, 1]))
                gr = gr if gr.shape[-1] == 2 else np.moveaxis(gr, 0, -1)
                g = (gr @ nrm[i]) * gegen[dof.k](t)
            vals[d] = eq.weights @ g
        else:
            q = dof.weight(tq.points)
            vals[d] = tq.weights @ (f(xy_int[:, 0], xy_int[:, 1]) * q)
    return vals * sign


def local_interpolate(basis: ElementBasis, f, grad_f, quad_degree: int = 20) -> np.ndarray:
    """Coefficient vector of ``pi_K f`` in the dual basis (= the DoF values)."""
    return local_dof_values(basis, f, grad_f, quad_degree)


def evaluate_basis(basis: ElementBasis, points, derivative_order: int = 0):
    return basis.evaluate(points, derivative_order)


# ---------------------------------------------------------------------------
# closed-form r = 2 shape functions (independent cross-check)
# ---------------------------------------------------------------------------

def closed_form_basis_r2(vertices) -> list:
    """Explicit lowest-order shape functions in local DoF order.

    Returns callables ``f(points)`` on barycentric points (vertex, edge-mean,
    normal-mean, interior-mean shape functions).  Coefficients carry the
    geometry factors ``grad l_i . grad l_j / |grad l_j|^2`` as floats.
    """
    geom = Geometry.from_vertices(vertices)
    g = geom.grad_lambda
    nrm = geom.grad_norms

    def lam(P, i):
        return P[..., i]

    def bK(P):
        return P[..., 0] * P[..., 1] * P[..., 2]

    def bi(P, i):
        return P[..., (i + 1) % 3] * P[..., (i + 2) % 3]

    def vertex(i):
        def phi(P):
            s = 2 * bi(P, i) + 6 * bK(P)
            for j in range(3):
                if j != i:
                    s = s + (g[i] @ g[j]) / nrm[j] ** 2 * bi(P, j) * (4 * lam(P, j) - 1)
            return lam(P, i) * (3 * lam(P, i) - 2) + 30 * bK(P) * s
        return phi

    def edge(i):
        def phi(P):
            others = sum(bi(P, j) for j in range(3) if j != i)
            return 6 * bi(P, i) + 90 * bK(P) * (bi(P, i) - others - 10 * bK(P))
        return phi

    def normal(i):
        def phi(P):
            return 30 / nrm[i] * bK(P) * bi(P, i) * (4 * lam(P, i) - 1)
        return phi

    def interior(P):
        return 2520 * bK(P) ** 2

    return ([vertex(i) for i in range(3)] + [edge(i) for i in range(3)]
            + [normal(i) for i in range(3)] + [interior])
