"""Quadrature on the triangle (barycentric points, weights summing to one) and on edges.

Rules up to degree 20 are the symmetric, positive-weight Xiao-Gimbutas
rules shipped with :mod:`modepy`; above that a collapsed (Duffy) Gauss
product rule is used.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

MAX_SYMMETRIC_DEGREE = 20
MAX_DEGREE = 80


class QuadratureUnavailable(ValueError):
    """Requested exactness degree is not supported."""


@dataclass(frozen=True)
class QuadRule:
    """Triangle rule.  ``points`` has shape ``(n, 3)`` (barycentric), ``weights`` sums to 1."""

    points: np.ndarray
    weights: np.ndarray
    exact_degree: int

    def __len__(self) -> int:
        return len(self.weights)

    def xy(self, vertices: np.ndarray) -> np.ndarray:
        """Physical points for one triangle ``(3, 2)`` or many ``(ne, 3, 2)``."""
        return np.einsum("qi,...id->...qd", self.points, vertices)


@dataclass(frozen=True)
class EdgeRule:
    """Gauss-Legendre rule on ``[0, 1]``; weights sum to 1."""

    points: np.ndarray
    weights: np.ndarray
    exact_degree: int


def _xiao_gimbutas(degree: int) -> QuadRule:
    import modepy

    q = modepy.XiaoGimbutasSimplexQuadrature(degree, 2)
    x = (q.nodes[0] + 1.0) / 2.0
    y = (q.nodes[1] + 1.0) / 2.0
    pts = np.column_stack([1.0 - x - y, x, y])
    w = q.weights / q.weights.sum()
    return QuadRule(pts, w, degree)


def _collapsed_gauss(degree: int) -> QuadRule:
    n = degree // 2 + 1
    # Jacobi(1, 0) absorbs the Jacobian (1 - a) of the Duffy map
    a, wa = roots_jacobi(n, 1.0, 0.0)
    b, wb = roots_jacobi(n, 0.0, 0.0)
    a = (a + 1.0) / 2.0
    b = (b + 1.0) / 2.0
    A, B = np.meshgrid(a, b, indexing="ij")
    W = np.outer(wa, wb)
    l1 = A.ravel()
    l2 = ((1.0 - A) * B).ravel()
    pts = np.column_stack([l1, l2, 1.0 - l1 - l2])
    w = W.ravel()
    return QuadRule(pts, w / w.sum(), degree)


@lru_cache(maxsize=None)
def triangle_quadrature(exact_degree: int) -> QuadRule:
    """Rule exact for polynomials of total degree ``<= exact_degree``."""
    if exact_degree < 0 or exact_degree > MAX_DEGREE:
        raise QuadratureUnavailable(
            f"triangle quadrature of degree {exact_degree} not available (max {MAX_DEGREE})")
    if exact_degree <= 1:
        return QuadRule(np.full((1, 3), 1.0 / 3.0), np.ones(1), 1)
    if exact_degree <= MAX_SYMMETRIC_DEGREE:
        return _xiao_gimbutas(exact_degree)
    return _collapsed_gauss(exact_degree)


@lru_cache(maxsize=None)
def edge_quadrature(exact_degree: int) -> EdgeRule:
    """Gauss-Legendre on ``[0, 1]`` with ``ceil((exact_degree + 1) / 2)`` points."""
    if exact_degree < 0 or exact_degree > 2 * MAX_DEGREE:
        raise QuadratureUnavailable(f"edge quadrature of degree {exact_degree} not available")
    n = max(1, (exact_degree + 2) // 2)
    t, w = np.polynomial.legendre.leggauss(n)
    return EdgeRule((t + 1.0) / 2.0, w / 2.0, 2 * n - 1)


def graded_corner_rule(base: QuadRule, corner: int, levels: int = 4) -> QuadRule:
    """Composite rule refined dyadically toward vertex ``corner``.

    The triangle is split into its four midpoint children ``levels`` times,
    always recursing into the child touching ``corner``.  Points are
    barycentric in the parent triangle.
    """
    verts = np.eye(3)
    pts, wts = [], []
    scale = 1.0
    for _ in range(levels):
        c = verts[corner]
        others = [verts[i] for i in range(3) if i != corner]
        m0 = (c + others[0]) / 2
        m1 = (c + others[1]) / 2
        m2 = (others[0] + others[1]) / 2
        for tri in ((m0, others[0], m2), (m1, m2, others[1]), (m0, m2, m1)):
            T = np.array(tri)
            pts.append(base.points @ T)
            wts.append(base.weights * scale / 4)
        new = np.empty_like(verts)
        new[corner] = c
        idx = [i for i in range(3) if i != corner]
        new[idx[0]] = m0
        new[idx[1]] = m1
        verts = new
        scale /= 4
    pts.append(base.points @ verts)
    wts.append(base.weights * scale)
    return QuadRule(np.vstack(pts), np.concatenate(wts), base.exact_degree)
