from fractions import Fraction

import numpy as np
import pytest

from sgmixed.element import (Geometry, UnisolvenceError, build_element_basis,
                             closed_form_basis_r2, dual_coefficient_edge,
                             dual_coefficient_interior, local_dof_count, local_interpolate,
                             reference_element)
from sgmixed.simplex_poly import ParameterDomainError, bubble, edge_bubble, jacobi_tri

RIGHT_345 = [(0, 0), (4, 0), (0, 3)]


def random_triangle(rng, min_angle=15.0):
    while True:
        X = rng.uniform(-1, 1, (3, 2))
        u, v = X[1] - X[0], X[2] - X[0]
        a = u[0] * v[1] - u[1] * v[0]
        if a < 0:
            X = X[[0, 2, 1]]
        ang = []
        for i in range(3):
            u, v = X[(i + 1) % 3] - X[i], X[(i + 2) % 3] - X[i]
            ang.append(np.degrees(np.arccos(u @ v / np.linalg.norm(u) / np.linalg.norm(v))))
        if min(ang) > min_angle:
            return X


def to_bary(X, x, y):
    T = np.column_stack([X[1] - X[0], X[2] - X[0]])
    s = np.linalg.solve(T, np.stack([np.ravel(x) - X[0, 0], np.ravel(y) - X[0, 1]]))
    return np.column_stack([1 - s[0] - s[1], s[0], s[1]])


def shape_callables(basis, d):
    X = basis.geometry.vertices

    def f(x, y):
        return basis.evaluate(to_bary(X, x, y), 0)[:, d].reshape(np.shape(x))

    def g(x, y):
        return basis.evaluate(to_bary(X, x, y), 1)[:, d, :].reshape(np.shape(x) + (2,))
    return f, g


def test_dof_counts():
    assert local_dof_count(2) == 10
    assert local_dof_count(3) == 18
    assert reference_element(3).ndofs == 18


@pytest.mark.parametrize("r", [2, 3])
def test_kronecker_duality_random_triangles(r):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        basis = build_element_basis(random_triangle(rng), r)
        M = np.array([local_interpolate(basis, *shape_callables(basis, d))
                      for d in range(basis.ndofs)])
        worst = max(worst, np.abs(M - np.eye(basis.ndofs)).max())
    assert worst < 1e-10


@pytest.mark.parametrize("r", [2, 3])
def test_kronecker_duality_with_global_conventions(r):
    rng = np.random.default_rng(3)
    X = random_triangle(rng)
    basis = build_element_basis(X, r, normal_signs=[1, -1, -1], edge_flips=[True, False, True])
    M = np.array([local_interpolate(basis, *shape_callables(basis, d))
                  for d in range(basis.ndofs)])
    assert np.abs(M - np.eye(basis.ndofs)).max() < 1e-10


def test_closed_form_matches_dual_basis():
    rng = np.random.default_rng(11)
    P = rng.dirichlet(np.ones(3), 40)
    tris = [np.array([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])] + [random_triangle(rng)
                                                                   for _ in range(49)]
    for X in tris:
        V = build_element_basis(X, 2).evaluate(P)
        C = np.column_stack([phi(P) for phi in closed_form_basis_r2(X)])
        assert np.abs(V - C).max() < 1e-10


def test_dual_coefficient_values():
    assert dual_coefficient_edge(2, 0) == -30
    assert dual_coefficient_interior(2, 0) == 2520
    with pytest.raises(ParameterDomainError):
        dual_coefficient_edge(2, 1)
    with pytest.raises(ParameterDomainError):
        dual_coefficient_interior(3, -1)


@pytest.mark.parametrize("r,k,edge,interior", [(2, 0, -30, 2520), (3, 0, 30, 4200),
                                                (3, 1, -70, 12600)])
def test_displayed_coefficients(r, k, edge, interior):
    # the tabulated values multiply the primitive integer form of the Jacobi factor
    pe = jacobi_tri(k, r - 2, 1, 2, 2)
    pi = jacobi_tri(k, r - 2, 2, 2, 2)
    assert dual_coefficient_edge(r, k) * pe.content() == edge
    assert dual_coefficient_interior(r, k) * pi.content() == interior


@pytest.mark.parametrize("r", [2, 3])
def test_exact_dual_basis_coefficients(r):
    basis = build_element_basis(RIGHT_345, r, exact=True)
    ref = reference_element(r)
    norms = [Fraction(5, 12), Fraction(1, 4), Fraction(1, 3)]
    nmono = (r + 1) * (r + 2) // 2
    phis = basis.dual_basis()
    for i in range(3):
        for k in range(r - 1):
            j = nmono + i * (r - 1) + k
            d = ref.normal_row_index(i, k)
            assert basis.coefficients[j, d] == dual_coefficient_edge(r, k) / norms[i]
    for k in range(r - 1):
        phi = phis[ref.ndofs - (r - 1) + k]
        assert phi == bubble() ** 2 * jacobi_tri(k, r - 2, 2, 2, 2) * dual_coefficient_interior(r, k)


def test_exact_closed_form_normal_function():
    basis = build_element_basis(RIGHT_345, 2, exact=True)
    ref = reference_element(2)
    norms = [Fraction(5, 12), Fraction(1, 4), Fraction(1, 3)]
    from sgmixed.simplex_poly import BaryPoly
    for i in range(3):
        psi = basis.dual_basis()[ref.normal_row_index(i, 0)]
        expect = bubble() * edge_bubble(i) * (BaryPoly.lam(i) * 4 - 1) * (30 / norms[i])
        assert (psi - expect).homogenized().is_zero()


@pytest.mark.parametrize("r", [2, 3])
def test_edge_traces_have_degree_r(r):
    rng = np.random.default_rng(5)
    basis = build_element_basis(random_triangle(rng), r)
    s = np.linspace(0, 1, r + 3)
    for i in range(3):
        P = np.zeros((len(s), 3))
        P[:, (i + 1) % 3] = 1 - s
        P[:, (i + 2) % 3] = s
        V = basis.evaluate(P)
        for d in range(basis.ndofs):
            c = np.polyfit(s, V[:, d], r)
            assert np.abs(np.polyval(c, s) - V[:, d]).max() < 1e-9


@pytest.mark.parametrize("r", [2, 3])
def test_polynomial_reproduction(r):
    rng = np.random.default_rng(2)
    X = random_triangle(rng)
    basis = build_element_basis(X, r)
    c = rng.normal(size=(r + 1, r + 1))
    c[np.add.outer(np.arange(r + 1), np.arange(r + 1)) > r] = 0

    def f(x, y):
        return np.polynomial.polynomial.polyval2d(x, y, c)

    def g(x, y):
        cx = np.polynomial.polynomial.polyder(c, axis=0)
        cy = np.polynomial.polynomial.polyder(c, axis=1)
        return np.stack([np.polynomial.polynomial.polyval2d(x, y, cx),
                         np.polynomial.polynomial.polyval2d(x, y, cy)], axis=-1)

    coef = local_interpolate(basis, f, g)
    P = rng.dirichlet(np.ones(3), 30)
    xy = P @ X
    assert np.abs(basis.evaluate(P) @ coef - f(xy[:, 0], xy[:, 1])).max() < 1e-11


def test_gradient_and_hessian_vs_finite_differences():
    rng = np.random.default_rng(9)
    X = random_triangle(rng)
    basis = build_element_basis(X, 2)
    c = X.mean(axis=0)
    h = 1e-4
    f = lambda x, y: basis.evaluate(to_bary(X, x, y))[0]  # noqa: E731
    g = basis.evaluate(to_bary(X, c[0], c[1]), 1)[0]
    H = basis.evaluate(to_bary(X, c[0], c[1]), 2)[0]
    e = np.eye(2) * h
    fd_g = np.stack([(f(*(c + e[a])) - f(*(c - e[a]))) / (2 * h) for a in range(2)], axis=-1)
    assert np.abs(fd_g - g).max() < 1e-6 * max(1, np.abs(g).max())
    fd_H = np.empty_like(H)
    for a in range(2):
        for b in range(2):
            fd_H[:, a, b] = (f(*(c + e[a] + e[b])) - f(*(c + e[a] - e[b]))
                             - f(*(c - e[a] + e[b])) + f(*(c - e[a] - e[b]))) / (4 * h * h)
    assert np.abs(fd_H - H).max() < 1e-6 * np.abs(H).max()


def test_affine_gradients():
    geom = Geometry.from_vertices([[0, 0], [1, 0], [0, 1]])
    assert np.allclose(geom.grad_lambda[0], [-1, -1])
    assert np.allclose(geom.outward_normals[1], [-1, 0])


def test_degenerate_triangle_rejected():
    with pytest.raises(UnisolvenceError):
        build_element_basis([[0, 0], [1, 1], [2, 2]], 2)


def test_exact_mode_needs_rational_norms():
    with pytest.raises(ValueError):
        build_element_basis([(0, 0), (1, 0), (0, 1)], 2, exact=True)
