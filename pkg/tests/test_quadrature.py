from math import factorial

import numpy as np
import pytest

from sgmixed.quadrature import (QuadratureUnavailable, edge_quadrature, graded_corner_rule,
                                triangle_quadrature)


def monomial_mean(a, b, c):
    return 2 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2)


@pytest.mark.parametrize("deg", [1, 2, 5, 10, 12, 20, 24])
def test_triangle_rule_exactness(deg):
    q = triangle_quadrature(deg)
    assert np.isclose(q.weights.sum(), 1.0)
    for a in range(deg + 1):
        for b in range(deg + 1 - a):
            c = deg - a - b
            v = q.weights @ (q.points[:, 0] ** a * q.points[:, 1] ** b * q.points[:, 2] ** c)
            assert np.isclose(v, monomial_mean(a, b, c), rtol=1e-11, atol=1e-15)


def test_symmetric_rules_have_positive_interior_points():
    q = triangle_quadrature(20)
    assert np.all(q.weights > 0)
    assert np.all(q.points > 0)


@pytest.mark.parametrize("deg", [0, 3, 9])
def test_edge_rule_exactness(deg):
    e = edge_quadrature(deg)
    for k in range(deg + 1):
        assert np.isclose(e.weights @ e.points ** k, 1 / (k + 1))


def test_graded_rule_integrates_polynomials_and_singularity():
    base = triangle_quadrature(10)
    g = graded_corner_rule(base, 0, 4)
    assert np.isclose(g.weights.sum(), 1.0)
    assert np.isclose(g.weights @ g.points[:, 1] ** 3, monomial_mean(0, 3, 0))
    # r^(-1/2) style singularity at vertex 0: mean of (1 - l0)^(-1/2) is 4/3
    f = lambda q: (1 - q.points[:, 0]) ** -0.5  # noqa: E731
    err_base = abs(base.weights @ f(base) - 4 / 3)
    err_graded = abs(g.weights @ f(g) - 4 / 3)
    assert err_graded < err_base / 10


def test_unavailable_degree():
    with pytest.raises(QuadratureUnavailable):
        triangle_quadrature(500)
