import numpy as np
import pytest
import sympy as sy

from sgmixed.exact import (ALPHA, TrigSeries, cos, example1, example2, example3,
                           exact_solution, sin)

LAM, MU = 0.5769230769230769, 0.38461538461538464
rng = np.random.default_rng(4)
PTS = rng.uniform(0.05, 0.95, size=(2, 12))


def fd_grad(fun, x, y, h=1e-6):
    return np.stack([(fun(x + h, y) - fun(x - h, y)) / (2 * h),
                     (fun(x, y + h) - fun(x, y - h)) / (2 * h)])


@pytest.mark.parametrize("ex", [1, 2, 3])
def test_derivatives_against_finite_differences(ex):
    s = exact_solution(ex, LAM, MU, 0.5)
    x, y = PTS
    for c in range(2):
        g = fd_grad(lambda a, b: s.u(a, b)[c], x, y)
        assert np.abs(g - s.grad(x, y)[c]).max() < 1e-7
        for d in range(2):
            H = fd_grad(lambda a, b: s.grad(a, b)[c, d], x, y)
            assert np.abs(H - s.hess(x, y)[c, d]).max() < 1e-6


def sympy_forcing(u1, u2, lam, mu, iota):
    x, y = sy.symbols("x y")
    lap = lambda f: sy.diff(f, x, 2) + sy.diff(f, y, 2)  # noqa: E731
    d = sy.diff(u1, x) + sy.diff(u2, y)
    L = (mu * lap(u1) + (lam + mu) * sy.diff(d, x), mu * lap(u2) + (lam + mu) * sy.diff(d, y))
    f = [iota ** 2 * lap(Lc) - Lc for Lc in L]
    return [sy.lambdify((x, y), fc, "numpy") for fc in f], d


def test_example1_forcing_matches_symbolic():
    x, y = sy.symbols("x y")
    p = sy.pi
    u1 = -sy.sin(p * x) ** 3 * sy.sin(2 * p * y) * sy.sin(p * y)
    u2 = sy.sin(2 * p * x) * sy.sin(p * x) * sy.sin(p * y) ** 3
    for lam, iota in ((LAM, 1.0), (1666.4444, 1e-6), (LAM, 0.37)):
        f, d = sympy_forcing(u1, u2, lam, MU, iota)
        s = example1(lam, MU, iota)
        ref = np.stack([fc(*PTS) for fc in f])
        assert np.abs(s.f(*PTS) - ref).max() < 1e-9 * np.abs(ref).max()
        assert sy.simplify(d) == 0
    assert np.abs(s.u(*PTS) - np.stack([sy.lambdify((x, y), u)(*PTS) for u in (u1, u2)])).max() < 1e-14


def test_example1_is_divergence_free_and_clamped():
    s = example1(LAM, MU, 1.0)
    assert np.abs(s.div(*PTS)).max() < 1e-13
    t = np.linspace(0, 1, 9)
    for X, Y in ((t, 0 * t), (t, 1 + 0 * t), (0 * t, t), (1 + 0 * t, t)):
        assert np.abs(s.u(X, Y)).max() < 1e-14
        assert np.abs(s.grad(X, Y)).max() < 1e-13


def test_example3_limit_problem():
    s = example3(LAM, MU)
    x, y = sy.symbols("x y")
    p = sy.pi
    u1 = -sy.sin(p * x) ** 2 * sy.sin(2 * p * y)
    u2 = sy.sin(2 * p * x) * sy.sin(p * y) ** 2
    f, _ = sympy_forcing(u1, u2, LAM, MU, 0.0)
    ref = np.stack([fc(*PTS) for fc in f])
    assert np.abs(s.f(*PTS) - ref).max() < 1e-10 * np.abs(ref).max()
    t = np.linspace(0, 1, 9)
    assert np.abs(s.u(t, 0 * t)).max() < 1e-14
    # the normal derivative does not vanish, which creates the boundary layer
    assert np.abs(s.grad(t, 0 * t)[:, 1]).max() > 1


@pytest.mark.parametrize("lam", [LAM, 1666.4444])
def test_example2_solves_homogeneous_lame(lam):
    s = example2(lam, MU)
    x, y = PTS
    h = 1e-4
    lap = lambda F: (F(x + h, y) + F(x - h, y) + F(x, y + h) + F(x, y - h) - 4 * F(x, y)) / h ** 2  # noqa: E731
    Lu = []
    for c in range(2):
        lu = MU * lap(lambda a, b: s.u(a, b)[c])
        lu += (lam + MU) * fd_grad(lambda a, b: s.div(a, b), x, y)[c]
        Lu.append(lu)
    scale = lam * np.abs(s.hess(x, y)).max()
    assert np.abs(Lu).max() < 1e-5 * scale
    assert np.allclose(s.f(x, y), 0)


def test_example2_corner_behaviour():
    s = example2(LAM, MU)
    assert s.singular and s.singular_point == (0.0, 0.0)
    r = np.array([1e-2, 1e-4])
    th = 0.3
    u = np.linalg.norm(s.u(r * np.cos(th), r * np.sin(th)), axis=0)
    assert np.isclose(np.log(u[0] / u[1]) / np.log(r[0] / r[1]), ALPHA, atol=1e-10)
    assert np.all(s.u(0.0, 0.0) == 0)


def test_trig_series_algebra():
    a = sin(1, "x") * cos(2, "y")
    b = (sin(1, "x") ** 2).scale(3)
    x, y = PTS
    assert np.allclose((a * b)(x, y), a(x, y) * b(x, y))
    assert np.allclose((a + b - a)(x, y), b(x, y))
    assert np.allclose(a.diff("x")(x, y), np.pi * np.cos(np.pi * x) * np.cos(2 * np.pi * y))
    assert np.allclose(a.laplacian()(x, y), -5 * np.pi ** 2 * a(x, y))
    assert (a - a).is_zero()
    assert TrigSeries.const(2)(x, y).shape == x.shape


def test_unknown_example():
    with pytest.raises(ValueError):
        exact_solution(4, LAM, MU, 1.0)
