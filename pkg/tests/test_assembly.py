import numpy as np
import pytest
import scipy.sparse as sp

from conftest import TrigField
from sgmixed.assembly import (CapabilityError, MaterialParams, assemble_A, assemble_blocks,
                              assemble_C, assemble_load, build_saddle_system, min_system_degree,
                              p1_blocks, resolve_mean_constraint)
from sgmixed.mesh import unit_square_mesh
from sgmixed.norms import weighted_broken_norm
from sgmixed.quadrature import triangle_quadrature
from sgmixed.space import BoundaryData, FESpace


def vector_interp(space, fields, grads):
    return np.concatenate([space.interpolate(f, g) for f, g in zip(fields, grads)])


def quad_field(space):
    # v = (x^2, x y) lies in P_2 and is reproduced exactly
    return vector_interp(
        space,
        [lambda x, y: x ** 2, lambda x, y: x * y],
        [lambda x, y: np.stack([2 * x, 0 * y], -1), lambda x, y: np.stack([y, x], -1)])


def test_material_params():
    p = MaterialParams(nu=0.4999, iota=1e-6)
    assert np.isclose(p.lam, 1666.4444, rtol=1e-6)
    assert np.isclose(p.mu, 0.33335555, rtol=1e-6)
    for bad in (dict(nu=0.5), dict(nu=-1.0), dict(iota=0.0), dict(E=-1)):
        with pytest.raises(ValueError):
            MaterialParams(**bad)


def test_blocks_are_symmetric_semidefinite(blocks4):
    for M in (blocks4.A_eps, blocks4.A_geps, blocks4.M, blocks4.K):
        assert abs(M - M.T).max() < 1e-12 * abs(M).max()
    ev = np.linalg.eigvalsh(blocks4.A_eps.toarray())
    assert ev.min() > -1e-10 * ev.max()


def test_iota_scaling(space4, blocks4):
    A = lambda io: assemble_A(space4, MaterialParams(iota=io), blocks4)  # noqa: E731
    d1 = A(1.0) - A(0.5)
    d2 = A(2.0) - A(1.0)
    assert abs(d2 - 4 * d1).max() < 1e-10 * abs(d2).max()


def test_rigid_and_linear_kernels(space4, blocks4):
    one = lambda x, y: np.ones_like(x)  # noqa: E731
    zero = lambda x, y: np.zeros_like(x)  # noqa: E731
    dz = lambda x, y: np.zeros(np.shape(x) + (2,))  # noqa: E731
    rot = vector_interp(space4, [lambda x, y: -y, lambda x, y: x],
                        [lambda x, y: np.stack([0 * x, -np.ones_like(y)], -1),
                         lambda x, y: np.stack([np.ones_like(x), 0 * y], -1)])
    shift = vector_interp(space4, [one, zero], [dz, dz])
    for v in (rot, shift):
        assert abs(blocks4.A_eps @ v).max() < 1e-13 * abs(blocks4.A_eps).max()
    lin = vector_interp(space4, [lambda x, y: 2 * x - y, lambda x, y: 3 * y],
                        [lambda x, y: np.stack([2 + 0 * x, -1 + 0 * y], -1),
                         lambda x, y: np.stack([0 * x, 3 + 0 * y], -1)])
    scale = abs(blocks4.A_geps).max() * abs(lin).max()
    assert abs(blocks4.A_geps @ lin).max() < 1e-13 * scale


def test_quadratic_field_energies(space4, blocks4):
    v = quad_field(space4)
    # eps = [[2x, y/2], [y/2, x]]
    assert np.isclose(v @ blocks4.A_eps @ v, 11 / 6, rtol=1e-12)
    # grad eps is constant: 4 + 2 (1/2)^2 + 1
    assert np.isclose(v @ blocks4.A_geps @ v, 5.5, rtol=1e-12)


def test_divergence_blocks(space4, blocks4):
    v = quad_field(space4)  # div v = 3x, grad div v = (3, 0)
    m = space4.mesh
    ones = np.ones(m.nvertices)
    x = m.vertices[:, 0]
    assert np.isclose(ones @ blocks4.B0 @ v, 1.5, rtol=1e-12)
    assert np.isclose(x @ blocks4.B0 @ v, 1.0, rtol=1e-12)
    assert abs(ones @ blocks4.B2 @ v) < 1e-12
    assert np.isclose(x @ blocks4.B2 @ v, 3.0, rtol=1e-12)


def test_pressure_blocks():
    m = unit_square_mesh(5, 0.2, 3)
    M, K, _ = p1_blocks(m)
    ones = np.ones(m.nvertices)
    x = m.vertices[:, 0]
    assert np.isclose(ones @ M @ ones, 1.0)
    assert np.isclose(x @ M @ x, 1 / 3)
    assert np.isclose(x @ K @ x, 1.0)
    assert abs(K @ ones).max() < 1e-12
    C = assemble_C(m, MaterialParams(iota=1e-8))
    assert abs(C - M).max() < 1e-14


def test_load_vector_oracle(space4):
    v = vector_interp(space4, [lambda x, y: y ** 2, lambda x, y: x * y],
                      [lambda x, y: np.stack([0 * x, 2 * y], -1),
                       lambda x, y: np.stack([y, x], -1)])
    F = assemble_load(space4, lambda x, y: (np.ones_like(x), x))
    assert np.isclose(F @ v, 0.5, rtol=1e-12)
    assert not assemble_load(space4, None).any()


def test_quadrature_degree_guard(space4):
    assert min_system_degree(2) == 10
    with pytest.raises(CapabilityError):
        assemble_blocks(space4, quad_degree=6)
    with pytest.raises(CapabilityError):
        assemble_load(space4, lambda x, y: (x, y), quad_degree=9)


def exact_b(space, field, iota, degree=20):
    """``b_iota(v, phi_j)`` for every vertex hat by high-order quadrature."""
    m = space.mesh
    rule = triangle_quadrature(degree)
    xy = space.quad_xy(rule)
    _, _, G = p1_blocks(m)
    w = m.areas[:, None] * rule.weights
    dv = field.div(xy[..., 0], xy[..., 1])
    gdv = field.grad_div(xy[..., 0], xy[..., 1])
    loc = (np.einsum("eq,eq,qi->ei", w, dv, rule.points)
           + iota ** 2 * np.einsum("eq,eqx,eix->ei", w, gdv, G))
    out = np.zeros(m.nvertices)
    np.add.at(out, m.triangles, loc)
    return out


def test_fortin_identity(space4, blocks4, rng):
    fp = space4.dofmap.pressure_free
    for _ in range(10):
        fld = TrigField(rng)
        v = fld.interpolate(space4)
        # L2 part holds for pressures vanishing on the boundary
        assert abs((blocks4.B0 @ v)[fp] - exact_b(space4, fld, 0.0)[fp]).max() < 1e-9
        for iota in (1.0, 0.3):
            lhs = blocks4.B(MaterialParams(iota=iota)) @ v
            assert abs(lhs[fp] - exact_b(space4, fld, iota)[fp]).max() < 1e-9


@pytest.mark.parametrize("n", [2, 4, 8])
def test_discrete_korn(n, rng):
    space = FESpace(unit_square_mesh(n, 0.2, 1))
    blocks = assemble_blocks(space)
    fu = space.dofmap.free_u
    for iota in (1.0, 1e-6):
        params = MaterialParams(nu=0.3, iota=iota)
        A = blocks.A(params)
        for _ in range(100 // 2):
            v = np.zeros(space.dofmap.nu_full)
            v[fu] = rng.normal(size=len(fu))
            lhs = v @ A @ v
            rhs = 0.5 * params.mu * weighted_broken_norm(space, v, iota, 8) ** 2
            assert lhs >= rhs


def test_saddle_system_shapes_and_lifting(space4, blocks4):
    params = MaterialParams(nu=0.3, iota=0.5)
    s = build_saddle_system(space4, params, blocks=blocks4)
    dm = s.dofmap
    assert s.w is not None and s.n_dofs == dm.n_u + dm.n_p + 1
    K = s.matrix()
    assert abs(K - K.T).max() < 1e-12 * abs(K).max()
    assert s.matrix(bordered=False).shape[0] == s.n_dofs - 1
    # lifting an exact discrete field: zero residual for the field itself
    fld = TrigField(np.random.default_rng(1))
    u = fld.interpolate(space4)
    p = np.zeros(space4.mesh.nvertices)
    bc = BoundaryData(lambda x, y: (fld.value(0, x, y), fld.value(1, x, y)),
                      lambda x, y: (fld.grad(0, x, y), fld.grad(1, x, y)))
    F = blocks4.A(params) @ u + blocks4.B(params).T @ p
    s2 = build_saddle_system(space4, params, bc=bc, blocks=blocks4, load_vector=F)
    assert s2.w is None
    x = np.concatenate([u[dm.free_u], p[dm.pressure_free]])
    r = s2.matrix() @ x - s2.rhs()
    # the pressure equation has no load, so its residual is the full B u
    assert abs(r[:s2.n_u]).max() < 1e-10
    assert np.allclose(r[s2.n_u:], (blocks4.B(params) @ u)[dm.pressure_free], atol=1e-12)


def test_mean_constraint_resolution():
    assert resolve_mean_constraint("auto", BoundaryData())
    assert not resolve_mean_constraint("auto", BoundaryData(p=lambda x, y: x))
    assert resolve_mean_constraint("on", BoundaryData(p=lambda x, y: x))
    assert not resolve_mean_constraint("off", BoundaryData())
    with pytest.raises(ValueError):
        resolve_mean_constraint("maybe", BoundaryData())
