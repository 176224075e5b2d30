import numpy as np
import pytest

from sgmixed.assembly import assemble_blocks
from sgmixed.mesh import unit_square_mesh
from sgmixed.space import FESpace


class TrigField:
    """Random smooth vector field: sums of plane waves per component."""

    def __init__(self, rng, waves=3, kmax=3.0):
        self.a = rng.normal(size=(2, waves))
        self.k = rng.uniform(-kmax, kmax, size=(2, waves, 2))
        self.phi = rng.uniform(0, 2 * np.pi, size=(2, waves))

    def _arg(self, c, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        return (self.k[c, :, 0] * x[..., None] + self.k[c, :, 1] * y[..., None]
                + self.phi[c])

    def value(self, c, x, y):
        return np.sin(self._arg(c, x, y)) @ self.a[c]

    def grad(self, c, x, y):
        return np.einsum("...w,w,wx->...x", np.cos(self._arg(c, x, y)), self.a[c], self.k[c])

    def hess(self, c, x, y):
        return -np.einsum("...w,w,wx,wy->...xy", np.sin(self._arg(c, x, y)), self.a[c],
                          self.k[c], self.k[c])

    def div(self, x, y):
        return self.grad(0, x, y)[..., 0] + self.grad(1, x, y)[..., 1]

    def grad_div(self, x, y):
        return self.hess(0, x, y)[..., 0, :] + self.hess(1, x, y)[..., 1, :]

    def interpolate(self, space):
        return np.concatenate([
            space.interpolate(lambda x, y, c=c: self.value(c, x, y),
                              lambda x, y, c=c: self.grad(c, x, y)) for c in range(2)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


@pytest.fixture(scope="session")
def space4():
    return FESpace(unit_square_mesh(4, 0.2, 1))


@pytest.fixture(scope="session")
def blocks4(space4):
    return assemble_blocks(space4)


ACCEPTANCE_LINES = []


def record(criterion: int, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
