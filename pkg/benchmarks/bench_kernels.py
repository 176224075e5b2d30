"""Compare the compiled and NumPy element kernels.

Times ``local_blocks`` on the tabulated data of a real mesh and a full
``assemble_blocks`` call with each backend::

    python benchmarks/bench_kernels.py --n 32 --repeat 3
"""
import argparse
import time

import numpy as np

from sgmixed import _core
from sgmixed._core import _pykernels
from sgmixed.assembly import SYSTEM_QUAD_DEGREE, assemble_blocks, p1_blocks
from sgmixed.mesh import unit_square_mesh
from sgmixed.quadrature import triangle_quadrature
from sgmixed.space import FESpace


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=32)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    try:
        from sgmixed._core import _ckernels
    except ImportError:
        raise SystemExit("compiled kernels are not built; run `pip install -e .` first")

    space = FESpace(unit_square_mesh(args.n))
    rule = triangle_quadrature(SYSTEM_QUAD_DEGREE)
    _, g, H = space.tabulate(rule.points, 2)
    w = space.mesh.areas[:, None] * rule.weights[None, :]
    G = p1_blocks(space.mesh)[2]
    data = (g, H, w, rule.points, G)

    kernels = {"numpy": _pykernels.local_blocks, "cython": _ckernels.local_blocks}
    ref = kernels["numpy"](*data)
    print(f"mesh n={args.n}: {space.mesh.ntriangles} triangles, {len(rule)} points")
    print(f"{'backend':8s} {'kernel s':>10s} {'assembly s':>11s} {'rel diff':>10s}")
    for name, fn in kernels.items():
        out = fn(*data)
        diff = max(float(np.abs(a - b).max() / np.abs(b).max()) for a, b in zip(out, ref))
        tk = best_of(lambda: fn(*data), args.repeat)
        _core.local_blocks = fn
        ta = best_of(lambda: assemble_blocks(space), args.repeat)
        print(f"{name:8s} {tk:10.3f} {ta:11.3f} {diff:10.1e}")


if __name__ == "__main__":
    main()
