"""Convergence experiments for the three benchmark problems.

Example::

    sgmixed --example 1 --nu 0.3 0.4999 --iota 1 1e-6 --levels 8 16 32 64
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy

from . import __version__, _core
from .assembly import MaterialParams, assemble_blocks, build_saddle_system
from .exact import ExactSolution, exact_solution
from .mesh import unit_square_mesh
from .norms import RateRow, RateTable, error_report, rate_table
from .solver import solve_saddle
from .space import BoundaryData, FESpace

log = logging.getLogger("sgmixed")

DEFAULT_IOTAS = {1: (1.0, 1e-6), 2: (1.0, 1e-6), 3: (1e-4, 1e-6)}


class ExperimentError(RuntimeError):
    """A solve failed; the message names the ``(nu, iota, h)`` triple."""


@dataclass
class RunConfig:
    example: int
    nus: Tuple[float, ...] = (0.3, 0.4999)
    iotas: Optional[Tuple[float, ...]] = None
    levels: Tuple[int, ...] = (8, 16, 32, 64)
    perturb: float = 0.2
    seed: int = 1
    fmt: str = "markdown"
    out: Optional[Path] = None
    mean_constraint: str = "auto"
    quad_degree: int = 12
    error_quad_degree: int = 20
    zero_forcing: bool = False

    def __post_init__(self):
        if self.example not in (1, 2, 3):
            raise ValueError("example must be 1, 2 or 3")
        if self.iotas is None:
            self.iotas = DEFAULT_IOTAS[self.example]
        if self.fmt not in ("csv", "markdown"):
            raise ValueError("format must be csv or markdown")
        if self.mean_constraint not in ("on", "off", "auto"):
            raise ValueError("mean constraint must be on, off or auto")
        if len(self.levels) < 1:
            raise ValueError("need at least one level")


@dataclass
class ExperimentResult:
    config: RunConfig
    tables: Dict[Tuple[float, float], RateTable]
    manifest: Dict[str, object] = field(default_factory=dict)


class _Zero:
    """Identically zero displacement used with ``--zero-forcing``."""

    def diff(self, var):
        return self

    def __call__(self, x, y):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)


def setup_problem(example: int, params: MaterialParams, zero_forcing: bool = False):
    """``(exact solution, forcing or None, boundary data)`` for a benchmark."""
    if zero_forcing:
        ex = ExactSolution("zero", (_Zero(), _Zero()), params.lam)
        return ex, None, BoundaryData()
    ex = exact_solution(example, params.lam, params.mu, params.iota)
    if example == 2:
        return ex, None, BoundaryData(ex.u_tuple, ex.grad_tuple, ex.p)
    return ex, ex.f, BoundaryData()


def lame_label(params: MaterialParams) -> str:
    """``nu=0.4999,lambda=1.6664e3,mu=0.3334`` in the tables' style."""
    lam = params.lam
    if lam >= 1000:
        m, e = f"{lam:.4e}".split("e")
        ls = f"{m}e{int(e)}"
    else:
        ls = f"{lam:.4f}"
    return f"nu={params.nu:g},lambda={ls},mu={params.mu:.4f}"


def run_experiment(config: RunConfig) -> ExperimentResult:
    man: Dict[str, object] = {
        "version": __version__, "backend": _core.BACKEND,
        "python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__,
        "example": config.example, "nu": " ".join(f"{v:g}" for v in config.nus),
        "iota": " ".join(f"{v:g}" for v in config.iotas),
        "levels": " ".join(str(n) for n in config.levels),
        "perturb": config.perturb, "seed": config.seed, "r": 2,
        "quad_degree": config.quad_degree, "error_quad_degree": config.error_quad_degree,
        "mean_constraint": config.mean_constraint, "zero_forcing": config.zero_forcing,
    }
    errors: Dict[Tuple[float, float], List[float]] = {(nu, io): [] for nu in config.nus
                                                       for io in config.iotas}
    hs: List[float] = []
    t_start = time.perf_counter()
    for n in config.levels:
        mesh = unit_square_mesh(n, config.perturb, config.seed)
        tag = f"n{n}"
        for k, v in mesh.stats().items():
            if k != "n":
                man[f"mesh.{tag}.{k}"] = v
        if config.example == 3:
            for io in config.iotas:
                if io > mesh.h / 10:
                    log.warning("example 3 expects iota << h; iota=%g, h=%.3g", io, mesh.h)
        hs.append(mesh.h)
        space = FESpace(mesh)
        blocks = assemble_blocks(space, config.quad_degree)
        for nu in config.nus:
            for io in config.iotas:
                params = MaterialParams(nu=nu, iota=io)
                ex, f, bc = setup_problem(config.example, params, config.zero_forcing)
                key = f"run.nu{nu:g}.iota{io:g}.{tag}"
                try:
                    system = build_saddle_system(space, params, f, bc, config.mean_constraint,
                                                 blocks=blocks, quad_degree=config.quad_degree)
                    u, p, mult, rep = solve_saddle(system)
                except Exception as exc:
                    raise ExperimentError(
                        f"solve failed for nu={nu:g}, iota={io:g}, h={mesh.h:.4g} (n={n}): {exc}"
                    ) from exc
                er = error_report(space, system.full_u(u), ex, io, config.error_quad_degree)
                rel = er.relative if er.reference > 0 else er.absolute
                errors[(nu, io)].append(rel)
                for k, v in rep.as_dict().items():
                    man[f"{key}.solve.{k}"] = v
                man[f"{key}.rel_error"] = rel
                log.info("nu=%g iota=%g n=%d rel_error=%.4e residual=%.1e",
                         nu, io, n, rel, rep.residual)
    tables = {}
    for (nu, io), errs in errors.items():
        label = lame_label(MaterialParams(nu=nu, iota=io))
        if len(errs) >= 2:
            tables[(nu, io)] = rate_table(errs, hs, io, label)
        else:
            tables[(nu, io)] = RateTable((RateRow(io, hs[0], errs[0], None),), label)
        man[f"label.nu{nu:g}"] = label
    man["wall_time"] = time.perf_counter() - t_start
    return ExperimentResult(config, tables, man)


# ---------------------------------------------------------------------------
# output


def _fmt_rate(r: Optional[float]) -> str:
    return "" if r is None else f"{r:.2f}"


def emit_table(table: RateTable, fmt: str = "markdown") -> str:
    """One block as CSV (``iota,h,rel_error,rate``) or a markdown table."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iota", "h", "rel_error", "rate"])
        for row in table.rows:
            w.writerow([repr(row.iota), repr(row.h), repr(row.rel_error),
                        "" if row.rate is None else repr(row.rate)])
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    if table.label:
        lines += [f"**{table.label}, iota={table.rows[0].iota:.0e}**", ""]
    lines += ["| h | rel. error | rate |", "|---|---|---|"]
    for row in table.rows:
        lines.append(f"| {row.h:.4f} | {row.rel_error:.3e} | {_fmt_rate(row.rate)} |")
    return "\n".join(lines) + "\n"


def _h_label(n: int) -> str:
    return f"1/{n}"


def emit_grid(result: ExperimentResult) -> str:
    """All blocks in one markdown grid: iota rows with rate rows below, one section per nu."""
    cfg = result.config
    cols = [_h_label(n) for n in cfg.levels]
    lines = [f"| iota \\ h | {' | '.join(cols)} |", "|" + "---|" * (len(cols) + 1)]
    for nu in cfg.nus:
        label = lame_label(MaterialParams(nu=nu))
        lines.append(f"| **{label}** |" + " |" * len(cols))
        for io in cfg.iotas:
            t = result.tables[(nu, io)]
            lines.append(f"| {io:.0e} | " + " | ".join(f"{e:.3e}" for e in t.errors) + " |")
            if len(t.rows) > 1:
                lines.append("| rate | | " + " | ".join(_fmt_rate(r) for r in t.rates) + " |")
    return "\n".join(lines) + "\n"


def emit_all(result: ExperimentResult, fmt: str) -> str:
    if fmt == "markdown":
        return emit_grid(result)
    parts = []
    for (nu, io), t in result.tables.items():
        parts.append(f"# {t.label},iota={io:g}\n" + emit_table(t, "csv"))
    return "\n".join(parts)


def write_manifest(manifest: Dict[str, object], path: Path) -> None:
    lines = []
    for k, v in manifest.items():
        if isinstance(v, float):
            v = repr(v)
        lines.append(f"{k}={v}")
    path.write_text("\n".join(lines) + "\n")


def write_outputs(result: ExperimentResult, out: Path) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    ext = "csv" if result.config.fmt == "csv" else "md"
    ex = result.config.example
    written = []
    for (nu, io), t in result.tables.items():
        p = out / f"example{ex}_nu{nu:g}_iota{io:g}.{ext}"
        p.write_text(emit_table(t, result.config.fmt))
        written.append(p)
    p = out / f"example{ex}.{ext}"
    p.write_text(emit_all(result, result.config.fmt))
    written.append(p)
    p = out / f"example{ex}_manifest.txt"
    write_manifest(result.manifest, p)
    written.append(p)
    return written


# ---------------------------------------------------------------------------
# command line


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sgmixed",
        description="Convergence tables for the mixed strain gradient elasticity solver.")
    ap.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    ap.add_argument("--nu", type=float, nargs="+", default=[0.3, 0.4999])
    ap.add_argument("--iota", type=float, nargs="+", default=None,
                    help="default: 1 1e-6 (examples 1, 2), 1e-4 1e-6 (example 3)")
    ap.add_argument("--levels", type=int, nargs="+", default=[8, 16, 32, 64],
                    help="subdivisions per side")
    ap.add_argument("--perturb", type=float, default=0.2)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--format", dest="fmt", choices=("csv", "markdown"), default="markdown")
    ap.add_argument("--out", type=Path, default=None, help="directory for tables and manifest")
    ap.add_argument("--mean-constraint", choices=("on", "off", "auto"), default="auto")
    ap.add_argument("--quad-degree", type=int, default=12)
    ap.add_argument("--error-quad-degree", type=int, default=20)
    ap.add_argument("--zero-forcing", action="store_true",
                    help="replace the load by zero (the exact solution becomes zero)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = RunConfig(example=args.example, nus=tuple(args.nu),
                        iotas=None if args.iota is None else tuple(args.iota),
                        levels=tuple(args.levels), perturb=args.perturb, seed=args.seed,
                        fmt=args.fmt, out=args.out, mean_constraint=args.mean_constraint,
                        quad_degree=args.quad_degree, error_quad_degree=args.error_quad_degree,
                        zero_forcing=args.zero_forcing)
        for nu in cfg.nus:
            print(lame_label(MaterialParams(nu=nu)), file=sys.stderr)
        result = run_experiment(cfg)
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit_all(result, cfg.fmt))
    if cfg.out is not None:
        for p in write_outputs(result, cfg.out):
            print(f"wrote {p}", file=sys.stderr)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
