"""Exact solutions and forcing terms of the benchmark problems.

Smooth fields are finite sums ``c * T(k pi x) * S(m pi y)`` with ``T, S`` in
``{sin, cos}``.  Products and derivatives stay in that class, so the forcing
``(iota^2 Delta - I) L u`` is computed exactly (rational coefficients times
powers of pi) instead of being transcribed by hand.

The corner solution is a combination of ``z^a conj(z)^b`` with ``z = x + i y``.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

import numpy as np

# ---------------------------------------------------------------------------
# separable trigonometric series


def _mul1d(a: Tuple[str, int], b: Tuple[str, int]):
    """Product-to-sum for ``T(k t) * S(m t)``; returns ``[(coef, kind, freq)]``."""
    (ta, ka), (tb, kb) = a, b
    d, s = ka - kb, ka + kb
    if ta == "s" and tb == "s":
        return [(Fraction(1, 2), "c", abs(d)), (Fraction(-1, 2), "c", s)]
    if ta == "c" and tb == "c":
        return [(Fraction(1, 2), "c", abs(d)), (Fraction(1, 2), "c", s)]
    if ta == "c":  # cos * sin
        (ta, ka), (tb, kb) = b, a
        d = ka - kb
    # sin(ka) cos(kb) = (sin(ka+kb) + sin(ka-kb)) / 2
    sgn = 1 if d >= 0 else -1
    return [(Fraction(1, 2), "s", s), (Fraction(sgn, 2), "s", abs(d))]


@dataclass(frozen=True)
class TrigSeries:
    """``sum coef * pi^p * X(kx pi x) * Y(ky pi y)``; keys ``(p, (tx, kx), (ty, ky))``."""

    terms: Dict[tuple, Fraction] = field(default_factory=dict)

    @classmethod
    def factor(cls, kind: str, k: int, var: str, coef=1) -> "TrigSeries":
        one = ("c", 0)
        key = (0, (kind, k), one) if var == "x" else (0, one, (kind, k))
        return cls({key: Fraction(coef)}).clean()

    @classmethod
    def const(cls, c) -> "TrigSeries":
        return cls({(0, ("c", 0), ("c", 0)): Fraction(c)}).clean()

    def clean(self) -> "TrigSeries":
        out = {}
        for (p, (tx, kx), (ty, ky)), c in self.terms.items():
            if c == 0 or (tx == "s" and kx == 0) or (ty == "s" and ky == 0):
                continue
            out[(p, (tx, kx), (ty, ky))] = c
        return TrigSeries(out)

    def __add__(self, other: "TrigSeries") -> "TrigSeries":
        acc = defaultdict(Fraction, self.terms)
        for k, c in other.terms.items():
            acc[k] += c
        return TrigSeries(dict(acc)).clean()

    def scale(self, c) -> "TrigSeries":
        return TrigSeries({k: v * Fraction(c) for k, v in self.terms.items()}).clean()

    def __neg__(self) -> "TrigSeries":
        return self.scale(-1)

    def __sub__(self, other: "TrigSeries") -> "TrigSeries":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TrigSeries):
            return self.scale(other)
        acc = defaultdict(Fraction)
        for (p1, x1, y1), c1 in self.terms.items():
            for (p2, x2, y2), c2 in other.terms.items():
                for cx, tx, kx in _mul1d(x1, x2):
                    for cy, ty, ky in _mul1d(y1, y2):
                        acc[(p1 + p2, (tx, kx), (ty, ky))] += c1 * c2 * cx * cy
        return TrigSeries(dict(acc)).clean()

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TrigSeries":
        out = TrigSeries.const(1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, var: str) -> "TrigSeries":
        acc = defaultdict(Fraction)
        for (p, x, y), c in self.terms.items():
            t, k = x if var == "x" else y
            nt, s = ("c", 1) if t == "s" else ("s", -1)
            nx, ny = ((nt, k), y) if var == "x" else (x, (nt, k))
            acc[(p + 1, nx, ny)] += c * s * k
        return TrigSeries(dict(acc)).clean()

    def laplacian(self) -> "TrigSeries":
        return self.diff("x").diff("x") + self.diff("y").diff("y")

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        fx = {}
        for (p, (tx, kx), (ty, ky)), c in self.terms.items():
            for key, arg in (((tx, kx, "x"), x), ((ty, ky, "y"), y)):
                if key not in fx:
                    fx[key] = (np.sin if key[0] == "s" else np.cos)(key[1] * math.pi * arg)
            out = out + float(c) * math.pi ** p * fx[(tx, kx, "x")] * fx[(ty, ky, "y")]
        return out


def sin(k: int, var: str) -> TrigSeries:
    return TrigSeries.factor("s", k, var)


def cos(k: int, var: str) -> TrigSeries:
    return TrigSeries.factor("c", k, var)


# ---------------------------------------------------------------------------
# fields built from complex monomials z^a conj(z)^b


@dataclass(frozen=True)
class ComplexMonomials:
    """``part(sum c_j z^{a_j} conj(z)^{b_j})`` with ``part`` in ``{"re", "im"}``."""

    terms: tuple  # ((coef complex, a, b), ...)
    part: str = "re"

    def diff(self, var: str) -> "ComplexMonomials":
        # d/dx = d/dz + d/dzbar ; d/dy = i (d/dz - d/dzbar)
        out = []
        for c, a, b in self.terms:
            fz = 1.0 if var == "x" else 1j
            fb = 1.0 if var == "x" else -1j
            if a != 0:
                out.append((c * a * fz, a - 1, b))
            if b != 0:
                out.append((c * b * fb, a, b - 1))
        return ComplexMonomials(tuple(out), self.part)

    def __call__(self, x, y):
        z = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)
        r = np.abs(z)
        th = np.angle(z)
        tot = np.zeros(z.shape, dtype=complex)
        for c, a, b in self.terms:
            n = a + b
            with np.errstate(divide="ignore", invalid="ignore"):
                val = c * r ** n * np.exp(1j * (a - b) * th)
            if n > 0:
                val = np.where(r == 0, 0.0, val)
            tot = tot + val
        return tot.real if self.part == "re" else tot.imag


# ---------------------------------------------------------------------------
# exact solutions


@dataclass
class ExactSolution:
    """Displacement with derivatives, pressure ``lam * div u`` and forcing.

    ``u`` returns shape ``(2, ...)``, ``grad`` ``(2, 2, ...)`` indexed
    ``[component, derivative]`` and ``hess`` ``(2, 2, 2, ...)``.
    """

    name: str
    comps: tuple                   # two scalar fields supporting diff and __call__
    lam: float
    forcing: Optional[tuple] = None  # two callables, or None for f = 0
    singular_point: Optional[Tuple[float, float]] = None
    _d1: tuple = field(init=False, repr=False)
    _d2: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self._d1 = tuple(tuple(c.diff(v) for v in "xy") for c in self.comps)
        self._d2 = tuple(tuple(tuple(d.diff(v) for v in "xy") for d in row) for row in self._d1)

    @property
    def singular(self) -> bool:
        return self.singular_point is not None

    def u(self, x, y) -> np.ndarray:
        return np.stack([c(x, y) for c in self.comps])

    def grad(self, x, y) -> np.ndarray:
        return np.stack([np.stack([d(x, y) for d in row]) for row in self._d1])

    def hess(self, x, y) -> np.ndarray:
        return np.stack([np.stack([np.stack([h(x, y) for h in r2]) for r2 in r1])
                         for r1 in self._d2])

    def div(self, x, y) -> np.ndarray:
        return self._d1[0][0](x, y) + self._d1[1][1](x, y)

    def p(self, x, y) -> np.ndarray:
        return self.lam * self.div(x, y)

    def f(self, x, y):
        if self.forcing is None:
            shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
            return np.zeros((2,) + shape)
        return np.stack([g(x, y) for g in self.forcing])

    # tuple-valued adapters for boundary data
    def u_tuple(self, x, y):
        return tuple(self.u(x, y))

    def grad_tuple(self, x, y):
        G = self.grad(x, y)
        return ((G[0, 0], G[0, 1]), (G[1, 0], G[1, 1]))


def lame_operator(u1: TrigSeries, u2: TrigSeries, lam: Fraction, mu: Fraction):
    """``L u = mu Delta u + (lam + mu) grad div u`` on trig series."""
    d = u1.diff("x") + u2.diff("y")
    return (u1.laplacian() * mu + d.diff("x") * (lam + mu),
            u2.laplacian() * mu + d.diff("y") * (lam + mu))


def _frac(v: float) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def example1_fields():
    u1 = -(sin(1, "x") ** 3) * sin(2, "y") * sin(1, "y")
    u2 = sin(2, "x") * sin(1, "x") * sin(1, "y") ** 3
    return u1, u2


def example3_fields():
    u1 = -(sin(1, "x") ** 2) * sin(2, "y")
    u2 = sin(2, "x") * sin(1, "y") ** 2
    return u1, u2


def example1(lam: float, mu: float, iota: float) -> ExactSolution:
    """Divergence-free trigonometric solution of the full fourth-order problem."""
    u1, u2 = example1_fields()
    L1, L2 = lame_operator(u1, u2, _frac(lam), _frac(mu))
    i2 = _frac(iota) ** 2
    f1 = L1.laplacian() * i2 - L1
    f2 = L2.laplacian() * i2 - L2
    return ExactSolution("example1", (u1, u2), lam, (f1, f2))


def example3(lam: float, mu: float, iota: float = 0.0) -> ExactSolution:
    """Limit solution ``u0``; forcing ``-L u0`` (independent of ``iota``)."""
    u1, u2 = example3_fields()
    L1, L2 = lame_operator(u1, u2, _frac(lam), _frac(mu))
    return ExactSolution("example3", (u1, u2), lam, (-L1, -L2))


ALPHA = 1.5
OMEGA = 3 * math.pi / 4


def corner_constants(lam: float, mu: float, alpha: float = ALPHA, omega: float = OMEGA):
    C1 = -math.cos((alpha + 1) * omega) / math.cos((alpha - 1) * omega)
    C2 = 2 * (lam + 2 * mu) / (lam + mu)
    return C1, C2


def example2(lam: float, mu: float, iota: float = 0.0,
             alpha: float = ALPHA, omega: float = OMEGA) -> ExactSolution:
    """Corner singularity at the origin with ``L u = 0``.

    From the polar form, with ``A = -(alpha+1)``, ``B = (C2-alpha-1) C1`` and
    ``B' = (C2+alpha-1) C1``::

        2 mu u1 = (A + (B+B')/2) rho^a cos(a t) + (B-B')/2 rho^a cos((a-2) t)
        2 mu u2 = (-A + (B+B')/2) rho^a sin(a t) + (B'-B)/2 rho^a sin((a-2) t)

    and ``rho^a e^{i (a-2) t} = z^(a-1) conj(z)``.
    """
    C1, C2 = corner_constants(lam, mu, alpha, omega)
    A = -(alpha + 1)
    B = (C2 - (alpha + 1)) * C1
    Bp = (C2 + alpha - 1) * C1
    s = 1.0 / (2 * mu)
    u1 = ComplexMonomials(((s * (A + (B + Bp) / 2), alpha, 0.0),
                           (s * (B - Bp) / 2, alpha - 1, 1.0)), "re")
    u2 = ComplexMonomials(((s * (-A + (B + Bp) / 2), alpha, 0.0),
                           (s * (Bp - B) / 2, alpha - 1, 1.0)), "im")
    return ExactSolution("example2", (u1, u2), lam, None, singular_point=(0.0, 0.0))


EXAMPLES: Dict[int, Callable[..., ExactSolution]] = {1: example1, 2: example2, 3: example3}


def exact_solution(example: int, lam: float, mu: float, iota: float) -> ExactSolution:
    try:
        build = EXAMPLES[example]
    except KeyError:
        raise ValueError(f"unknown example {example}") from None
    return build(lam, mu, iota)
