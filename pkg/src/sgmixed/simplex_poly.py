"""Exact polynomial algebra on the triangle.

Polynomials are stored in barycentric coordinates with rational
coefficients (:class:`fractions.Fraction`).  Floating point enters only
when a polynomial is evaluated at points.

Jacobi polynomials on ``[-1, 1]`` and on the triangle are built here,
together with their square norms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import numpy as np

Number = Union[int, Fraction]


class ParameterDomainError(ValueError):
    """Raised for Jacobi parameters outside ``alpha, beta > -1`` or bad indices."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Poly1D:
    """Univariate polynomial ``sum_i coeffs[i] * t**i`` with rational coefficients."""

    coeffs: tuple = ()

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "Poly1D":
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "Poly1D") -> "Poly1D":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly1D.from_coeffs(x + y for x, y in zip(a, b))

    def __sub__(self, other: "Poly1D") -> "Poly1D":
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, Poly1D):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return Poly1D()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly1D.from_coeffs(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly1D":
        c = _frac(c)
        return Poly1D.from_coeffs(a * c for a in self.coeffs)

    def __call__(self, t):
        if isinstance(t, Fraction) or isinstance(t, int):
            acc = Fraction(0)
            for a in reversed(self.coeffs):
                acc = acc * t + a
            return acc
        t = np.asarray(t, dtype=float)
        acc = np.zeros_like(t)
        for a in reversed(self.coeffs):
            acc = acc * t + float(a)
        return acc

    def integral(self, a, b) -> Fraction:
        """Exact integral over ``[a, b]``."""
        a, b = _frac(a), _frac(b)
        return sum((c * (b ** (i + 1) - a ** (i + 1)) / (i + 1)
                    for i, c in enumerate(self.coeffs)), Fraction(0))


# ---------------------------------------------------------------------------
# barycentric polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaryPoly:
    """Polynomial in the barycentric coordinates ``(l1, l2, l3)``.

    ``terms`` maps an exponent triple ``(i, j, k)`` to the rational
    coefficient of ``l1**i * l2**j * l3**k``.  Zero coefficients are
    never stored.
    """

    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != 3 or min(e) < 0:
                raise ValueError(f"bad exponent {e}")
            c = _frac(c)
            if c != 0:
                clean[e] = clean.get(e, Fraction(0)) + c
                if clean[e] == 0:
                    del clean[e]
        object.__setattr__(self, "terms", clean)

    # constructors
    @classmethod
    def constant(cls, c) -> "BaryPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def lam(cls, i: int) -> "BaryPoly":
        """The barycentric coordinate ``l_{i+1}`` (``i`` is 0-based)."""
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff=1) -> "BaryPoly":
        return cls({(a, b, c): coeff})

    # algebra
    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other) -> "BaryPoly":
        if not isinstance(other, BaryPoly):
            other = BaryPoly.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return BaryPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BaryPoly":
        return BaryPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "BaryPoly":
        if not isinstance(other, BaryPoly):
            other = BaryPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "BaryPoly":
        return (-self) + other

    def __mul__(self, other) -> "BaryPoly":
        if not isinstance(other, BaryPoly):
            c = _frac(other)
            return BaryPoly({e: v * c for e, v in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return BaryPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BaryPoly":
        out = BaryPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, BaryPoly):
            return NotImplemented
        return (self - other).reduced().is_zero()

    def __hash__(self):
        return hash(frozenset(self.reduced().terms.items()))

    def diff(self, m: int) -> "BaryPoly":
        """Formal partial derivative with respect to ``l_{m+1}``."""
        out = {}
        for e, c in self.terms.items():
            if e[m] == 0:
                continue
            f = list(e)
            f[m] -= 1
            out[tuple(f)] = c * e[m]
        return BaryPoly(out)

    def compose(self, subs) -> "BaryPoly":
        """Substitute ``l_i -> subs[i]`` (each a :class:`BaryPoly`)."""
        out = BaryPoly()
        pw = [[BaryPoly.constant(1)] for _ in range(3)]
        for e, c in self.terms.items():
            term = BaryPoly.constant(c)
            for i in range(3):
                while len(pw[i]) <= e[i]:
                    pw[i].append(pw[i][-1] * subs[i])
                term = term * pw[i][e[i]]
            out = out + term
        return out

    def permute(self, perm) -> "BaryPoly":
        """Rename coordinates: ``l_i`` becomes ``l_{perm[i]}``."""
        out = {}
        for e, c in self.terms.items():
            f = [0, 0, 0]
            for i in range(3):
                f[perm[i]] += e[i]
            out[tuple(f)] = out.get(tuple(f), Fraction(0)) + c
        return BaryPoly(out)

    def reduced(self) -> "BaryPoly":
        """Eliminate ``l3 = 1 - l1 - l2``; canonical form for comparisons."""
        one_minus = BaryPoly({(0, 0, 0): 1, (1, 0, 0): -1, (0, 1, 0): -1})
        return self.compose([BaryPoly.lam(0), BaryPoly.lam(1), one_minus])

    # evaluation / integration
    def __call__(self, l1, l2=None, l3=None):
        if l2 is None:
            pts = np.asarray(l1, dtype=float)
            l1, l2, l3 = pts[..., 0], pts[..., 1], pts[..., 2]
        if all(isinstance(x, (int, Fraction)) for x in (l1, l2, l3)):
            return sum((c * Fraction(l1) ** e[0] * Fraction(l2) ** e[1] * Fraction(l3) ** e[2]
                        for e, c in self.terms.items()), Fraction(0))
        l1, l2, l3 = (np.asarray(x, dtype=float) for x in (l1, l2, l3))
        out = np.zeros(np.broadcast(l1, l2, l3).shape)
        for e, c in self.terms.items():
            out = out + float(c) * l1 ** e[0] * l2 ** e[1] * l3 ** e[2]
        return out

    def mean(self) -> Fraction:
        """Exact average over the triangle: ``2 a! b! c! / (a+b+c+2)!`` per monomial."""
        return sum((c * _monomial_mean(*e) for e, c in self.terms.items()), Fraction(0))

    def edge_trace(self, i: int) -> Poly1D:
        """Restriction to edge ``e_i`` (where ``l_i = 0``) as a polynomial in ``s``.

        On ``e_i`` we use ``l_{i+1} = s`` and ``l_{i+2} = 1 - s`` (indices mod 3),
        so ``s`` runs from the vertex ``a_{i+2}`` to the vertex ``a_{i+1}``.
        """
        ip, im = (i + 1) % 3, (i + 2) % 3
        s = Poly1D.from_coeffs([0, 1])
        one_minus_s = Poly1D.from_coeffs([1, -1])
        out = Poly1D()
        for e, c in self.terms.items():
            if e[i]:
                continue
            term = Poly1D.from_coeffs([c])
            for _ in range(e[ip]):
                term = term * s
            for _ in range(e[im]):
                term = term * one_minus_s
            out = out + term
        return out

    def homogenized(self) -> "BaryPoly":
        """Equivalent homogeneous form of degree ``self.degree`` (uses ``l1+l2+l3 = 1``)."""
        d = self.degree
        one = BaryPoly({(1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1})
        out = BaryPoly()
        for e, c in self.terms.items():
            out = out + BaryPoly({e: c}) * one ** (d - sum(e))
        return out

    def content(self) -> Fraction:
        """Rational ``c`` such that ``self / c`` has coprime integer coefficients.

        Computed on the homogeneous form.  The sign makes the term with the
        largest exponent triple of the primitive part positive.
        """
        if not self.terms:
            return Fraction(0)
        self = self.homogenized()
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        g = math.gcd(*nums) if len(nums) > 1 else abs(nums[0])
        lcm = 1
        for d in dens:
            lcm = lcm * d // math.gcd(lcm, d)
        c = Fraction(g, lcm)
        lead = self.terms[sorted(self.terms)[-1]]
        return c if lead > 0 else -c


@lru_cache(maxsize=None)
def _monomial_mean(a: int, b: int, c: int) -> Fraction:
    return Fraction(2 * math.factorial(a) * math.factorial(b) * math.factorial(c),
                    math.factorial(a + b + c + 2))


def bubble() -> BaryPoly:
    """Cubic element bubble ``l1 l2 l3``."""
    return BaryPoly.monomial(1, 1, 1)


def edge_bubble(i: int) -> BaryPoly:
    """``b_K / l_i``: product of the two coordinates other than ``l_i``."""
    e = [1, 1, 1]
    e[i] = 0
    return BaryPoly.monomial(*e)


def homogeneous_monomials(r: int) -> list:
    """All ``l1^a l2^b l3^c`` with ``a+b+c = r``; a basis of ``P_r``."""
    return [BaryPoly.monomial(a, b, r - a - b)
            for a in range(r, -1, -1) for b in range(r - a, -1, -1)]


# ---------------------------------------------------------------------------
# Jacobi polynomials
# ---------------------------------------------------------------------------

def _check_params(*params):
    for p in params:
        if p <= -1:
            raise ParameterDomainError(f"Jacobi parameter {p} must exceed -1")


@lru_cache(maxsize=None)
def _jacobi_1d_cached(n: int, alpha: Fraction, beta: Fraction) -> Poly1D:
    p0 = Poly1D.from_coeffs([1])
    if n == 0:
        return p0
    p1 = Poly1D.from_coeffs([(alpha - beta) / 2, (alpha + beta + 2) / 2])
    ab = alpha + beta
    t = Poly1D.from_coeffs([0, 1])
    for m in range(2, n + 1):
        c = 2 * m + ab
        a1 = 2 * m * (m + ab) * (c - 2)
        a2 = (c - 1) * (alpha * alpha - beta * beta)
        a3 = (c - 1) * c * (c - 2)
        a4 = 2 * (m + alpha - 1) * (m + beta - 1) * c
        p0, p1 = p1, (t * p1 * a3 + p1 * a2 - p0 * a4).scale(Fraction(1) / a1)
    return p1


def jacobi_1d(n: int, alpha: Number, beta: Number) -> Poly1D:
    """Jacobi polynomial ``P_n^{(alpha, beta)}`` (three-term recurrence, exact)."""
    if n < 0:
        raise ParameterDomainError("degree must be nonnegative")
    _check_params(alpha, beta)
    return _jacobi_1d_cached(int(n), _frac(alpha), _frac(beta))


def _gamma_ratio_exact(args_num, args_den):
    out = Fraction(1)
    for a in args_num:
        out *= math.factorial(int(a) - 1)
    for a in args_den:
        out /= math.factorial(int(a) - 1)
    return out


def jacobi_norm_1d(n: int, alpha: Number, beta: Number):
    """Square norm ``h_n`` of ``P_n^{(alpha,beta)}`` under ``(1-t)^alpha (1+t)^beta``.

    Exact :class:`~fractions.Fraction` for integer parameters, float otherwise.
    """
    if n < 0:
        raise ParameterDomainError("degree must be nonnegative")
    _check_params(alpha, beta)
    num = (n + alpha + 1, n + beta + 1)
    den = (n + alpha + beta + 1, n + 1)
    if all(float(x).is_integer() for x in (alpha, beta)) and n + alpha + beta + 1 > 0:
        a, b = int(alpha), int(beta)
        return (Fraction(2) ** (a + b + 1) / (2 * n + a + b + 1)
                * _gamma_ratio_exact(num, den))
    lg = (sum(math.lgamma(float(x)) for x in num) - sum(math.lgamma(float(x)) for x in den))
    return 2.0 ** (float(alpha) + float(beta) + 1) / (2 * n + float(alpha) + float(beta) + 1) * math.exp(lg)


def _homogenized(p: Poly1D, s: BaryPoly, t: BaryPoly, k: int) -> BaryPoly:
    """``t**k * p(s / t)`` for ``deg p <= k``, expanded without division."""
    out = BaryPoly()
    for j, c in enumerate(p.coeffs):
        out = out + (s ** j) * (t ** (k - j)) * c
    return out


@lru_cache(maxsize=None)
def _jacobi_tri_cached(k, n, alpha, beta, gamma) -> BaryPoly:
    l1, l2, l3 = BaryPoly.lam(0), BaryPoly.lam(1), BaryPoly.lam(2)
    outer = jacobi_1d(n - k, 2 * k + beta + gamma + 1, alpha)
    inner = jacobi_1d(k, gamma, beta)
    x = l1 - l2 - l3
    first = BaryPoly()
    for j, c in enumerate(outer.coeffs):
        first = first + (x ** j) * c
    second = _homogenized(inner, l2 - l3, l2 + l3, k)
    return first * second


def jacobi_tri(k: int, n: int, alpha: Number, beta: Number, gamma: Number) -> BaryPoly:
    """Triangle Jacobi polynomial ``P_{k,n}^{(alpha,beta,gamma)}(l1, l2, l3)``.

    Orthogonal under the weight ``l1^alpha l2^beta l3^gamma``; degree ``n``.
    """
    if not 0 <= k <= n:
        raise ParameterDomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    _check_params(alpha, beta, gamma)
    return _jacobi_tri_cached(int(k), int(n), _frac(alpha), _frac(beta), _frac(gamma))


def jacobi_norm_tri(k: int, n: int, alpha: Number, beta: Number, gamma: Number):
    """``h_{k,n}``: half the weighted mean square of ``P_{k,n}`` over the triangle."""
    if not 0 <= k <= n:
        raise ParameterDomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    _check_params(alpha, beta, gamma)
    h1 = jacobi_norm_1d(n - k, 2 * k + beta + gamma + 1, alpha)
    h2 = jacobi_norm_1d(k, gamma, beta)
    expo = 2 * k + alpha + 2 * beta + 2 * gamma + 3
    if isinstance(h1, Fraction) and isinstance(h2, Fraction) and float(expo).is_integer():
        return h1 * h2 / Fraction(2) ** int(expo)
    return float(h1) * float(h2) * 2.0 ** (-float(expo))


def weight_poly(alpha: int, beta: int, gamma: int) -> BaryPoly:
    """``l1^alpha l2^beta l3^gamma`` for nonnegative integer exponents."""
    return BaryPoly.monomial(alpha, beta, gamma)
