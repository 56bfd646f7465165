"""Scalar profile functions and their derivative jets.

A profile is a real function of one variable defined on an open interval.
Every backend answers ``eval_jet`` with value and derivatives up to order 3
(or raises :class:`UnsupportedOrder`); ``fd_jet`` is an independent
finite-difference oracle that only ever looks at values.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, UnsupportedOrder

EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class ScalarJet:
    value: float
    d1: float
    d2: float
    d3: float | None = None  # None when the caller asked for order 2 only

    def as_tuple(self):
        return (self.value, self.d1, self.d2, self.d3)


@dataclass(frozen=True)
class Interval:
    """Interval of the real line; open unless ``closed`` is set."""

    lo: float = -math.inf
    hi: float = math.inf
    closed: bool = False

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty interval ({self.lo}, {self.hi})")

    def __contains__(self, s) -> bool:
        if self.closed:
            return self.lo <= s <= self.hi
        return self.lo < s < self.hi

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def shrink(self, delta: float) -> "Interval":
        lo = self.lo + delta if math.isfinite(self.lo) else self.lo
        hi = self.hi - delta if math.isfinite(self.hi) else self.hi
        return Interval(lo, hi, self.closed)

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def linspace(self, n: int) -> np.ndarray:
        if not self.finite:
            raise DomainError(f"cannot sample the unbounded interval {self}")
        return np.linspace(self.lo, self.hi, n)

    def __str__(self):
        left, right = ("[", "]") if self.closed else ("(", ")")
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


REAL_LINE = Interval()


class ProfileKind(enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    ANALYTIC = "analytic-catalog-entry"
    TABULATED = "tabulated-ODE-solution"
    QUADRATURE = "quadrature-defined"


class Profile:
    """Base class. Subclasses implement ``_jet(s, order)``."""

    kind: ProfileKind = ProfileKind.ANALYTIC
    max_order: int = 3

    def __init__(self, domain: Interval = REAL_LINE, params: dict | None = None,
                 name: str = ""):
        self.domain = domain
        self.params = dict(params or {})
        self.name = name or type(self).__name__

    def _jet(self, s: float, order: int) -> ScalarJet:
        raise NotImplementedError

    def value(self, s: float) -> float:
        return eval_jet(self, s, order=0).value

    def __call__(self, s: float) -> float:
        return self.value(s)

    def __repr__(self):
        ps = ", ".join(f"{k}={v:g}" for k, v in self.params.items()
                       if isinstance(v, (int, float)))
        return f"{self.name}({ps}) on {self.domain}"


def eval_jet(fn: Profile, s: float, order: int = 3) -> ScalarJet:
    """Value and derivatives of ``fn`` at ``s`` up to ``order``.

    Orders below 3 leave ``d3`` as None. Backends may fill d1/d2 even for
    ``order=0``; callers asking for order 0 must only read ``value``.
    """
    s = float(s)
    if s not in fn.domain:
        raise DomainError(f"{fn.name}: s={s!r} outside {fn.domain}")
    if order > fn.max_order:
        raise UnsupportedOrder(
            f"{fn.name} ({fn.kind.value}) supplies derivatives up to order "
            f"{fn.max_order}, not {order}")
    return fn._jet(s, order)


def default_steps(s: float) -> tuple[float, float, float]:
    """Steps balancing truncation against roundoff for d1, d2, d3."""
    scale = 1.0 + abs(s)
    return EPS ** (1 / 3) * scale, EPS ** (1 / 4) * scale, EPS ** (1 / 5) * scale


def fd_jet(fn: Profile, s: float, h: float | None = None) -> ScalarJet:
    """Central-difference jet built from values of ``fn`` only.

    With ``h=None`` each derivative order gets its own step from
    :func:`default_steps`; an explicit ``h`` is used for all three.
    The stencil reaches ``s +- 2h`` and must stay inside the domain.
    """
    s = float(s)
    if h is None:
        h1, h2, h3 = default_steps(s)
    else:
        if h <= 0:
            raise ValueError("h must be positive")
        h1 = h2 = h3 = float(h)
    reach = 2 * max(h1, h2, h3)
    if (s - reach) not in fn.domain or (s + reach) not in fn.domain:
        raise DomainError(f"{fn.name}: stencil s={s!r} +- {reach:.3g} leaves {fn.domain}")

    def v(x):
        return eval_jet(fn, x, order=0).value

    f0 = v(s)
    d1 = (v(s + h1) - v(s - h1)) / (2 * h1)
    d2 = (v(s + h2) - 2 * f0 + v(s - h2)) / h2 ** 2
    d3 = (v(s + 2 * h3) - 2 * v(s + h3) + 2 * v(s - h3) - v(s - 2 * h3)) / (2 * h3 ** 3)
    return ScalarJet(f0, d1, d2, d3)


# --- closed-form backends -------------------------------------------------


class ConstantProfile(Profile):
    kind = ProfileKind.CONSTANT

    def __init__(self, c: float, domain: Interval = REAL_LINE, name="constant"):
        super().__init__(domain, {"c": float(c)}, name)
        self.c = float(c)

    def _jet(self, s, order):
        return ScalarJet(self.c, 0.0, 0.0, 0.0 if order >= 3 else None)


class LinearProfile(Profile):
    """c0 + c1 * s"""

    kind = ProfileKind.LINEAR

    def __init__(self, c0: float, c1: float, domain: Interval = REAL_LINE, name="linear"):
        super().__init__(domain, {"c0": float(c0), "c1": float(c1)}, name)
        self.c0, self.c1 = float(c0), float(c1)

    def _jet(self, s, order):
        return ScalarJet(self.c0 + self.c1 * s, self.c1, 0.0, 0.0 if order >= 3 else None)


class PolynomialProfile(Profile):
    """Polynomial with coefficients in increasing degree."""

    def __init__(self, coeffs: Sequence[float], domain: Interval = REAL_LINE,
                 name="polynomial"):
        coeffs = [float(c) for c in coeffs] or [0.0]
        super().__init__(domain, {f"a{i}": c for i, c in enumerate(coeffs)}, name)
        self.poly = np.polynomial.Polynomial(coeffs)
        self._derivs = [self.poly.deriv(k) for k in (1, 2, 3)]

    def _jet(self, s, order):
        d = [float(p(s)) for p in self._derivs]
        return ScalarJet(float(self.poly(s)), d[0], d[1], d[2] if order >= 3 else None)


class AnalyticProfile(Profile):
    """Profile given by four closed-form callables (value, d1, d2, d3)."""

    def __init__(self, funcs: Sequence[Callable[[float], float]], domain: Interval,
                 params: dict | None = None, name="analytic"):
        if len(funcs) != 4:
            raise ValueError("need value, d1, d2, d3 callables")
        super().__init__(domain, params, name)
        self.funcs = tuple(funcs)

    def _jet(self, s, order):
        f, f1, f2, f3 = self.funcs
        return ScalarJet(float(f(s)), float(f1(s)), float(f2(s)),
                         float(f3(s)) if order >= 3 else None)


def catenary_profile(lam: float, mu: float = 0.0) -> AnalyticProfile:
    """s -> cosh(lam*s + mu)/lam."""
    lam, mu = float(lam), float(mu)
    return AnalyticProfile(
        (lambda s: math.cosh(lam * s + mu) / lam,
         lambda s: math.sinh(lam * s + mu),
         lambda s: lam * math.cosh(lam * s + mu),
         lambda s: lam * lam * math.sinh(lam * s + mu)),
        REAL_LINE, {"lambda": lam, "mu": mu}, name="catenary")


def logcos_profile(a: float, b: float, c: float = 0.0, d: float = 0.0,
                   branch: int = 0) -> AnalyticProfile:
    """s -> a*ln|cos(b*s + c)| + d on one interval between consecutive poles.

    ``branch`` selects the interval where b*s + c lies in
    (-pi/2 + k*pi, pi/2 + k*pi).
    """
    a, b, c, d = map(float, (a, b, c, d))
    if b == 0:
        raise ValueError("b must be nonzero")
    ends = sorted(((-math.pi / 2 + branch * math.pi - c) / b,
                   (math.pi / 2 + branch * math.pi - c) / b))

    def sec2(s):
        return 1.0 / math.cos(b * s + c) ** 2

    return AnalyticProfile(
        (lambda s: a * math.log(abs(math.cos(b * s + c))) + d,
         lambda s: -a * b * math.tan(b * s + c),
         lambda s: -a * b * b * sec2(s),
         lambda s: -2 * a * b ** 3 * sec2(s) * math.tan(b * s + c)),
        Interval(*ends), {"a": a, "b": b, "c": c, "d": d}, name="logcos")


def arctan_cylinder_profile(c2: float, c3: float = 0.0, sign: int = 1) -> AnalyticProfile:
    """z -> sign * (1/2) * arctan(sqrt(e^{4z} - c2^2) / c2) + c3 on z > ln|c2|/2.

    The radicand is formed as c2^2 * expm1(4z - 2 ln|c2|) so the profile
    stays accurate right next to the edge of its domain.
    """
    c2, c3 = float(c2), float(c3)
    if c2 == 0:
        raise ValueError("c2 must be nonzero")
    sgn = 1.0 if sign >= 0 else -1.0
    z_min = math.log(abs(c2)) / 2

    def rad(z):
        return c2 * c2 * math.expm1(4 * z - 2 * math.log(abs(c2)))

    def e4(z):
        return math.exp(4 * z)

    return AnalyticProfile(
        (lambda z: sgn * 0.5 * math.atan(math.sqrt(rad(z)) / c2) + c3,
         lambda z: sgn * c2 / math.sqrt(rad(z)),
         lambda z: -2 * sgn * c2 * e4(z) * rad(z) ** -1.5,
         lambda z: 4 * sgn * c2 * e4(z) * (e4(z) + 2 * c2 * c2) * rad(z) ** -2.5),
        Interval(z_min, math.inf), {"c2": c2, "c3": c3, "sign": sgn}, name="arctan")


class ShiftedProfile(Profile):
    """``base + offset``; used to perturb profiles in defect tests."""

    def __init__(self, base: Profile, offset: float):
        super().__init__(base.domain, {"offset": float(offset)},
                         f"{base.name}{offset:+g}")
        self.base, self.offset = base, float(offset)
        self.kind, self.max_order = base.kind, base.max_order

    def _jet(self, s, order):
        j = self.base._jet(s, order)
        return ScalarJet(j.value + self.offset, j.d1, j.d2, j.d3)
