"""Antiderivatives with an inverse-square-root branch point, and the profiles
built from them.

A kernel phi(t) blows up like |t - t*|^(-1/2) at a branch point t*. With
t = t* + dir*tau^2 the integrand becomes psi(tau) = 2 tau phi(t), which is
smooth up to tau = 0, so ordinary adaptive quadrature converges fast. The
radicand is evaluated through expm1/log1p of (t - t*)/t* so it keeps full
relative accuracy next to the branch point.

Integrals are tabulated on a lazily grown grid in tau; a value is the
nearest tabulated node plus one short quadrature. Inverse profiles solve
G(tau) = s inside the bracket given by two tabulated nodes, with
safeguarded Newton steps (G' = psi is known in closed form).
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .errors import BadParam, DomainError
from .jets import Interval, Profile, ProfileKind, ScalarJet

QUAD_OPTS = {"epsabs": 1e-15, "epsrel": 1e-14, "limit": 200}


class PowerKernel:
    """phi(t) = (c t^p + d)^(-1/2) for t > 0, on the side of t* where c t^p + d > 0."""

    def __init__(self, c: float, d: float, p: float):
        if c == 0 or p == 0:
            raise BadParam("need c != 0 and p != 0")
        ratio = -d / c
        if not ratio > 0:
            raise BadParam(f"c t^p + d has no positive root for c={c:g}, d={d:g}")
        self.c, self.d, self.p = float(c), float(d), float(p)
        self.t_star = ratio ** (1.0 / p)
        self.dir = 1 if c * p > 0 else -1

    def radicand(self, t: float) -> float:
        return -self.d * math.expm1(self.p * math.log1p((t - self.t_star) / self.t_star))

    def radicand_tau(self, tau: float) -> float:
        return -self.d * math.expm1(self.p * math.log1p(self.dir * tau * tau / self.t_star))

    def phi(self, t: float) -> float:
        return self.radicand(t) ** -0.5

    def dphi(self, t: float) -> float:
        return -0.5 * self.c * self.p * t ** (self.p - 1) * self.radicand(t) ** -1.5

    def psi(self, tau: float) -> float:
        if tau == 0:
            return 2 * math.sqrt(self.t_star / (-self.d * self.p * self.dir))
        return 2 * tau / math.sqrt(self.radicand_tau(tau))


class ReciprocalPowerKernel:
    """phi(t) = t^a (1 - k^2 t^(2a))^(-1/2), written out as its own formula.

    Algebraically this equals PowerKernel(1, -k^2, -2a); keeping a separate
    implementation lets the two be compared.
    """

    def __init__(self, a: float, k: float):
        if a == 0 or k == 0:
            raise BadParam("need a != 0 and k != 0")
        self.a, self.k2 = float(a), float(k) ** 2
        self.t_star = abs(k) ** (-1.0 / a)
        self.dir = -1 if a > 0 else 1

    def _one_minus_q(self, rel):
        return -math.expm1(2 * self.a * math.log1p(rel))

    def phi(self, t: float) -> float:
        return t ** self.a / math.sqrt(self._one_minus_q((t - self.t_star) / self.t_star))

    def dphi(self, t: float) -> float:
        omq = self._one_minus_q((t - self.t_star) / self.t_star)
        return self.a * t ** (self.a - 1) * omq ** -1.5

    def psi(self, tau: float) -> float:
        if tau == 0:
            return 2 * self.t_star ** self.a * math.sqrt(self.t_star / (-2 * self.a * self.dir))
        t = self.t_star + self.dir * tau * tau
        return 2 * tau * t ** self.a / math.sqrt(self._one_minus_q(self.dir * tau * tau / self.t_star))


class BranchAntiderivative:
    """G(tau) = integral of psi over [0, tau], tabulated lazily."""

    def __init__(self, kernel, step: float | None = None):
        self.kernel = kernel
        t_star = kernel.t_star
        # with dir = -1 the variable t runs down to 0, i.e. tau up to sqrt(t*)
        self.tau_max = math.sqrt(t_star) if kernel.dir < 0 else math.inf
        self.step = step or (self.tau_max / 32 if kernel.dir < 0 else max(math.sqrt(t_star), 1.0) / 32)
        self.taus = [0.0]
        self.values = [0.0]
        self.abserr = 0.0
        self._limit = None

    def _quad(self, a, b):
        # the tolerances sit at machine precision on purpose; QUADPACK
        # flags that as roundoff, and the reported abserr is kept instead
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            return quad(self.kernel.psi, a, b, **QUAD_OPTS)

    def _grow_once(self):
        last = self.taus[-1]
        nxt = last + max(self.step, 0.25 * last)
        if nxt >= self.tau_max * (1 - 1e-12):
            nxt = self.tau_max
        if nxt <= last:
            raise DomainError("antiderivative table cannot grow beyond the domain")
        val, err = self._quad(last, nxt)
        self.taus.append(nxt)
        self.values.append(self.values[-1] + val)
        self.abserr += err

    def limit(self) -> float:
        """G at the far end of the domain (inf when it diverges)."""
        if self._limit is None:
            if math.isfinite(self.tau_max):
                while self.taus[-1] < self.tau_max:
                    self._grow_once()
                self._limit = self.values[-1]
            else:
                # psi ~ tau^(1-p) at infinity for the power kernel: finite iff p > 2
                p = getattr(self.kernel, "p", -2 * getattr(self.kernel, "a", 0))
                if p > 2:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", IntegrationWarning)
                        self._limit = quad(self.kernel.psi, 0, math.inf, **QUAD_OPTS)[0]
                else:
                    self._limit = math.inf
        return self._limit

    def __call__(self, tau: float) -> float:
        if tau < 0 or tau > self.tau_max:
            raise DomainError(f"tau={tau!r} outside [0, {self.tau_max}]")
        while self.taus[-1] < tau:
            self._grow_once()
        k = int(np.searchsorted(self.taus, tau, side="right") - 1)
        if k >= len(self.taus) - 1:
            return self.values[-1] if tau == self.taus[-1] else self.values[k] + self._quad(self.taus[k], tau)[0]
        lo, hi = self.taus[k], self.taus[k + 1]
        if tau - lo <= hi - tau:
            return self.values[k] + (self._quad(lo, tau)[0] if tau > lo else 0.0)
        return self.values[k + 1] - self._quad(tau, hi)[0]

    def inverse(self, target: float) -> float:
        """tau with G(tau) = target, for 0 <= target < limit()."""
        if target < 0 or target >= self.limit():
            raise DomainError(f"{target!r} outside the range [0, {self.limit()})")
        if target == 0:
            return 0.0
        while self.values[-1] < target:
            self._grow_once()
        k = int(np.searchsorted(self.values, target, side="right") - 1)
        lo, hi = self.taus[k], self.taus[min(k + 1, len(self.taus) - 1)]
        if self.values[k] == target:
            return lo
        return self._solve_in_bracket(target, lo, hi, self.values[k], self.values[k + 1])

    def _solve_in_bracket(self, target, lo, hi, g_lo, g_hi):
        """Newton on G(tau) = target with G' = psi, kept inside [lo, hi].

        G is increasing, so every evaluation tightens the bracket; a Newton
        step leaving it is replaced by bisection. Brent's method is the
        fallback if the iteration stalls.
        """
        tau = lo + (hi - lo) * (target - g_lo) / (g_hi - g_lo)
        for _ in range(60):
            r = self(tau) - target
            if r == 0:
                return tau
            if r > 0:
                hi = tau
            else:
                lo = tau
            step = r / self.kernel.psi(tau)
            nxt = tau - step
            if not lo < nxt < hi:
                nxt = 0.5 * (lo + hi)
            if abs(nxt - tau) <= 2 * np.finfo(float).eps * max(abs(tau), 1e-300):
                return nxt
            tau = nxt
        return brentq(lambda t: self(t) - target, lo, hi, xtol=1e-300,
                      rtol=4 * np.finfo(float).eps, maxiter=200)


class QuadratureProfile(Profile):
    """f(t) = scale * integral of phi from the branch point t* to t.

    Value comes from the tabulated antiderivative; d1 and d2 from the kernel
    and its derivative. The profile is pinned to 0 at t*.
    """

    kind = ProfileKind.QUADRATURE
    max_order = 2

    def __init__(self, kernel, scale: float, params=None, name="quadrature"):
        lo, hi = (kernel.t_star, math.inf) if kernel.dir > 0 else (0.0, kernel.t_star)
        super().__init__(Interval(lo, hi), params, name)
        self.kernel, self.scale = kernel, float(scale)
        self.antiderivative = BranchAntiderivative(kernel)

    @property
    def error_bound(self) -> float:
        return abs(self.scale) * self.antiderivative.abserr

    def _jet(self, s, order):
        k = self.kernel
        tau = math.sqrt(k.dir * (s - k.t_star))
        v = self.scale * k.dir * self.antiderivative(tau)
        if order == 0:
            return ScalarJet(v, math.nan, math.nan)
        return ScalarJet(v, self.scale * k.phi(s), self.scale * k.dphi(s), None)


class InverseQuadratureProfile(Profile):
    """Profile w(s) - shift where s = sign * G(tau) and w = w* + dir tau^2.

    This inverts s = +-integral of (c w^p + d)^(-1/2) dw, pinned so that
    s = 0 at the branch point. ``sign`` selects the half-line s > 0 or s < 0.
    """

    kind = ProfileKind.QUADRATURE
    max_order = 2

    def __init__(self, kernel: PowerKernel, shift: float, sign: int = 1, params=None,
                 name="inverse-quadrature"):
        self.kernel, self.shift = kernel, float(shift)
        self.sign = 1 if sign >= 0 else -1
        self.antiderivative = BranchAntiderivative(kernel)
        reach = self.antiderivative.limit()
        dom = Interval(0.0, reach) if self.sign > 0 else Interval(-reach, 0.0)
        super().__init__(dom, params, name)

    @property
    def error_bound(self) -> float:
        return self.antiderivative.abserr

    @property
    def span(self) -> Interval:
        """A bounded interval inside the domain for sampling."""
        reach = min(self.antiderivative.limit() * 0.99, 2.0)
        return Interval(0.0, reach) if self.sign > 0 else Interval(-reach, 0.0)

    def _tau(self, s):
        return self.antiderivative.inverse(abs(s))

    def _jet(self, s, order):
        k = self.kernel
        tau = self._tau(s)
        w = k.t_star + k.dir * tau * tau
        v = w - self.shift
        if order == 0:
            return ScalarJet(v, math.nan, math.nan)
        d1 = self.sign * k.dir * math.sqrt(k.radicand_tau(tau))
        d2 = 0.5 * k.c * k.p * w ** (k.p - 1)
        return ScalarJet(v, d1, d2, None)

    def forward(self, value: float) -> float:
        """The parameter s at which the profile takes ``value``."""
        k = self.kernel
        w = value + self.shift
        tau2 = k.dir * (w - k.t_star)
        if 0 > tau2 >= -4 * np.spacing(k.t_star):
            tau2 = 0.0        # rounding of a value right at the branch point
        if tau2 < 0:
            raise DomainError(f"value {value!r} is on the wrong side of the branch point")
        return self.sign * self.antiderivative(math.sqrt(tau2))
