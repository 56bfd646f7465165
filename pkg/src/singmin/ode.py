"""Embedded Dormand-Prince 5(4) integrator and tabulated second-order ODE profiles.

The step controller bounds the local error per unit step (error estimate
times interval length over step size) instead of per step. That keeps the
local error proportional to h, so the derivative of the interpolant follows
the ODE with a defect that scales with the tolerance. Per-step control
leaves an O(err/h^2) mismatch in the second derivative at the nodes that
does not shrink reliably.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import BPoly

from .errors import BadParam, FlatSolution, HalfspaceViolation, StepFailure
from .jets import Interval, Profile, ProfileKind, ScalarJet

# Dormand-Prince tableau with the continuous extension of Shampine.
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1])
_A = np.array([
    [0, 0, 0, 0, 0],
    [1 / 5, 0, 0, 0, 0],
    [3 / 40, 9 / 40, 0, 0, 0],
    [44 / 45, -56 / 15, 32 / 9, 0, 0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
])
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array([-71 / 57600, 0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

BLOWUP = 1e12
MIN_STEP_FRACTION = 1e-13
MAX_STEPS = 200_000


@dataclass(frozen=True)
class OdeSolveConfig:
    rtol: float = 1e-8
    atol: float | None = None      # None -> rtol * 1e-2
    max_step: float = math.inf
    singularity_guard: float = 1e-6
    dense_output: bool = True

    def __post_init__(self):
        if not self.rtol > 0 or (self.atol is not None and not self.atol > 0):
            raise BadParam("rtol and atol must be positive")
        if not self.max_step > 0:
            raise BadParam("max_step must be positive")

    @property
    def abs_tol(self) -> float:
        return self.atol if self.atol is not None else self.rtol * 1e-2


@dataclass
class DopriSolution:
    ts: np.ndarray          # accepted nodes, in integration order
    ys: np.ndarray          # (n, dim)
    fs: np.ndarray          # derivatives at the nodes
    stages: list            # stage matrices K (7, dim) per step
    n_rejected: int = 0

    def dense(self, t: float) -> np.ndarray:
        """Shampine quartic continuous extension on the step containing ``t``."""
        ts = self.ts
        forward = ts[-1] >= ts[0]
        key = ts if forward else ts[::-1]
        i = int(np.searchsorted(key, t) - 1)
        i = min(max(i, 0), len(ts) - 2)
        if not forward:
            i = len(ts) - 2 - i
        h = ts[i + 1] - ts[i]
        th = (t - ts[i]) / h
        q = self.stages[i].T @ _P
        return self.ys[i] + h * (q @ np.array([th, th ** 2, th ** 3, th ** 4]))


def dopri5(fun: Callable, t0: float, y0, t1: float, rtol: float, atol: float,
           max_step: float = math.inf, check: Callable | None = None) -> DopriSolution:
    """Integrate y' = fun(t, y) from t0 to t1 with error-per-unit-step control.

    ``check(t, y)`` may raise to stop integration (e.g. a halfspace guard).
    Raises :class:`StepFailure` when the step underflows or the state blows up.
    """
    y = np.atleast_1d(np.asarray(y0, dtype=float))
    length = abs(t1 - t0)
    if length == 0:
        raise BadParam("empty integration interval")
    d = 1.0 if t1 > t0 else -1.0
    f = np.asarray(fun(t0, y), dtype=float)
    scale0 = atol + rtol * np.abs(y)
    d0, d1 = np.sqrt(np.mean((y / scale0) ** 2)), np.sqrt(np.mean((f / scale0) ** 2))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, 1e-2 * length, max_step)
    t = t0
    ts, ys, fs, stages = [t], [y], [f], []
    rejected = 0
    h_min = MIN_STEP_FRACTION * max(length, abs(t0))
    while d * (t1 - t) > 0:
        if len(stages) > MAX_STEPS:
            raise StepFailure(f"more than {MAX_STEPS} steps", x=t, step=h)
        h = min(h, max_step, abs(t1 - t))
        last = h == abs(t1 - t)
        K = np.empty((7, y.size))
        K[0] = f
        for s in range(1, 6):
            K[s] = fun(t + d * _C[s] * h, y + d * h * (_A[s, :s] @ K[:s]))
        y_new = y + d * h * (_B @ K[:6])
        t_new = t1 if last else t + d * h
        if not np.all(np.isfinite(y_new)) or np.max(np.abs(y_new)) > BLOWUP:
            err_norm = math.inf
        else:
            f_new = np.asarray(fun(t_new, y_new), dtype=float)
            K[6] = f_new
            err = h * (K.T @ _E)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean((err / scale) ** 2))) * length / h
            if not math.isfinite(err_norm):
                err_norm = math.inf
        if err_norm <= 1:
            if check is not None:
                check(t_new, y_new)
            t, y, f = t_new, y_new, f_new
            ts.append(t)
            ys.append(y)
            fs.append(f)
            stages.append(K)
            h *= 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** -0.25)
        else:
            rejected += 1
            h *= 0.2 if not math.isfinite(err_norm) else max(0.2, 0.9 * err_norm ** -0.25)
            if h < h_min:
                raise StepFailure(
                    f"step size underflow at x={t:.10g} (h={h:.3g}); the solution "
                    f"is likely blowing up", x=t, step=h)
    return DopriSolution(np.array(ts), np.array(ys), np.array(fs), stages, rejected)


# --- tabulated profiles ---------------------------------------------------


class TabulatedProfile(Profile):
    """Profile y(s) solving y'' = rhs(s, y, y') from a DOPRI5 run.

    Value and first derivative come from a C^2 quintic Hermite interpolant
    through the nodes (value, slope and rhs at each node). The second
    derivative is the right-hand side at the interpolated state, and the
    third is the derivative of the right-hand side along the solution,
    taken with a complex step (``rhs`` must accept complex arguments).
    ``error_bound`` records the largest gap between the Hermite interpolant
    and the integrator's own continuous extension at step midpoints.
    """

    kind = ProfileKind.TABULATED

    def __init__(self, sol: DopriSolution, rhs: Callable, params=None, name="tabulated"):
        order = np.argsort(sol.ts)
        xs, ys = sol.ts[order], sol.ys[order]
        super().__init__(Interval(xs[0], xs[-1], closed=True), params, name)
        self.rhs = rhs
        self.nodes = xs
        d2 = np.array([rhs(x, y[0], y[1]) for x, y in zip(xs, ys)])
        self.spline = BPoly.from_derivatives(xs, np.column_stack([ys[:, 0], ys[:, 1], d2]))
        self._d1 = self.spline.derivative(1)
        self._d2 = self.spline.derivative(2)
        mids = 0.5 * (sol.ts[1:] + sol.ts[:-1])
        gaps = [abs(float(self.spline(m)) - sol.dense(m)[0]) for m in mids]
        self.error_bound = float(max(gaps)) if gaps else 0.0
        self.n_steps = len(sol.stages)

    def _jet(self, s, order):
        v, p = float(self.spline(s)), float(self._d1(s))
        a = float(np.real(self.rhs(s, v, p)))
        d3 = None
        if order >= 3:
            h = 1e-20
            d3 = float(np.imag(self.rhs(s + 1j * h, v + 1j * h * p, p + 1j * h * a)) / h)
        return ScalarJet(v, p, a, d3)

    def interpolant_jet(self, s: float) -> ScalarJet:
        """Jet taken purely from the interpolant, without consulting the ODE."""
        if s not in self.domain:
            from .errors import DomainError
            raise DomainError(f"{self.name}: s={s!r} outside {self.domain}")
        return ScalarJet(float(self.spline(s)), float(self._d1(s)), float(self._d2(s)), None)

    def interpolant_view(self) -> "InterpolantView":
        return InterpolantView(self)

    def defect(self, samples: int = 2001) -> float:
        """max |y''_interp - rhs(s, y_interp, y'_interp)| on a uniform sample."""
        xs = self.domain.linspace(samples)
        v, p, a = self.spline(xs), self._d1(xs), self._d2(xs)
        r = np.array([self.rhs(x, vi, pi) for x, vi, pi in zip(xs, v, p)], dtype=float)
        return float(np.max(np.abs(a - r)))


class InterpolantView(Profile):
    """A tabulated profile seen only through its interpolant (d2 included)."""

    kind = ProfileKind.TABULATED
    max_order = 2

    def __init__(self, base: TabulatedProfile):
        super().__init__(base.domain, base.params, base.name + "[interp]")
        self.base = base

    def _jet(self, s, order):
        return self.base.interpolant_jet(s)


def solve_second_order(rhs: Callable, s0: float, y0: float, yp0: float, s_end: float,
                       cfg: OdeSolveConfig, check: Callable | None = None,
                       params=None, name="tabulated") -> TabulatedProfile:
    """Integrate y'' = rhs(s, y, y') and return the tabulated profile."""
    def fun(s, state):
        return np.array([state[1], rhs(s, state[0], state[1])])

    sol = dopri5(fun, s0, [y0, yp0], s_end, cfg.rtol, cfg.abs_tol, cfg.max_step, check)
    return TabulatedProfile(sol, rhs, params, name)


# --- the three ODE families -----------------------------------------------


def _check_abel_interval(alpha, x0, x_end, guard):
    if alpha == 0:
        raise BadParam("alpha must be nonzero (alpha != 0)")
    if x0 == x_end:
        raise BadParam("x0 and x_end must differ")
    lo, hi = min(x0, x_end), max(x0, x_end)
    if lo <= 0 <= hi or min(abs(lo), abs(hi)) < guard:
        raise BadParam(f"interval [{lo:g}, {hi:g}] must stay at least {guard:g} away "
                       f"from the pole at x = 0")


def abel_rhs_thm1(alpha: float, c5: float):
    """f'' for z = f(x) + c4 + c5 y under the metric connection, u = e_x."""
    k = 1 + c5 * c5

    def rhs(x, f, u):
        return -alpha * u ** 3 / (k * x) + 2 * u * u / k - alpha * u / x + 2
    return rhs


def abel_rhs_thm2(alpha: float, c5: float):
    """f'' for y = f(x) + c4 + c5 z under the metric connection, u = e_x."""
    k = 1 + c5 * c5

    def rhs(x, f, u):
        return -alpha * u ** 3 / (k * x) - 2 * c5 * u * u / k - alpha * u / x - 2 * c5
    return rhs


def autonomous_rhs_thm3(alpha: float, c1: float):
    """g'' for x = c1 + g(z) under the metric connection, u = e_x."""
    def rhs(z, g, p):
        return (alpha / (c1 + g) - 2 * p) * (1 + p * p)
    return rhs


def _abel(rhs, alpha, x0, u0, x_end, cfg, params, name):
    cfg = cfg or OdeSolveConfig()
    _check_abel_interval(alpha, x0, x_end, cfg.singularity_guard)
    return solve_second_order(rhs, x0, 0.0, u0, x_end, cfg, params=params, name=name)


def solve_abel_thm1(alpha: float, c5: float, x0: float, u0: float, x_end: float,
                    cfg: OdeSolveConfig | None = None) -> TabulatedProfile:
    """f with f(x0) = 0, f'(x0) = u0, the slope u solving the Abel equation."""
    params = {"alpha": alpha, "c5": c5, "x0": x0, "u0": u0, "x_end": x_end}
    return _abel(abel_rhs_thm1(alpha, c5), alpha, x0, u0, x_end, cfg, params, "abel_thm1")


def solve_abel_thm2(alpha: float, c5: float, x0: float, u0: float, x_end: float,
                    cfg: OdeSolveConfig | None = None) -> TabulatedProfile:
    params = {"alpha": alpha, "c5": c5, "x0": x0, "u0": u0, "x_end": x_end}
    return _abel(abel_rhs_thm2(alpha, c5), alpha, x0, u0, x_end, cfg, params, "abel_thm2")


def solve_thm3_autonomous(alpha: float, c1: float, z0: float, g0: float, gp0: float,
                          z_end: float, cfg: OdeSolveConfig | None = None) -> TabulatedProfile:
    """g with g(z0) = g0, g'(z0) = gp0; c1 + g must stay positive."""
    cfg = cfg or OdeSolveConfig()
    if alpha == 0:
        raise BadParam("alpha must be nonzero (alpha != 0)")
    if z0 == z_end:
        raise BadParam("z0 and z_end must differ")
    if not c1 + g0 > 0:
        raise HalfspaceViolation(f"c1 + g0 = {c1 + g0:g} must be positive")

    def check(z, state):
        if not c1 + state[0] > cfg.singularity_guard:
            raise HalfspaceViolation(
                f"c1 + g reached {c1 + state[0]:.3g} at z={z:.6g}; surface leaves x > 0")

    params = {"alpha": alpha, "c1": c1, "z0": z0, "g0": g0, "gp0": gp0, "z_end": z_end}
    prof = solve_second_order(autonomous_rhs_thm3(alpha, c1), z0, g0, gp0, z_end, cfg,
                              check, params, "thm3_autonomous")
    curv = np.abs(prof._d2(prof.nodes))
    if np.max(curv) < 1e-12:
        warnings.warn("g'' vanishes along the whole solution (excluded flat case)",
                      FlatSolution, stacklevel=2)
    return prof
