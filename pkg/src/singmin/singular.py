"""Singular-minimality residuals for planar curves and translation surfaces,
and the weighted area functional E = integral of <sigma,u>^alpha dA."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .connections import ConnectionKind, mean_curvature
from .errors import BadParam, DegenerateCurve, HalfspaceViolation, UnsupportedConnection
from .jets import Profile, eval_jet
from .surface import SurfaceJet, TranslationSurface, cross, grid_jets, surface_jet

ALPHA_FLOOR = 1e-15
AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


def axis(tag: str, dim: int = 3) -> np.ndarray:
    v = np.array(AXES[tag.lower()])
    return v if dim == 3 else v[:dim]


@dataclass(frozen=True)
class SingularConfig:
    alpha: float
    u: np.ndarray = field(default_factory=lambda: axis("x"))
    connection: ConnectionKind = ConnectionKind.LEVI_CIVITA

    def __post_init__(self):
        a = float(self.alpha)
        if not math.isfinite(a) or abs(a) < ALPHA_FLOOR:
            raise BadParam(f"alpha must be nonzero (alpha != 0), got {self.alpha!r}")
        u = axis(self.u) if isinstance(self.u, str) else np.asarray(self.u, dtype=float)
        if u.shape != (3,) or abs(np.linalg.norm(u) - 1) > 1e-12:
            raise BadParam(f"u must be a unit 3-vector, got {self.u!r}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "connection", ConnectionKind.parse(self.connection))


@dataclass(frozen=True)
class ResidualReport:
    residual: float
    lhs: float
    rhs: float
    height: float


# --- curves ---------------------------------------------------------------


@dataclass(frozen=True)
class CurveJet:
    point: np.ndarray
    velocity: np.ndarray
    accel: np.ndarray


def graph_curve_jet(profile: Profile, s: float) -> CurveJet:
    """Jet of the planar graph s -> (s, f(s))."""
    j = eval_jet(profile, s, 2)
    return CurveJet(np.array([s, j.value]), np.array([1.0, j.d1]), np.array([0.0, j.d2]))


def curve_catenary_residual(curve: CurveJet, u, alpha: float) -> float:
    """kappa - alpha <n,u>/<gamma,u>, with n the left-rotated unit tangent."""
    u = np.asarray(u, dtype=float)
    v, a = curve.velocity, curve.accel
    speed = float(np.hypot(*v))
    if not speed > 0:
        raise DegenerateCurve("curve has zero speed")
    height = float(curve.point @ u)
    if not height > 0:
        raise HalfspaceViolation(f"<gamma,u> = {height!r} is not positive")
    kappa = (v[0] * a[1] - v[1] * a[0]) / speed ** 3
    n = np.array([-v[1], v[0]]) / speed
    return float(kappa - alpha * (n @ u) / height)


# --- surfaces -------------------------------------------------------------


def residual_from_jet(jet: SurfaceJet, cfg: SingularConfig) -> ResidualReport:
    height = float(jet.sigma @ cfg.u)
    if not height > 0:
        raise HalfspaceViolation(f"<sigma,u> = {height!r} is not positive at {jet.sigma}")
    lhs = 2 * mean_curvature(cfg.connection, jet).H
    rhs = cfg.alpha * float(jet.xi @ cfg.u) / height
    return ResidualReport(lhs - rhs, lhs, rhs, height)


def surface_residual(surface: TranslationSurface, cfg: SingularConfig,
                     s1: float, s2: float) -> ResidualReport:
    """2H - alpha <xi,u>/<sigma,u> for the configured connection."""
    return residual_from_jet(surface_jet(surface, s1, s2), cfg)


# --- energy ---------------------------------------------------------------


def _gauss_rect(region, order):
    (a, b), (c, d) = ((iv.lo, iv.hi) if hasattr(iv, "lo") else iv for iv in region)
    x, w = np.polynomial.legendre.leggauss(order)
    s1 = 0.5 * (b - a) * x + 0.5 * (b + a)
    s2 = 0.5 * (d - c) * x + 0.5 * (d + c)
    return s1, s2, 0.5 * (b - a) * w, 0.5 * (d - c) * w


def _weighted_area(points, normal_lengths, u, alpha, where):
    height = points @ u
    if np.any(height <= 0):
        raise HalfspaceViolation(f"<sigma,u> <= 0 somewhere on {where}")
    return height ** alpha * normal_lengths


def potential_energy(surface: TranslationSurface, u, alpha: float, region=None,
                     quad_order: int = 20) -> float:
    """Tensor Gauss-Legendre approximation of the integral of <sigma,u>^alpha W."""
    u = np.asarray(u, dtype=float)
    s1, s2, w1, w2 = _gauss_rect(region or surface.domain, quad_order)
    total = 0.0
    for a, wa in zip(s1, w1):
        jets = [surface_jet(surface, a, b) for b in s2]
        pts = np.array([j.sigma for j in jets])
        dens = _weighted_area(pts, np.array([j.W for j in jets]), u, alpha, "region")
        total += wa * float(dens @ w2)
    return total


@dataclass(frozen=True)
class Bump:
    """(1-t1^2)^4 (1-t2^2)^4 with t_k = (s_k - center_k)/radius_k, zero outside."""

    center: tuple[float, float]
    radius: tuple[float, float]
    amplitude: float = 1.0

    def _t(self, s1, s2):
        return ((s1 - self.center[0]) / self.radius[0], (s2 - self.center[1]) / self.radius[1])

    def value_and_grad(self, s1: float, s2: float):
        t1, t2 = self._t(s1, s2)
        if abs(t1) >= 1 or abs(t2) >= 1:
            return 0.0, 0.0, 0.0
        p1, p2 = 1 - t1 * t1, 1 - t2 * t2
        v = self.amplitude * p1 ** 4 * p2 ** 4
        d1 = self.amplitude * -8 * t1 * p1 ** 3 * p2 ** 4 / self.radius[0]
        d2 = self.amplitude * -8 * t2 * p2 ** 3 * p1 ** 4 / self.radius[1]
        return v, d1, d2

    def support(self):
        return ((self.center[0] - self.radius[0], self.center[0] + self.radius[0]),
                (self.center[1] - self.radius[1], self.center[1] + self.radius[1]))


def _normal_derivatives(jet: SurfaceJet):
    n = cross(jet.s1, jet.s2)
    norm = np.linalg.norm(n)
    out = []
    for a, b in ((jet.s11, jet.s12), (jet.s12, jet.s22)):
        dn = cross(a, jet.s2) + cross(jet.s1, b)
        out.append((dn - jet.xi * (jet.xi @ dn)) / norm)
    return out


def _support_jets(surface, bump, quad_order):
    s1, s2, w1, w2 = _gauss_rect(bump.support(), quad_order)
    jets = []
    for i, j, jet in grid_jets(surface, s1, s2):
        if isinstance(jet, Exception):
            raise jet
        jets.append(jet)
    return s1, s2, np.outer(w1, w2).ravel(), jets


def perturbed_energy(surface: TranslationSurface, u, alpha: float, bump: Bump,
                     eps: float, quad_order: int = 40, _cache=None) -> float:
    """Energy of sigma + eps*b*xi restricted to the bump's support."""
    u = np.asarray(u, dtype=float)
    s1, s2, weights, jets = _cache or _support_jets(surface, bump, quad_order)
    pts, lens = [], []
    for k, jet in enumerate(jets):
        a, b = s1[k // len(s2)], s2[k % len(s2)]
        v, b1, b2 = bump.value_and_grad(a, b)
        xi1, xi2 = _normal_derivatives(jet)
        p1 = jet.s1 + eps * (b1 * jet.xi + v * xi1)
        p2 = jet.s2 + eps * (b2 * jet.xi + v * xi2)
        pts.append(jet.sigma + eps * v * jet.xi)
        lens.append(np.linalg.norm(cross(p1, p2)))
    dens = _weighted_area(np.array(pts), np.array(lens), u, alpha, "bump support")
    return float(dens @ weights)


def first_variation(surface: TranslationSurface, cfg: SingularConfig, bump: Bump,
                    eps: float = 1e-3, quad_order: int = 40) -> float:
    """Symmetric difference [E(+eps) - E(-eps)]/(2 eps); bias is O(eps^2)."""
    if cfg.connection is not ConnectionKind.LEVI_CIVITA:
        raise UnsupportedConnection(
            "the weighted-area variation is only tied to the Levi-Civita equation")
    if bump.amplitude == 0:
        return 0.0
    cache = _support_jets(surface, bump, quad_order)
    plus = perturbed_energy(surface, cfg.u, cfg.alpha, bump, eps, _cache=cache)
    minus = perturbed_energy(surface, cfg.u, cfg.alpha, bump, -eps, _cache=cache)
    return (plus - minus) / (2 * eps)
