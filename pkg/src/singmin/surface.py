"""Translation surfaces z=f(x)+g(y), y=f(x)+g(z), x=f(y)+g(z) and their jets."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, DomainError
from .jets import Interval, Profile, ScalarJet, eval_jet, fd_jet

DEFAULT_MARGIN = 1e-9
_E = np.eye(3)


def cross(a, b) -> np.ndarray:
    """3-vector cross product without numpy's axis handling overhead."""
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


class SurfaceType(enum.Enum):
    """Which coordinate is the graph height; the other two are parameters."""

    Z = "z"  # z = f(x) + g(y), parameters (x, y)
    Y = "y"  # y = f(x) + g(z), parameters (x, z)
    X = "x"  # x = f(y) + g(z), parameters (y, z)

    @property
    def axes(self) -> tuple[int, int, int]:
        """Coordinate indices of (first parameter, second parameter, height)."""
        return {"z": (0, 1, 2), "y": (0, 2, 1), "x": (1, 2, 0)}[self.value]

    @property
    def parameter_names(self) -> tuple[str, str]:
        names = "xyz"
        i, j, _ = self.axes
        return names[i], names[j]


@dataclass(frozen=True)
class TranslationSurface:
    """Graph-type translation surface over a parameter rectangle.

    ``domain`` is the sampling rectangle used by meshes and sweeps. The
    profiles' own domains are the validity limits; evaluation anywhere
    outside them raises :class:`DomainError`.
    """

    stype: SurfaceType
    f: Profile
    g: Profile
    domain: tuple[Interval, Interval]
    name: str = ""

    @classmethod
    def build(cls, stype, f, g, domain=None, margin=DEFAULT_MARGIN, name=""):
        """Construct with ``domain`` (or the profiles' domains) shrunk by ``margin``.

        A requested rectangle reaching beyond a profile's validity interval
        is rejected rather than clipped.
        """
        stype = SurfaceType(stype)
        if domain is None:
            domain = (f.domain, g.domain)
        rect = []
        for prof, iv in zip((f, g), domain):
            if not isinstance(iv, Interval):
                iv = Interval(*iv)
            if iv.lo < prof.domain.lo or iv.hi > prof.domain.hi:
                raise DomainError(f"requested {iv} exceeds validity {prof.domain} of {prof.name}")
            iv = Interval(iv.lo, iv.hi).shrink(margin)
            if not iv.finite:
                raise DomainError(f"sampling interval {iv} must be bounded")
            rect.append(iv)
        return cls(stype, f, g, tuple(rect), name)

    def position(self, s1: float, s2: float) -> np.ndarray:
        i, j, k = self.stype.axes
        p = np.empty(3)
        p[i], p[j] = s1, s2
        p[k] = eval_jet(self.f, s1, 0).value + eval_jet(self.g, s2, 0).value
        return p


@dataclass(frozen=True)
class SurfaceJet:
    sigma: np.ndarray
    s1: np.ndarray          # first partials
    s2: np.ndarray
    s11: np.ndarray         # second partials
    s12: np.ndarray
    s22: np.ndarray
    xi: np.ndarray          # unit normal, sigma_1 x sigma_2 normalized
    g11: float
    g12: float
    g22: float
    W: float                # sqrt(det g)
    stype: SurfaceType | None = None

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 ** 2


def jet_from_profiles(stype: SurfaceType, s1: float, s2: float,
                      fj: ScalarJet, gj: ScalarJet) -> SurfaceJet:
    i, j, k = stype.axes
    e = _E
    sigma = np.empty(3)
    sigma[i], sigma[j], sigma[k] = s1, s2, fj.value + gj.value
    d1 = e[i] + fj.d1 * e[k]
    d2 = e[j] + gj.d1 * e[k]
    d11 = fj.d2 * e[k]
    d22 = gj.d2 * e[k]
    normal = cross(d1, d2)
    g11, g12, g22 = d1 @ d1, d1 @ d2, d2 @ d2
    det = g11 * g22 - g12 * g12
    if not np.isfinite(det) or det <= 0:
        raise DegenerateMetric(f"det g = {det!r} at ({s1}, {s2})")
    W = float(np.sqrt(det))
    return SurfaceJet(sigma, d1, d2, d11, np.zeros(3), d22, normal / math.sqrt(normal @ normal),
                      float(g11), float(g12), float(g22), W, stype)


def surface_jet(surface: TranslationSurface, s1: float, s2: float,
                backend: str = "analytic") -> SurfaceJet:
    """Position, partials, metric and unit normal at a parameter point.

    ``backend="fd"`` replaces the profile jets by :func:`fd_jet` estimates.
    """
    if backend == "analytic":
        fj, gj = eval_jet(surface.f, s1, 2), eval_jet(surface.g, s2, 2)
    elif backend == "fd":
        fj, gj = fd_jet(surface.f, s1), fd_jet(surface.g, s2)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return jet_from_profiles(surface.stype, s1, s2, fj, gj)


def grid_jets(surface: TranslationSurface, u: np.ndarray, v: np.ndarray):
    """Yield ``(i, j, jet_or_exception)`` over a tensor grid.

    Profiles are evaluated once per grid line, which matters for the
    quadrature- and ODE-backed families.
    """
    fjs = [_try(eval_jet, surface.f, a, 2) for a in u]
    gjs = [_try(eval_jet, surface.g, b, 2) for b in v]
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            fj, gj = fjs[i], gjs[j]
            if isinstance(fj, Exception):
                yield i, j, fj
            elif isinstance(gj, Exception):
                yield i, j, gj
            else:
                yield i, j, _try(jet_from_profiles, surface.stype, a, b, fj, gj)


def _try(fn, *args):
    try:
        return fn(*args)
    except (DomainError, DegenerateMetric, ArithmeticError, ValueError) as exc:
        return exc


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray    # (N, 3)
    triangles: np.ndarray   # (M, 3), zero-based
    normals: np.ndarray     # (N, 3)
    params: np.ndarray      # (N, 2)


def make_mesh(surface: TranslationSurface, nu: int, nv: int,
              region: tuple[Interval, Interval] | None = None) -> Mesh:
    """Triangulate an ``nu x nv`` parameter grid (edges of the region included).

    Vertex ``i*nv + j`` sits at (u_i, v_j); each grid cell is split into two
    triangles whose winding agrees with the unit normal.
    """
    if nu < 2 or nv < 2:
        raise ValueError("nu and nv must be at least 2")
    ru, rv = region or surface.domain
    u = Interval(*ru[:2]).linspace(nu) if not isinstance(ru, Interval) else ru.linspace(nu)
    v = Interval(*rv[:2]).linspace(nv) if not isinstance(rv, Interval) else rv.linspace(nv)
    verts = np.empty((nu * nv, 3))
    normals = np.empty((nu * nv, 3))
    params = np.empty((nu * nv, 2))
    for i, j, jet in grid_jets(surface, u, v):
        if isinstance(jet, Exception):
            raise jet
        k = i * nv + j
        verts[k], normals[k], params[k] = jet.sigma, jet.xi, (u[i], v[j])
    tris = []
    for i in range(nu - 1):
        for j in range(nv - 1):
            a, b, c, d = i * nv + j, (i + 1) * nv + j, (i + 1) * nv + j + 1, i * nv + j + 1
            tris.append((a, b, c))
            tris.append((a, c, d))
    return Mesh(verts, np.array(tris, dtype=np.int64), normals, params)
