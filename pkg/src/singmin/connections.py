"""Levi-Civita and the two semi-symmetric connections built on the one-form <., e_z>.

``covariant_second`` is the generic pipeline: it applies the connection
rule to the surface's second partials, projects on the unit normal and
assembles H with the full metric (cross terms included).
``mean_curvature_closed_form`` evaluates per-type formulas written directly
in terms of f, g and their derivatives, as an independent check.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DegenerateMetric, UnsupportedPair
from .jets import eval_jet
from .surface import SurfaceJet, SurfaceType, TranslationSurface

EZ = np.array([0.0, 0.0, 1.0])


class ConnectionKind(enum.Enum):
    LEVI_CIVITA = "levi"
    SEMI_SYM_METRIC = "nabla"
    SEMI_SYM_NON_METRIC = "d"

    @classmethod
    def parse(cls, tag: "str | ConnectionKind") -> "ConnectionKind":
        if isinstance(tag, cls):
            return tag
        aliases = {"levi": "levi", "levi-civita": "levi", "lc": "levi",
                   "nabla": "nabla", "metric": "nabla",
                   "d": "d", "non-metric": "d", "nonmetric": "d"}
        try:
            return cls(aliases[str(tag).strip().lower()])
        except KeyError:
            raise ValueError(f"unknown connection {tag!r}; use levi, nabla or d") from None


def pi(v) -> float:
    """The one-form v -> <v, e_z>."""
    return float(v[2])


def connection_term(kind: ConnectionKind, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Difference (conn)_X Y - (Levi-Civita)_X Y at a point; tensorial in X, Y."""
    if kind is ConnectionKind.LEVI_CIVITA:
        return np.zeros(3)
    extra = pi(y) * np.asarray(x, dtype=float)
    if kind is ConnectionKind.SEMI_SYM_METRIC:
        extra = extra - float(np.dot(x, y)) * EZ
    return extra


def covariant_second(kind: ConnectionKind, jet: SurfaceJet) -> np.ndarray:
    """Array ``out[i, j] = conn_{sigma_i} sigma_j`` of shape (2, 2, 3)."""
    kind = ConnectionKind.parse(kind)
    out = np.empty((2, 2, 3))
    out[0, 0], out[0, 1], out[1, 0], out[1, 1] = jet.s11, jet.s12, jet.s12, jet.s22
    if kind is ConnectionKind.LEVI_CIVITA:
        return out
    first = (jet.s1, jet.s2)
    for i in range(2):
        for j in range(2):
            out[i, j] += connection_term(kind, first[i], first[j])
    return out


@dataclass(frozen=True)
class CurvatureReport:
    h11: float
    h12: float
    h21: float
    h22: float
    H: float
    H_levi: float
    has_closed_form: bool = True


def _assemble_H(h, jet: SurfaceJet) -> float:
    det = jet.g11 * jet.g22 - jet.g12 ** 2
    if not det > 0:
        raise DegenerateMetric(f"det g = {det!r}")
    return (jet.g22 * h[0][0] - jet.g12 * (h[0][1] + h[1][0]) + jet.g11 * h[1][1]) / (2 * det)


def mean_curvature(kind: ConnectionKind, jet: SurfaceJet) -> CurvatureReport:
    kind = ConnectionKind.parse(kind)
    h = covariant_second(kind, jet) @ jet.xi
    if kind is ConnectionKind.LEVI_CIVITA:
        h[1, 0] = h[0, 1]
        H = H_levi = _assemble_H(h, jet)
    else:
        hl = covariant_second(ConnectionKind.LEVI_CIVITA, jet) @ jet.xi
        H, H_levi = _assemble_H(h, jet), _assemble_H(hl, jet)
    closed = not (kind is ConnectionKind.SEMI_SYM_NON_METRIC and jet.stype is SurfaceType.X)
    return CurvatureReport(float(h[0, 0]), float(h[0, 1]), float(h[1, 0]), float(h[1, 1]),
                           float(H), float(H_levi), closed)


def mean_curvature_closed_form(surface: TranslationSurface, kind: ConnectionKind,
                               s1: float, s2: float) -> float:
    """Mean curvature straight from f, g jets, per surface type.

    With A = (1+g'^2) f'' + (1+f'^2) g'' and W^2 = 1 + f'^2 + g'^2.
    Type X with the non-metric connection has no closed form here.
    """
    kind = ConnectionKind.parse(kind)
    st = surface.stype
    if st is SurfaceType.X and kind is ConnectionKind.SEMI_SYM_NON_METRIC:
        raise UnsupportedPair("no closed-form mean curvature for type X with D")
    f = eval_jet(surface.f, s1, 2)
    g = eval_jet(surface.g, s2, 2)
    fp, fpp, gp, gpp = f.d1, f.d2, g.d1, g.d2
    A = (1 + gp * gp) * fpp + (1 + fp * fp) * gpp
    W2 = 1 + fp * fp + gp * gp
    W3 = W2 * math.sqrt(W2)
    if st is SurfaceType.Z:
        if kind is ConnectionKind.SEMI_SYM_METRIC:
            return (A - 2 * W2) / (2 * W3)
        return A / (2 * W3)
    if st is SurfaceType.Y:
        if kind is ConnectionKind.SEMI_SYM_METRIC:
            return -(A + 2 * W2 * gp) / (2 * W3)
        return -A / (2 * W3)
    if kind is ConnectionKind.SEMI_SYM_METRIC:
        return (A + 2 * W2 * gp) / (2 * W3)
    return A / (2 * W3)


# --- ambient vector fields ------------------------------------------------

Field = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def _as_callable(field: Field) -> Callable[[np.ndarray], np.ndarray]:
    if callable(field):
        return lambda p: np.asarray(field(p), dtype=float)
    const = np.asarray(field, dtype=float)
    return lambda p: const


def _jacobian(field, p: np.ndarray, h: float = 1e-5) -> np.ndarray:
    cols = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        cols.append((field(p + e) - field(p - e)) / (2 * h))
    return np.column_stack(cols)


def covariant_derivative(kind: ConnectionKind, X: Field, Y: Field, p) -> np.ndarray:
    """conn_X Y at ``p``; the flat part uses a central-difference Jacobian of Y."""
    kind = ConnectionKind.parse(kind)
    p = np.asarray(p, dtype=float)
    Xf, Yf = _as_callable(X), _as_callable(Y)
    x, y = Xf(p), Yf(p)
    return _jacobian(Yf, p) @ x + connection_term(kind, x, y)


def torsion(kind: ConnectionKind, X: Field, Y: Field, p) -> np.ndarray:
    """T(X, Y) = conn_X Y - conn_Y X - [X, Y]."""
    p = np.asarray(p, dtype=float)
    Xf, Yf = _as_callable(X), _as_callable(Y)
    x, y = Xf(p), Yf(p)
    bracket = _jacobian(Yf, p) @ x - _jacobian(Xf, p) @ y
    return covariant_derivative(kind, Xf, Yf, p) - covariant_derivative(kind, Yf, Xf, p) - bracket


def metricity_defect(kind: ConnectionKind, X, Y, Z, p=None) -> float:
    """X<Y,Z> - <conn_X Y, Z> - <Y, conn_X Z> for constant fields."""
    kind = ConnectionKind.parse(kind)
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    return -float(connection_term(kind, X, Y) @ Z) - float(Y @ connection_term(kind, X, Z))
