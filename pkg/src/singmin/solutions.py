"""Constructors for every solution family and the catalog that drives the CLI."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .connections import ConnectionKind
from .errors import BadParam, ConstraintError
from .jets import (ConstantProfile, Interval, LinearProfile, Profile, arctan_cylinder_profile,
                   catenary_profile, default_steps, eval_jet, logcos_profile)
from .ode import OdeSolveConfig, solve_abel_thm1, solve_abel_thm2, solve_thm3_autonomous
from .quadrature import (InverseQuadratureProfile, PowerKernel, QuadratureProfile,
                         ReciprocalPowerKernel)
from .surface import SurfaceType, TranslationSurface

__all__ = [
    "Family", "FamilyInfo", "CATALOG", "SolutionSpec", "make_catenary", "make_thm1_cylinder",
    "make_thm2_cylinder", "make_quadrature_profile", "emden_fowler_residual",
    "solve_abel_thm1", "solve_abel_thm2", "solve_thm3_autonomous",
]


class Family(enum.Enum):
    CATENARY = "catenary"
    THM1_LOGCOS = "thm1_logcos"
    THM1_ABEL = "abel_thm1"
    THM2_ARCTAN = "thm2_arctan"
    THM2_ABEL = "abel_thm2"
    THM3_AUTONOMOUS = "thm3_autonomous"
    THM3_EMDEN_FOWLER = "thm3_emden_fowler"
    THM4_QUAD = "thm4_quad"
    THM5_QUAD = "thm5_quad"
    THM6_QUAD = "thm6_quad"


# --- closed forms ---------------------------------------------------------


def make_catenary(lam: float, mu: float = 0.0) -> Profile:
    if lam == 0:
        raise BadParam("catenary needs lambda != 0 (λ ≠ 0)")
    return catenary_profile(lam, mu)


def make_thm1_cylinder(c1: float = 0.0, c2: float = 0.0, c3: float = 0.0,
                       region=None) -> TranslationSurface:
    """z = c1 + g(y), g = -1/2 ln|cos(2y + c2)| + c3 on the branch around y = -c2/2."""
    g = logcos_profile(-0.5, 2.0, c2, c3)
    f = ConstantProfile(c1)
    region = region or ((0.5, 2.5), _inner(g.domain, 0.445))
    return TranslationSurface.build(SurfaceType.Z, f, g, region, name="thm1_logcos")


def make_thm2_cylinder(c2: float, c3: float = 0.0, sign: int = 1, c1: float = 0.0,
                       region=None) -> TranslationSurface:
    """y = c1 + g(z), g = sign/2 arctan(sqrt(e^{4z} - c2^2)/c2) + c3 for z > ln|c2|/2."""
    if c2 == 0:
        raise BadParam("thm2_arctan needs c2 != 0 (c₂ ≠ 0)")
    g = arctan_cylinder_profile(c2, c3, sign)
    lo = g.domain.lo
    region = region or ((0.5, 2.5), (lo + 0.1, lo + 1.5))
    return TranslationSurface.build(SurfaceType.Y, ConstantProfile(c1), g, region,
                                    name="thm2_arctan")


def _inner(iv: Interval, half_width_fraction: float) -> tuple[float, float]:
    mid = 0.5 * (iv.lo + iv.hi)
    r = half_width_fraction * iv.width
    return (mid - r, mid + r)


# --- quadrature families --------------------------------------------------


def make_quadrature_profile(family, params: dict, sign: int = 1,
                            as_printed: bool = False) -> Profile:
    """Profile of a quadrature family.

    thm4_quad / thm5_quad: f(x) = sign |c3| sqrt(1+c2^2) * integral of the kernel
    from its branch point. thm5_quad defaults to the kernel that actually solves
    the type-Y equation (the same kernel as thm4_quad); ``as_printed=True``
    gives x^a (1 - c3^2 x^{2a})^{-1/2} instead.
    thm3_emden_fowler / thm6_quad: inverse profiles of
    s = +-integral of [c w^{2 alpha} + d]^{-1/2} dw with w the height.
    """
    fam = Family(family)
    p = dict(params)
    alpha = float(p.get("alpha", 1.0))
    if alpha == 0:
        raise BadParam("alpha must be nonzero (α ≠ 0)")
    sgn = 1 if sign >= 0 else -1
    if fam in (Family.THM4_QUAD, Family.THM5_QUAD):
        c2, c3 = float(p.get("c2", 0.0)), float(p.get("c3", 1.0))
        if c3 == 0:
            raise BadParam(f"{fam.value} needs c3 != 0 (c₃ ≠ 0)")
        scale = sgn * abs(c3) * math.sqrt(1 + c2 * c2)
        if fam is Family.THM5_QUAD and as_printed:
            kernel = ReciprocalPowerKernel(alpha, c3)
        else:
            kernel = PowerKernel(1.0, -c3 * c3, 2 * alpha)
        name = fam.value + ("[printed]" if as_printed and fam is Family.THM5_QUAD else "")
        return QuadratureProfile(kernel, scale, {**p, "sign": sgn}, name=name)
    if fam is Family.THM6_QUAD:
        c1, c2 = float(p.get("c1", 0.0)), float(p.get("c2", 1.0))
        if c2 == 0:
            raise BadParam("thm6_quad needs c2 != 0 (c₂ ≠ 0)")
        return InverseQuadratureProfile(PowerKernel(c2 * c2, -1.0, 2 * alpha), c1, sgn,
                                        {**p, "sign": sgn}, name="thm6_quad")
    if fam is Family.THM3_EMDEN_FOWLER:
        c2, c3, c4 = float(p.get("c2", 0.0)), float(p.get("c3", 1.0)), float(p.get("c4", -1.0))
        if c3 == 0:
            raise BadParam("thm3_emden_fowler needs c3 != 0 (c₃ ≠ 0)")
        if not -c4 / c3 > 0:
            raise BadParam("thm3_emden_fowler needs -c4/c3 > 0 so the integrand has a "
                           "branch point to anchor the profile")
        return InverseQuadratureProfile(PowerKernel(c3, c4, 2 * alpha), c2, sgn,
                                        {**p, "sign": sgn}, name="thm3_emden_fowler")
    raise BadParam(f"{fam.value} is not a quadrature family")


def emden_fowler_residual(profile: Profile, alpha: float, c: float, g0: float,
                          d: float = -1.0, points=None, derivative: str = "jet",
                          relative: bool = False) -> float:
    """max |f'^2 - c (f+g0)^{2 alpha} - d| over ``points``.

    The default d = -1 is the first integral of f''/(1+f'^2) = alpha/(f+g0).
    ``derivative="fd"`` takes f' from a five-point stencil on values instead
    of the profile's own jet. With ``relative`` each defect is divided by
    1 + |c (f+g0)^{2 alpha}|.
    """
    if derivative not in ("jet", "fd"):
        raise BadParam(f"derivative must be 'jet' or 'fd', got {derivative!r}")
    if points is None:
        span = getattr(profile, "span", profile.domain)
        h = default_steps(max(abs(span.lo), abs(span.hi)))[2]
        points = np.linspace(span.lo + 2 * h, span.hi - 2 * h, 101)
    worst = 0.0
    for s in points:
        if derivative == "jet":
            j = eval_jet(profile, s, 1)
            f, fp = j.value, j.d1
        else:
            h = 0.1 * default_steps(s)[2]
            v = [eval_jet(profile, s + k * h, 0).value for k in (-2, -1, 1, 2)]
            f = eval_jet(profile, s, 0).value
            fp = (8 * (v[2] - v[1]) - (v[3] - v[0])) / (12 * h)
        power = c * (f + g0) ** (2 * alpha)
        defect = abs(fp * fp - power - d)
        worst = max(worst, defect / (1 + abs(power)) if relative else defect)
    return worst


# --- catalog --------------------------------------------------------------


@dataclass(frozen=True)
class FamilyInfo:
    family: Family
    citation: str
    stype: SurfaceType
    connection: ConnectionKind
    defaults: dict
    constraints: tuple[str, ...]
    kind: str                        # closed-form, ode or quadrature
    alpha_is_param: bool = True
    default_alpha: float = 1.0
    default_sign: int = 1

    @property
    def ode(self) -> bool:
        return self.kind == "ode"


def _info(*args, **kw):
    return FamilyInfo(*args, **kw)


CATALOG: dict[Family, FamilyInfo] = {f.family: f for f in [
    _info(Family.CATENARY, "classical catenary, f(s) = cosh(λs+μ)/λ, x = f(y)",
          SurfaceType.X, ConnectionKind.LEVI_CIVITA, {"lambda": 1.0, "mu": 0.0},
          ("λ ≠ 0",), "closed-form", alpha_is_param=False),
    _info(Family.THM1_LOGCOS, "Theorem 1 (item 1): z = c1 - ½ln|cos(2y+c2)| + c3",
          SurfaceType.Z, ConnectionKind.SEMI_SYM_METRIC, {"c1": 0.0, "c2": 0.0, "c3": 0.0},
          (), "closed-form", alpha_is_param=False, default_alpha=2.0),
    _info(Family.THM1_ABEL, "Theorem 1 (item 2): z = f(x) + c4 + c5 y, f' solving an Abel equation",
          SurfaceType.Z, ConnectionKind.SEMI_SYM_METRIC,
          {"alpha": 1.0, "c4": 0.0, "c5": 0.5, "x0": 1.0, "u0": 0.0, "x_end": 3.0},
          ("α ≠ 0", "x-interval excludes 0"), "ode"),
    _info(Family.THM2_ARCTAN, "Theorem 2 (item 1): y = c1 ± ½arctan(√(e^{4z}-c2²)/c2) + c3",
          SurfaceType.Y, ConnectionKind.SEMI_SYM_METRIC, {"c1": 1.0, "c2": 1.0, "c3": 0.0},
          ("c₂ ≠ 0",), "closed-form", alpha_is_param=False),
    _info(Family.THM2_ABEL, "Theorem 2 (item 2): y = f(x) + c4 + c5 z, f' solving an Abel equation",
          SurfaceType.Y, ConnectionKind.SEMI_SYM_METRIC,
          {"alpha": 1.0, "c4": 0.0, "c5": 1.0, "x0": 1.0, "u0": 1.0, "x_end": 3.0},
          ("α ≠ 0", "x-interval excludes 0"), "ode"),
    _info(Family.THM3_AUTONOMOUS, "Theorem 3 (item 1): x = c1 + g(z), g'' = (α/(c1+g) - 2g')(1+g'²)",
          SurfaceType.X, ConnectionKind.SEMI_SYM_METRIC,
          {"alpha": 1.0, "c1": 1.0, "z0": 0.0, "g0": 1.0, "gp0": 0.0, "z_end": 2.0},
          ("α ≠ 0", "c1 + g > 0"), "ode"),
    _info(Family.THM3_EMDEN_FOWLER, "Theorem 3 (item 2): x = f(y) + c2, y = ±∫[c3(f+c2)^{2α}+c4]^{-1/2}df",
          SurfaceType.X, ConnectionKind.SEMI_SYM_METRIC,
          {"alpha": 1.0, "c2": 0.0, "c3": 1.0, "c4": -1.0},
          ("α ≠ 0", "c₃ ≠ 0", "-c4/c3 > 0"), "quadrature"),
    _info(Family.THM4_QUAD, "Theorem 4: z = f(x) + c1 + c2 y, f = ±|c3|√(1+c2²)∫(x^{2α}-c3²)^{-1/2}dx",
          SurfaceType.Z, ConnectionKind.SEMI_SYM_NON_METRIC,
          {"alpha": 1.0, "c1": 0.0, "c2": 0.0, "c3": 1.0},
          ("α ≠ 0", "c₃ ≠ 0"), "quadrature"),
    _info(Family.THM5_QUAD, "Theorem 5: y = f(x) + c1 + c2 z, f = ±|c3|√(1+c2²)∫(x^{2α}-c3²)^{-1/2}dx",
          SurfaceType.Y, ConnectionKind.SEMI_SYM_NON_METRIC,
          {"alpha": 1.0, "c1": 0.0, "c2": 0.0, "c3": 1.0},
          ("α ≠ 0", "c₃ ≠ 0"), "quadrature"),
    _info(Family.THM6_QUAD, "Theorem 6: x = c1 + g(z), z = ±∫[c2²(c1+g)^{2α}-1]^{-1/2}dg",
          SurfaceType.X, ConnectionKind.SEMI_SYM_NON_METRIC,
          {"alpha": 1.0, "c1": 0.0, "c2": 1.0},
          ("α ≠ 0", "c₂ ≠ 0"), "quadrature"),
]}


@dataclass
class SolutionSpec:
    """A family with its parameters, sign branch, optional region and solver settings."""

    family: Family
    params: dict = field(default_factory=dict)
    sign: int = 1
    alpha: float | None = None          # only for families where alpha is not a parameter
    region: tuple | None = None
    ode: OdeSolveConfig = field(default_factory=OdeSolveConfig)

    def __post_init__(self):
        self.family = Family(self.family)
        info = self.info
        unknown = set(self.params) - set(info.defaults)
        if unknown:
            raise ConstraintError(f"{self.family.value}: unknown parameter(s) "
                                  f"{', '.join(sorted(unknown))}; expected {', '.join(info.defaults)}")
        self.params = {**info.defaults, **{k: float(v) for k, v in self.params.items()}}

    @property
    def info(self) -> FamilyInfo:
        return CATALOG[self.family]

    @property
    def effective_alpha(self) -> float:
        if self.info.alpha_is_param:
            return self.params["alpha"]
        return self.info.default_alpha if self.alpha is None else float(self.alpha)

    def validate(self) -> "SolutionSpec":
        """Raise :class:`ConstraintError` on any violated family constraint."""
        p, fam = self.params, self.family
        if self.sign not in (1, -1):
            raise ConstraintError(f"sign must be +1 or -1, got {self.sign}")
        if not all(math.isfinite(v) for v in p.values()):
            raise ConstraintError("parameters must be finite")
        if self.effective_alpha == 0:
            raise ConstraintError("alpha = 0 is excluded (α ≠ 0 is assumed)")
        checks = []
        if fam is Family.CATENARY:
            checks = [(p["lambda"] != 0, "λ ≠ 0 (lambda must be nonzero)")]
        elif fam is Family.THM2_ARCTAN or fam is Family.THM6_QUAD:
            checks = [(p["c2"] != 0, "c₂ ≠ 0 (c2 must be nonzero)")]
        elif fam in (Family.THM4_QUAD, Family.THM5_QUAD):
            checks = [(p["c3"] != 0, "c₃ ≠ 0 (c3 must be nonzero)")]
        elif fam is Family.THM3_EMDEN_FOWLER:
            checks = [(p["c3"] != 0, "c₃ ≠ 0 (c3 must be nonzero)"),
                      (p["c3"] == 0 or -p["c4"] / p["c3"] > 0,
                       "-c4/c3 > 0 (integrand needs a branch point)")]
        elif fam is Family.THM3_AUTONOMOUS:
            checks = [(p["c1"] + p["g0"] > 0, "c1 + g0 > 0 (halfspace x > 0)"),
                      (p["z0"] != p["z_end"], "z0 ≠ z_end")]
        elif fam in (Family.THM1_ABEL, Family.THM2_ABEL):
            lo, hi = sorted((p["x0"], p["x_end"]))
            checks = [(lo != hi, "x0 ≠ x_end"),
                      (lo > 0 or hi < 0, "the x-interval must exclude the pole x = 0")]
        for ok, msg in checks:
            if not ok:
                raise ConstraintError(f"{fam.value}: constraint violated: {msg}")
        return self

    def build(self) -> TranslationSurface:
        """Validate, construct the profiles and return the surface."""
        self.validate()
        p, fam, sgn = self.params, self.family, self.sign
        info = self.info
        if fam is Family.CATENARY:
            f = make_catenary(p["lambda"], p["mu"])
            return self._surface(f, ConstantProfile(0.0), ((-1.5, 1.5), (-1.0, 1.0)))
        if fam is Family.THM1_LOGCOS:
            return make_thm1_cylinder(p["c1"], p["c2"], p["c3"], self.region)
        if fam is Family.THM2_ARCTAN:
            return make_thm2_cylinder(p["c2"], p["c3"], sgn, p["c1"], self.region)
        prof = self.profile()
        if fam in (Family.THM1_ABEL, Family.THM2_ABEL):
            x = prof.domain
            return self._surface(prof, LinearProfile(p["c4"], p["c5"]), ((x.lo, x.hi), (-1.0, 1.0)))
        if fam is Family.THM3_AUTONOMOUS:
            z = prof.domain
            return self._surface(ConstantProfile(p["c1"]), prof, ((-1.0, 1.0), (z.lo, z.hi)))
        if fam is Family.THM3_EMDEN_FOWLER:
            return self._surface(prof, ConstantProfile(p["c2"]),
                                 (_inverse_window(prof), (-1.0, 1.0)))
        if fam in (Family.THM4_QUAD, Family.THM5_QUAD):
            k = prof.kernel
            xr = (1.05 * k.t_star, 3 * k.t_star) if k.dir > 0 else (0.1 * k.t_star, 0.95 * k.t_star)
            return self._surface(prof, LinearProfile(p["c1"], p["c2"]), (xr, (-1.0, 1.0)))
        if fam is Family.THM6_QUAD:
            return self._surface(ConstantProfile(p["c1"]), prof, ((-1.0, 1.0), _inverse_window(prof)))
        raise AssertionError(info)

    def profile(self) -> Profile:
        """The non-trivial profile of the family (the one the CLI tabulates)."""
        self.validate()
        p, fam = self.params, self.family
        if fam is Family.CATENARY:
            return make_catenary(p["lambda"], p["mu"])
        if fam is Family.THM1_LOGCOS:
            return make_thm1_cylinder(p["c1"], p["c2"], p["c3"]).g
        if fam is Family.THM2_ARCTAN:
            return arctan_cylinder_profile(p["c2"], p["c3"], self.sign)
        if fam is Family.THM1_ABEL:
            return solve_abel_thm1(p["alpha"], p["c5"], p["x0"], p["u0"], p["x_end"], self.ode)
        if fam is Family.THM2_ABEL:
            return solve_abel_thm2(p["alpha"], p["c5"], p["x0"], p["u0"], p["x_end"], self.ode)
        if fam is Family.THM3_AUTONOMOUS:
            return solve_thm3_autonomous(p["alpha"], p["c1"], p["z0"], p["g0"], p["gp0"],
                                         p["z_end"], self.ode)
        return make_quadrature_profile(fam, p, self.sign)

    def _surface(self, f, g, default_region):
        region = self.region or default_region
        return TranslationSurface.build(self.info.stype, f, g, region, name=self.family.value)


def _inverse_window(prof: InverseQuadratureProfile) -> tuple[float, float]:
    reach = min(1.5, 0.95 * prof.antiderivative.limit())
    return (0.0, reach) if prof.sign > 0 else (-reach, 0.0)


def default_spec(family) -> SolutionSpec:
    return SolutionSpec(Family(family))


def governing_defect(spec: SolutionSpec, profile: Profile, points) -> float:
    """Largest defect of the family's defining second-order ODE over ``points``.

    ODE families compare the interpolant's second derivative with the right
    hand side, scaled by 1 + |rhs|. Quadrature families plug their jets into
    the reduced equation in the normalized form it takes on the surface.
    """
    p, fam = spec.params, spec.family
    if spec.info.kind == "closed-form":
        raise BadParam(f"{fam.value} has no tabulated defining equation")
    worst = 0.0
    for s in points:
        if spec.info.ode:
            j = profile.interpolant_jet(s)
            r = profile.rhs(s, j.value, j.d1)
            d = (j.d2 - r) / (1 + abs(r))
        else:
            j = eval_jet(profile, s, 2)
            a = p["alpha"]
            if fam in (Family.THM4_QUAD, Family.THM5_QUAD):
                k = 1 + p["c2"] ** 2
                d = k * j.d2 / (k + j.d1 ** 2) + a * j.d1 / s
            elif fam is Family.THM6_QUAD:
                d = j.d2 / (1 + j.d1 ** 2) - a / (p["c1"] + j.value)
            elif fam is Family.THM3_EMDEN_FOWLER:
                d = j.d2 / (1 + j.d1 ** 2) - a / (p["c2"] + j.value)
            else:
                raise BadParam(f"{fam.value} has no tabulated defining equation")
        worst = max(worst, abs(d))
    return worst
