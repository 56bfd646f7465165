"""INI-style spec files describing either a catalog solution or a raw surface.

Solution spec::

    [solution]
    family = thm2_arctan
    sign = 1            ; optional, +1 or -1
    alpha = 1           ; for families whose alpha is not a parameter
    [params]
    c2 = 1
    [region]            ; optional, overrides the family's default window
    s1 = 0.5 : 2.5
    s2 = 0.1 : 1.5
    [ode]               ; optional, ODE families only
    rtol = 1e-8

Raw surface spec::

    [surface]
    type = z            ; z, y or x: the coordinate given as f + g
    alpha = 1
    [f]
    kind = constant     ; constant, linear, polynomial, catenary, logcos
    c = 0
    [g]
    kind = polynomial
    coeffs = 0, 0, 1
    [region]
    s1 = -1 : 1
    s2 = -1 : 1
"""
from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import BadParam, ConstraintError, DomainError, ParseError
from .jets import (ConstantProfile, LinearProfile, PolynomialProfile, catenary_profile,
                   logcos_profile)
from .ode import OdeSolveConfig
from .singular import ALPHA_FLOOR
from .solutions import CATALOG, Family, SolutionSpec
from .surface import SurfaceType, TranslationSurface


@dataclass
class SurfaceSpec:
    surface: TranslationSurface
    alpha: float
    name: str


class _Lines:
    """Maps (section, key) to the 1-based line where it is defined."""

    def __init__(self, text: str):
        self.map: dict[tuple[str, str | None], int] = {}
        section = None
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            m = re.match(r"\[([^\]]+)\]", line)
            if m:
                section = m.group(1).strip().lower()
                self.map[(section, None)] = n
                continue
            m = re.match(r"([^=:;#\s][^=:]*?)\s*[=:]", line)
            if m and section is not None:
                self.map.setdefault((section, m.group(1).strip().lower()), n)

    def __call__(self, section, key=None) -> int | None:
        return self.map.get((section, key), self.map.get((section, None)))


def _parse_interval(text: str, where, lines: _Lines):
    parts = text.split(":")
    if len(parts) != 2:
        raise ParseError(f"expected 'lo : hi', got {text!r}", lines(*where), where[1])
    lo, hi = (_float(p, where, lines) for p in parts)
    if not lo < hi:
        raise ParseError(f"empty interval {lo:g} : {hi:g}", lines(*where), where[1])
    return (lo, hi)


def _float(text: str, where, lines: _Lines) -> float:
    try:
        v = float(text.strip())
    except ValueError:
        raise ParseError(f"not a number: {text.strip()!r}", lines(*where), where[1]) from None
    if not math.isfinite(v):
        raise ParseError(f"value must be finite, got {text.strip()!r}", lines(*where), where[1])
    return v


def _region(cfg, lines):
    if not cfg.has_section("region"):
        return None
    sec = cfg["region"]
    missing = [k for k in ("s1", "s2") if k not in sec]
    if missing:
        raise ParseError("[region] needs both s1 and s2", lines("region"), missing[0])
    return tuple(_parse_interval(sec[k], ("region", k), lines) for k in ("s1", "s2"))


def _check_keys(cfg, section, allowed, lines):
    for key in cfg[section]:
        if key not in allowed:
            raise ParseError(f"unknown key in [{section}]; expected one of "
                             f"{', '.join(sorted(allowed))}", lines(section, key), key)


def parse_spec_text(text: str, source: str = "<spec>"):
    lines = _Lines(text)
    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        cfg.read_string(text, source=source)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        raise ParseError(str(exc).splitlines()[0], lineno, None) from None
    if cfg.has_section("solution") == cfg.has_section("surface"):
        raise ParseError("spec needs exactly one of [solution] or [surface]", 1, None)
    if cfg.has_section("solution"):
        return _solution(cfg, lines)
    return _surface(cfg, lines)


def parse_spec(path) -> "SolutionSpec | SurfaceSpec":
    """Read and validate a spec file; constraint failures raise ConstraintError."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", None, None) from None
    return parse_spec_text(text, str(path))


def _solution(cfg, lines) -> SolutionSpec:
    sec = cfg["solution"]
    _check_keys(cfg, "solution", {"family", "sign", "alpha"}, lines)
    if "family" not in sec:
        raise ParseError("missing family", lines("solution"), "family")
    try:
        family = Family(sec["family"].strip().lower())
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise ParseError(f"unknown family {sec['family']!r}; known: {names}",
                         lines("solution", "family"), "family") from None
    info = CATALOG[family]
    sign = 1
    if "sign" in sec:
        sign_v = _float(sec["sign"], ("solution", "sign"), lines)
        if sign_v not in (1.0, -1.0):
            raise ParseError("sign must be +1 or -1", lines("solution", "sign"), "sign")
        sign = int(sign_v)
    params = {}
    if cfg.has_section("params"):
        _check_keys(cfg, "params", set(info.defaults), lines)
        params = {k: _float(v, ("params", k), lines) for k, v in cfg["params"].items()}
    alpha = None
    if "alpha" in sec:
        alpha = _float(sec["alpha"], ("solution", "alpha"), lines)
        if info.alpha_is_param:
            if "alpha" in params and params["alpha"] != alpha:
                raise ParseError("alpha given twice with different values",
                                 lines("solution", "alpha"), "alpha")
            params["alpha"] = alpha
            alpha = None
    ode = OdeSolveConfig()
    if cfg.has_section("ode"):
        _check_keys(cfg, "ode", {"rtol", "atol", "max_step", "singularity_guard"}, lines)
        kw = {k: _float(v, ("ode", k), lines) for k, v in cfg["ode"].items()}
        try:
            ode = OdeSolveConfig(**kw)
        except BadParam as exc:
            raise ConstraintError(f"[ode]: {exc}") from None
    spec = SolutionSpec(family, params, sign, alpha, _region(cfg, lines), ode)
    spec.validate()
    return spec


_PROFILE_KEYS = {
    "constant": ({"c"}, lambda p: ConstantProfile(p.get("c", 0.0))),
    "linear": ({"c0", "c1"}, lambda p: LinearProfile(p.get("c0", 0.0), p.get("c1", 0.0))),
    "catenary": ({"lambda", "mu"}, lambda p: catenary_profile(p.get("lambda", 1.0), p.get("mu", 0.0))),
    "logcos": ({"a", "b", "c", "d", "branch"},
               lambda p: logcos_profile(p.get("a", 1.0), p.get("b", 1.0), p.get("c", 0.0),
                                        p.get("d", 0.0), int(p.get("branch", 0)))),
}


def _profile(cfg, section, lines):
    if not cfg.has_section(section):
        raise ParseError(f"missing [{section}] section", None, None)
    sec = cfg[section]
    kind = sec.get("kind", "").strip().lower()
    if kind == "polynomial":
        _check_keys(cfg, section, {"kind", "coeffs"}, lines)
        raw = sec.get("coeffs", "0")
        coeffs = [_float(c, (section, "coeffs"), lines) for c in raw.split(",") if c.strip()]
        return PolynomialProfile(coeffs)
    if kind not in _PROFILE_KEYS:
        raise ParseError(f"unknown profile kind {kind!r}; use constant, linear, polynomial, "
                         f"catenary or logcos", lines(section, "kind"), "kind")
    keys, make = _PROFILE_KEYS[kind]
    _check_keys(cfg, section, keys | {"kind"}, lines)
    p = {k: _float(v, (section, k), lines) for k, v in sec.items() if k != "kind"}
    if kind == "catenary" and p.get("lambda", 1.0) == 0:
        raise ConstraintError(f"[{section}]: catenary needs λ ≠ 0")
    if kind == "logcos" and p.get("b", 1.0) == 0:
        raise ConstraintError(f"[{section}]: logcos needs b ≠ 0")
    return make(p)


def _surface(cfg, lines) -> SurfaceSpec:
    sec = cfg["surface"]
    _check_keys(cfg, "surface", {"type", "alpha", "name"}, lines)
    try:
        stype = SurfaceType(sec.get("type", "z").strip().lower())
    except ValueError:
        raise ParseError("type must be z, y or x", lines("surface", "type"), "type") from None
    alpha = _float(sec.get("alpha", "1"), ("surface", "alpha"), lines)
    if abs(alpha) < ALPHA_FLOOR:
        raise ConstraintError("alpha = 0 is excluded (α ≠ 0 is assumed)")
    f, g = _profile(cfg, "f", lines), _profile(cfg, "g", lines)
    region = _region(cfg, lines)
    try:
        surface = TranslationSurface.build(stype, f, g, region, name=sec.get("name", "surface"))
    except DomainError as exc:
        raise ConstraintError(f"[region]: {exc}") from None
    return SurfaceSpec(surface, alpha, surface.name)


def write_spec(spec: SolutionSpec) -> str:
    """Render a solution spec in the file format (used for the catalog defaults)."""
    out = ["[solution]", f"family = {spec.family.value}", f"sign = {spec.sign}"]
    if not spec.info.alpha_is_param:
        out.append(f"alpha = {spec.effective_alpha:g}")
    out += ["", "[params]"] + [f"{k} = {v:g}" for k, v in spec.params.items()]
    if spec.info.ode:
        out += ["", "[ode]", f"rtol = {spec.ode.rtol:g}"]
    return "\n".join(out) + "\n"
