"""Command-line front end: verify, mesh, solve, catalog."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .connections import ConnectionKind
from .errors import (BadParam, DegenerateMetric, DomainError, HalfspaceViolation, ParseError,
                     SingminError, StepFailure)
from .jets import eval_jet
from .ode import OdeSolveConfig, TabulatedProfile
from .quadrature import InverseQuadratureProfile
from .singular import SingularConfig, residual_from_jet
from .solutions import CATALOG, Family, SolutionSpec, governing_defect
from .specfile import SurfaceSpec, parse_spec, write_spec
from .surface import DEFAULT_MARGIN, TranslationSurface, grid_jets, make_mesh

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _grid(text: str) -> tuple[int, int]:
    try:
        nu, nv = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 64x64, got {text!r}") from None
    if nu < 2 or nv < 2:
        raise argparse.ArgumentTypeError("grid sizes must be at least 2")
    return nu, nv


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like A:B, got {text!r}") from None
    return lo, hi


def _load(path):
    """Surface, default connection and alpha for a spec file."""
    spec = parse_spec(path)
    if isinstance(spec, SurfaceSpec):
        return spec.surface, ConnectionKind.LEVI_CIVITA, spec.alpha, spec.name
    return spec.build(), spec.info.connection, spec.effective_alpha, spec.family.value


def _interpolant_surface(surface: TranslationSurface) -> TranslationSurface:
    def view(p):
        return p.interpolant_view() if isinstance(p, TabulatedProfile) else p
    return TranslationSurface(surface.stype, view(surface.f), view(surface.g),
                              surface.domain, surface.name)


def verify_surface(surface, cfg: SingularConfig, nu: int, nv: int, tol: float) -> dict:
    u = surface.domain[0].linspace(nu)
    v = surface.domain[1].linspace(nv)
    values, failures = [], []
    for i, j, jet in grid_jets(surface, u, v):
        point = [float(u[i]), float(v[j])]
        err, res = None, None
        if isinstance(jet, Exception):
            err = jet
        else:
            try:
                res = residual_from_jet(jet, cfg).residual
            except (HalfspaceViolation, DegenerateMetric, DomainError) as exc:
                err = exc
        if err is not None:
            failures.append({"index": i * nv + j, "point": point, "residual": None,
                             "error": f"{type(err).__name__}: {err}"})
            continue
        values.append(abs(res))
        if not abs(res) <= tol:
            failures.append({"index": i * nv + j, "point": point, "residual": res, "error": None})
    failures.sort(key=lambda f: f["index"])
    max_r = max(values) if values else None
    mean_r = float(np.mean(values)) if values else None
    ok = max_r is not None and max_r <= tol and not failures
    return {"max_residual": max_r, "mean_residual": mean_r, "failures": failures,
            "status": "PASS" if ok else "FAIL"}


def cmd_verify(args) -> int:
    surface, conn, alpha, name = _load(args.spec)
    if args.interpolant:
        surface = _interpolant_surface(surface)
    conn = ConnectionKind.parse(args.connection) if args.connection else conn
    alpha = alpha if args.alpha is None else args.alpha
    cfg = SingularConfig(alpha, args.u, conn)
    nu, nv = args.grid
    body = verify_surface(surface, cfg, nu, nv, args.tol)
    report = {"surface": name, "connection": conn.value, "alpha": alpha, "u": args.u,
              "grid": [nu, nv], "tolerance": args.tol, **body}
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        mx = "n/a" if body["max_residual"] is None else f"{body['max_residual']:.3e}"
        mean = "n/a" if body["mean_residual"] is None else f"{body['mean_residual']:.3e}"
        print(f"surface      {name}")
        print(f"connection   {conn.value}   alpha {alpha:g}   u {args.u}   grid {nu}x{nv}")
        print(f"max residual {mx}   mean {mean}   tolerance {args.tol:g}")
        for f in body["failures"][:10]:
            what = f["error"] or f"residual {f['residual']:.3e}"
            print(f"  fail #{f['index']} at ({f['point'][0]:.6g}, {f['point'][1]:.6g}): {what}")
        if len(body["failures"]) > 10:
            print(f"  ... {len(body['failures']) - 10} more failures")
        print(body["status"])
    return EXIT_PASS if body["status"] == "PASS" else EXIT_FAIL


def cmd_mesh(args) -> int:
    surface, _, _, _ = _load(args.spec)
    mesh = make_mesh(surface, *args.grid)
    if args.format == "obj":
        lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in mesh.vertices.tolist()]
        lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles.tolist()]
    else:
        lines = ["x,y,z"] + [f"{x!r},{y!r},{z!r}" for x, y, z in mesh.vertices.tolist()]
    try:
        Path(args.out).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write {args.out}: {exc.strerror}") from None
    print(f"wrote {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles to {args.out}")
    return EXIT_PASS


def _params(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects k=v, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--param {key.strip()}: not a number: {val!r}") from None
    return out


def cmd_solve(args) -> int:
    family = Family(args.family)
    info = CATALOG[family]
    if info.kind == "closed-form":
        raise UsageError(f"{family.value} is closed-form; solve handles ODE and quadrature families")
    params = _params(args.param)
    if args.range and info.ode:
        lo_key, hi_key = ("z0", "z_end") if family is Family.THM3_AUTONOMOUS else ("x0", "x_end")
        params[lo_key], params[hi_key] = args.range
    ode = OdeSolveConfig(rtol=args.rtol) if args.rtol else OdeSolveConfig()
    spec = SolutionSpec(family, params, args.sign, ode=ode)
    profile = spec.profile()
    if args.range and not info.ode:
        lo, hi = args.range
    elif info.ode:
        lo, hi = profile.domain.lo, profile.domain.hi
    else:
        window = spec.build().domain[1 if family is Family.THM6_QUAD else 0]
        lo, hi = window.lo, window.hi
    if not info.ode:
        dom = profile.domain
        lo = lo + DEFAULT_MARGIN if lo == dom.lo else lo
        hi = hi - DEFAULT_MARGIN if hi == dom.hi else hi
    xs = np.linspace(lo, hi, args.points)
    rows = ["s,f,df,d2f"]
    xs = xs.tolist()
    for s in xs:
        j = eval_jet(profile, s, 2)
        rows.append(f"{s!r},{j.value!r},{j.d1!r},{j.d2!r}")
    defect = governing_defect(spec, profile, xs)
    rows.append(f"# max_defect={defect:.6e}")
    if info.ode:
        rows.append(f"# max_abs_defect={profile.defect():.6e}")
        rows.append(f"# interpolation_error_bound={profile.error_bound:.6e}")
    else:
        rows.append(f"# quadrature_error_bound={profile.error_bound:.6e}")
    if isinstance(profile, InverseQuadratureProfile):
        rt = max(abs(profile.forward(eval_jet(profile, s, 0).value) - s) for s in xs)
        rows.append(f"# roundtrip_error={rt:.6e}")
    try:
        Path(args.out).write_text("\n".join(rows) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write {args.out}: {exc.strerror}") from None
    print("\n".join(r for r in rows if r.startswith("#")))
    return EXIT_PASS


def catalog_entries() -> list[dict]:
    out = []
    for fam, info in CATALOG.items():
        spec = SolutionSpec(fam)
        out.append({"family": fam.value, "citation": info.citation,
                    "surface_type": info.stype.value, "connection": info.connection.value,
                    "kind": info.kind, "constraints": list(info.constraints),
                    "defaults": spec.params, "alpha": spec.effective_alpha,
                    "sign": spec.sign})
    return out


def cmd_catalog(args) -> int:
    entries = catalog_entries()
    if args.write_specs:
        d = Path(args.write_specs)
        d.mkdir(parents=True, exist_ok=True)
        for fam in CATALOG:
            (d / f"{fam.value}.ini").write_text(write_spec(SolutionSpec(fam)))
    if args.json:
        print(json.dumps(entries, sort_keys=True, ensure_ascii=False))
        return EXIT_PASS
    for e in entries:
        defaults = ", ".join(f"{k}={v:g}" for k, v in e["defaults"].items())
        cons = "; ".join(e["constraints"]) or "none"
        print(f"{e['family']}")
        print(f"    {e['citation']}")
        print(f"    type {e['surface_type']}, connection {e['connection']}, {e['kind']}, "
              f"alpha {e['alpha']:g}")
        print(f"    constraints: {cons}")
        print(f"    defaults: {defaults}")
    print(f"{len(entries)} families")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="singmin", description="Construct and verify singular minimal "
                "translation surfaces under semi-symmetric connections.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="residual sweep over a parameter grid")
    v.add_argument("--spec", required=True)
    v.add_argument("--connection", choices=["levi", "nabla", "d"])
    v.add_argument("--alpha", type=float)
    v.add_argument("--u", choices=["x", "y", "z"], default="x")
    v.add_argument("--grid", type=_grid, default=(64, 64))
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--json", action="store_true")
    v.add_argument("--interpolant", action="store_true",
                   help="use pure interpolant jets for ODE-tabulated profiles")
    v.set_defaults(run=cmd_verify)

    m = sub.add_parser("mesh", help="export a triangle mesh")
    m.add_argument("--spec", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--format", choices=["obj", "csv"], default="obj")
    m.add_argument("--grid", type=_grid, default=(32, 32))
    m.set_defaults(run=cmd_mesh)

    s = sub.add_parser("solve", help="tabulate an ODE or quadrature profile")
    s.add_argument("--family", required=True, choices=[f.value for f in Family])
    s.add_argument("--param", action="append", metavar="K=V")
    s.add_argument("--range", type=_range)
    s.add_argument("--rtol", type=float)
    s.add_argument("--sign", type=int, choices=[1, -1], default=1)
    s.add_argument("--points", type=int, default=201)
    s.add_argument("--out", required=True)
    s.set_defaults(run=cmd_solve)

    c = sub.add_parser("catalog", help="list the solution families")
    c.add_argument("--json", action="store_true")
    c.add_argument("--write-specs", metavar="DIR")
    c.set_defaults(run=cmd_catalog)
    return p


def _glue_negative_values(argv):
    """Let ``--range -1:3`` through; argparse would read -1:3 as an option."""
    out, it = [], iter(argv)
    for a in it:
        if a in ("--range", "--alpha"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:          # --help
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StepFailure as exc:
        print(f"error: StepFailure: {exc} (x={exc.x}, last step={exc.step})", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, BadParam, DomainError, SingminError, IOError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
