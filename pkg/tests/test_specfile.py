import textwrap
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singmin.errors import ConstraintError, ParseError
from singmin.solutions import CATALOG, Family, SolutionSpec
from singmin.specfile import SurfaceSpec, parse_spec, parse_spec_text, write_spec
from singmin.surface import SurfaceType

SPECS = Path(__file__).resolve().parents[1] / "specs"


def _text(s):
    return textwrap.dedent(s).lstrip()


def test_solution_spec_with_region_and_ode():
    spec = parse_spec_text(_text("""
        [solution]
        family = abel_thm1
        sign = -1
        [params]
        alpha = 2
        c5 = 0.25
        [ode]
        rtol = 1e-9
    """))
    assert spec.family is Family.THM1_ABEL and spec.sign == -1
    assert spec.params["alpha"] == 2.0 and spec.params["c5"] == 0.25
    assert spec.ode.rtol == 1e-9


def test_alpha_in_solution_section_feeds_param():
    spec = parse_spec_text("[solution]\nfamily = thm4_quad\nalpha = 3\n")
    assert spec.params["alpha"] == 3.0


def test_surface_spec():
    spec = parse_spec(SPECS / "scherk.ini")
    assert isinstance(spec, SurfaceSpec)
    assert spec.surface.stype is SurfaceType.Z and spec.name == "scherk"
    assert spec.surface.domain[0].lo == pytest.approx(-1.2, abs=1e-8)


@pytest.mark.parametrize("family", list(Family))
def test_write_then_parse_round_trip(family):
    spec = SolutionSpec(family, sign=CATALOG[family].default_sign)
    again = parse_spec_text(write_spec(spec))
    assert again.family is spec.family and again.params == spec.params
    assert again.effective_alpha == spec.effective_alpha


@pytest.mark.parametrize("text,line,field", [
    ("[solution]\nfamily = nope\n", 2, "family"),
    ("[solution]\nfamily = thm4_quad\n[params]\nc3 = abc\n", 4, "c3"),
    ("[solution]\nfamily = thm4_quad\n[params]\nc8 = 1\n", 4, "c8"),
    ("[solution]\nfamily = thm4_quad\nsign = 2\n", 3, "sign"),
    ("[solution]\nfamily = thm4_quad\n[region]\ns1 = 1 : 0\ns2 = 0 : 1\n", 4, "s1"),
    ("[surface]\ntype = q\n", 2, "type"),
    ("[surface]\ntype = z\n[f]\nkind = spline\n[g]\nkind = constant\n", 4, "kind"),
    ("[solution]\nfamily = thm4_quad\n[params]\nc3 = inf\n", 4, "c3"),
])
def test_parse_errors_point_at_line_and_field(text, line, field):
    with pytest.raises(ParseError) as info:
        parse_spec_text(text)
    assert info.value.line == line and info.value.field == field
    assert str(info.value).startswith(f"line {line}, field '{field}'")


def test_missing_header_and_both_headers():
    with pytest.raises(ParseError):
        parse_spec_text("family = thm4_quad\n")
    with pytest.raises(ParseError):
        parse_spec_text("[solution]\nfamily = thm4_quad\n[surface]\ntype = z\n")


def test_unreadable_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        parse_spec(tmp_path / "missing.ini")


@pytest.mark.parametrize("text", [
    "[solution]\nfamily = thm2_arctan\n[params]\nc2 = 0\n",
    "[solution]\nfamily = thm1_logcos\nalpha = 0\n",
    "[solution]\nfamily = thm4_quad\nalpha = 0\n",
    "[surface]\ntype = z\nalpha = 0\n[f]\nkind = constant\n[g]\nkind = constant\n"
    "[region]\ns1 = 0 : 1\ns2 = 0 : 1\n",
    "[surface]\ntype = z\n[f]\nkind = catenary\nlambda = 0\n[g]\nkind = constant\n",
    "[solution]\nfamily = abel_thm1\n[ode]\nrtol = -1\n",
])
def test_constraint_errors(text):
    with pytest.raises(ConstraintError):
        parse_spec_text(text)


@settings(max_examples=30, deadline=None)
@given(coeffs=st.lists(st.floats(-5, 5), min_size=1, max_size=5),
       lo=st.floats(-3, 0), width=st.floats(0.1, 3))
def test_polynomial_surface_specs(coeffs, lo, width):
    text = ("[surface]\ntype = x\n[f]\nkind = polynomial\ncoeffs = "
            + ", ".join(repr(c) for c in coeffs)
            + f"\n[g]\nkind = linear\nc0 = 1\nc1 = 2\n[region]\ns1 = {lo!r} : {lo + width!r}\n"
            "s2 = -1 : 1\n")
    spec = parse_spec_text(text)
    assert spec.surface.f.poly.coef.tolist() == pytest.approx(coeffs)
    assert spec.surface.domain[0].width == pytest.approx(width, abs=1e-8)
