"""Random smooth profiles for property tests and the acceptance sweeps."""
import math

import numpy as np
from hypothesis import strategies as st

from singmin.jets import REAL_LINE, AnalyticProfile


def trig_poly_profile(a, b, c, q, l):
    """s -> a sin(b s + c) + q s^2 + l s, with exact derivatives."""
    return AnalyticProfile(
        (lambda s: a * math.sin(b * s + c) + q * s * s + l * s,
         lambda s: a * b * math.cos(b * s + c) + 2 * q * s + l,
         lambda s: -a * b * b * math.sin(b * s + c) + 2 * q,
         lambda s: -a * b ** 3 * math.cos(b * s + c)),
        REAL_LINE, {"a": a, "b": b, "c": c, "q": q, "l": l}, name="trigpoly")


def random_profile(rng: np.random.Generator):
    a, b, c = rng.uniform(-1.5, 1.5), rng.uniform(-2, 2), rng.uniform(-math.pi, math.pi)
    q, l = rng.uniform(-1, 1), rng.uniform(-1, 1)
    return trig_poly_profile(a, b, c, q, l)


coef = st.floats(-1.5, 1.5, allow_nan=False)


@st.composite
def profiles(draw):
    return trig_poly_profile(draw(coef), draw(st.floats(-2, 2)), draw(st.floats(-3, 3)),
                             draw(st.floats(-1, 1)), draw(st.floats(-1, 1)))


def trig_poly_expr(p):
    """The same profile as a sympy-parsable string in the variable ``s``."""
    k = p.params
    return f"({k['a']!r})*sin(({k['b']!r})*s + ({k['c']!r})) + ({k['q']!r})*s**2 + ({k['l']!r})*s"
