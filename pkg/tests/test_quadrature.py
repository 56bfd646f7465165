import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import power_integral, printed_reciprocal_integral
from singmin.errors import BadParam, DomainError
from singmin.jets import eval_jet
from singmin.quadrature import (BranchAntiderivative, InverseQuadratureProfile, PowerKernel,
                                QuadratureProfile, ReciprocalPowerKernel)


def test_kernel_branch_point_and_direction():
    k = PowerKernel(1.0, -4.0, 2.0)
    assert k.t_star == pytest.approx(2.0) and k.dir == 1
    k = PowerKernel(1.0, -4.0, -2.0)
    assert k.t_star == pytest.approx(0.5) and k.dir == -1
    with pytest.raises(BadParam):
        PowerKernel(1.0, 4.0, 2.0)


def test_radicand_keeps_relative_accuracy_near_branch_point():
    k = PowerKernel(1.0, -1.0, 2.0)
    t = 1.0 + 1e-12
    assert k.radicand(t) == pytest.approx(2e-12 + 1e-24, rel=1e-9)


def test_arccosh():
    prof = QuadratureProfile(PowerKernel(1.0, -1.0, 2.0), 1.0)
    for t in (1.0 + 1e-10, 1.1, 2.0, 5.0, 40.0):
        assert eval_jet(prof, t, 0).value == pytest.approx(math.acosh(t), rel=1e-12, abs=1e-15)


def test_square_root_case():
    # integral of (t - 1)^(-1/2) = 2 sqrt(t - 1)
    prof = QuadratureProfile(PowerKernel(1.0, -1.0, 1.0), 1.0)
    for t in (1.0 + 1e-8, 1.5, 3.0, 10.0):
        assert eval_jet(prof, t, 0).value == pytest.approx(2 * math.sqrt(t - 1), rel=1e-12)


@pytest.mark.parametrize("c,d,p", [(1.0, -1.0, 3.0), (2.0, -0.5, 1.0), (1.0, -1.0, -1.0),
                                   (1.0, -2.0, -3.0), (0.5, -1.0, 0.4)])
def test_against_tanh_sinh(c, d, p):
    k = PowerKernel(c, d, p)
    prof = QuadratureProfile(k, 1.0)
    for frac in (0.05, 0.5, 0.9):
        t = k.t_star * (1 + frac) if k.dir > 0 else k.t_star * (1 - frac)
        want = power_integral(c, d, p, t)
        assert eval_jet(prof, t, 0).value == pytest.approx(want, rel=1e-11, abs=1e-13)


@pytest.mark.parametrize("a,k", [(1.0, 1.0), (0.5, 2.0), (-1.0, 1.0), (2.0, 0.7)])
def test_printed_kernel_against_tanh_sinh(a, k):
    kern = ReciprocalPowerKernel(a, k)
    prof = QuadratureProfile(kern, 1.0)
    t = kern.t_star * (0.6 if kern.dir < 0 else 1.6)
    want = printed_reciprocal_integral(a, k, t)
    assert eval_jet(prof, t, 0).value == pytest.approx(want, rel=1e-11)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(0.3, 2.5) | st.floats(-2.5, -0.3), k=st.floats(0.5, 2.0),
       frac=st.floats(0.02, 0.9))
def test_printed_kernel_is_the_power_kernel_with_negated_exponent(a, k, frac):
    printed = QuadratureProfile(ReciprocalPowerKernel(a, k), 1.0)
    power = QuadratureProfile(PowerKernel(1.0, -k * k, -2 * a), 1.0)
    assert printed.domain.lo == pytest.approx(power.domain.lo)
    assert printed.domain.hi == pytest.approx(power.domain.hi)
    ts = printed.kernel.t_star
    t = ts * (1 - frac) if printed.kernel.dir < 0 else ts * (1 + 3 * frac)
    a_jet, b_jet = eval_jet(printed, t, 2), eval_jet(power, t, 2)
    assert abs(a_jet.value - b_jet.value) <= 1e-9 * (1 + abs(b_jet.value))
    assert abs(a_jet.d1 - b_jet.d1) <= 1e-9 * (1 + abs(b_jet.d1))


def test_antiderivative_limit():
    # dir = -1: t runs to 0, finite limit; p <= 2 with dir = +1 diverges
    g = BranchAntiderivative(PowerKernel(1.0, -1.0, -2.0))
    assert math.isfinite(g.limit())
    # integral over (0, 1) of t (1 - t^2)^(-1/2) dt = 1
    assert g.limit() == pytest.approx(1.0, rel=1e-12)
    assert BranchAntiderivative(PowerKernel(1.0, -1.0, 2.0)).limit() == math.inf
    # p = 4 > 2: converges
    assert math.isfinite(BranchAntiderivative(PowerKernel(1.0, -1.0, 4.0)).limit())
    with pytest.raises(DomainError):
        g.inverse(2.0)


def test_inverse_profile_is_cosh():
    prof = InverseQuadratureProfile(PowerKernel(1.0, -1.0, 2.0), 0.0, 1)
    for s in (1e-6, 0.1, 0.7, 1.5, 3.0):
        j = eval_jet(prof, s, 2)
        assert j.value == pytest.approx(math.cosh(s), rel=1e-13)
        assert j.d1 == pytest.approx(math.sinh(s), rel=1e-10)
        assert j.d2 == pytest.approx(math.cosh(s), rel=1e-13)
    neg = InverseQuadratureProfile(PowerKernel(1.0, -1.0, 2.0), 0.0, -1)
    assert eval_jet(neg, -0.7, 1).d1 == pytest.approx(math.sinh(-0.7), rel=1e-10)


def _conditioning(prof, s):
    """Error in s caused by rounding the value w(s) once.

    Solves |w'| ds + w'' ds^2 / 2 = ulp(w) for ds, which covers both the
    regular regime ds ~ ulp / |w'| and the branch point, where w' -> 0.
    """
    j = eval_jet(prof, s, 2)
    ulp = np.spacing(abs(j.value + prof.shift))
    return 2 * ulp / (abs(j.d1) + math.sqrt(2 * abs(j.d2) * ulp))


@settings(max_examples=80, deadline=None)
@given(c=st.floats(0.3, 3), p=st.floats(0.5, 3) | st.floats(-3, -0.5),
       s=st.floats(1e-12, 1.0) | st.floats(1e-12, 1e-6))
def test_forward_inverse_round_trip(c, p, s):
    prof = InverseQuadratureProfile(PowerKernel(c, -1.0, p), 0.2, 1)
    s = min(s, 0.99 * prof.span.hi)
    back = prof.forward(eval_jet(prof, s, 0).value)
    assert abs(back - s) <= 1e-10 + 4 * _conditioning(prof, s)


def test_quadrature_pinned_at_branch_point():
    prof = QuadratureProfile(PowerKernel(1.0, -1.0, 2.0), 3.0)
    assert eval_jet(prof, 1.0 + 1e-14, 0).value == pytest.approx(0.0, abs=1e-6)
    assert prof.error_bound < 1e-10
