import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from singmin.errors import BadParam, HalfspaceViolation, StepFailure
from singmin.jets import eval_jet
from singmin.ode import (OdeSolveConfig, abel_rhs_thm1, abel_rhs_thm2, autonomous_rhs_thm3, dopri5,
                         solve_abel_thm1, solve_abel_thm2, solve_second_order,
                         solve_thm3_autonomous)


def _reference(rhs, s0, y0, yp0, s_end, points):
    """Independent high-order solution (scipy DOP853 at tight tolerances)."""
    sol = solve_ivp(lambda s, y: [y[1], rhs(s, y[0], y[1])], (s0, s_end), [y0, yp0],
                    method="DOP853", rtol=1e-13, atol=1e-14, dense_output=True)
    return sol.sol(points)


def test_dopri5_exponential():
    sol = dopri5(lambda t, y: y, 0.0, [1.0], 1.0, rtol=1e-10, atol=1e-12)
    assert sol.ys[-1, 0] == pytest.approx(math.e, rel=1e-9)
    assert sol.ts[-1] == 1.0


def test_dopri5_backward_and_dense_output():
    sol = dopri5(lambda t, y: np.array([y[1], -y[0]]), 0.0, [0.0, 1.0], -3.0, 1e-10, 1e-12)
    assert sol.ys[-1, 0] == pytest.approx(math.sin(-3.0), abs=1e-9)
    for t in np.linspace(-3.0, 0.0, 17):
        assert sol.dense(t)[0] == pytest.approx(math.sin(t), abs=1e-8)


def test_dopri5_blowup_raises_step_failure():
    # y' = y^2, y(0) = 1 blows up at t = 1
    with pytest.raises(StepFailure) as info:
        dopri5(lambda t, y: y * y, 0.0, [1.0], 2.0, 1e-8, 1e-10)
    assert info.value.x == pytest.approx(1.0, abs=1e-2)


def test_config_validation():
    with pytest.raises(BadParam):
        OdeSolveConfig(rtol=0.0)
    assert OdeSolveConfig(rtol=1e-6).abs_tol == pytest.approx(1e-8)


def test_second_order_sine_and_jets():
    prof = solve_second_order(lambda s, y, p: -y, 0.0, 0.0, 1.0, 2.0, OdeSolveConfig(rtol=1e-10))
    for s in np.linspace(0, 2, 11):
        j = eval_jet(prof, s)
        assert j.value == pytest.approx(math.sin(s), abs=1e-9)
        assert j.d1 == pytest.approx(math.cos(s), abs=1e-8)
        assert j.d2 == pytest.approx(-math.sin(s), abs=1e-9)
        assert j.d3 == pytest.approx(-math.cos(s), abs=1e-8)
    assert prof.error_bound < 1e-8
    assert prof.domain.closed and 0.0 in prof.domain and 2.0 in prof.domain


@pytest.mark.parametrize("solver,rhs_for", [(solve_abel_thm1, abel_rhs_thm1),
                                            (solve_abel_thm2, abel_rhs_thm2)])
def test_abel_against_reference(solver, rhs_for):
    alpha, c5, x0, u0, x1 = 1.3, 0.4, 1.0, 0.2, 2.5
    prof = solver(alpha, c5, x0, u0, x1)
    xs = np.linspace(x0, x1, 25)
    ref = _reference(rhs_for(alpha, c5), x0, 0.0, u0, x1, xs)
    got = np.array([[eval_jet(prof, x, 1).value, eval_jet(prof, x, 1).d1] for x in xs]).T
    assert np.max(np.abs(got - ref)) < 1e-6


@pytest.mark.parametrize("solver", [solve_abel_thm1, solve_abel_thm2])
def test_abel_rejects_interval_through_pole(solver):
    with pytest.raises(BadParam):
        solver(1.0, 0.5, -1.0, 0.0, 1.0)


def test_global_error_shrinks_with_rtol():
    rhs = abel_rhs_thm1(1.0, 0.5)
    xs = np.linspace(1.0, 3.0, 41)
    ref = _reference(rhs, 1.0, 0.0, 0.0, 3.0, xs)[0]
    errs = []
    for rtol in (1e-6, 1e-8, 1e-10):
        prof = solve_abel_thm1(1.0, 0.5, 1.0, 0.0, 3.0, OdeSolveConfig(rtol=rtol))
        errs.append(max(abs(eval_jet(prof, x, 0).value - r) for x, r in zip(xs, ref)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] < 1e-7


def test_thm3_autonomous_reference_and_guard():
    prof = solve_thm3_autonomous(1.0, 1.0, 0.0, 1.0, 0.0, 2.0)
    zs = np.linspace(0.0, 2.0, 21)
    ref = _reference(autonomous_rhs_thm3(1.0, 1.0), 0.0, 1.0, 0.0, 2.0, zs)[0]
    assert max(abs(eval_jet(prof, z, 0).value - r) for z, r in zip(zs, ref)) < 1e-7
    with pytest.raises(HalfspaceViolation):
        solve_thm3_autonomous(1.0, -2.0, 0.0, 1.0, 0.0, 1.0)


def test_thm3_autonomous_stops_when_leaving_halfspace():
    # negative alpha with a steep downward start drives c1 + g to zero
    with pytest.raises((HalfspaceViolation, StepFailure)):
        solve_thm3_autonomous(-1.0, 0.0, 0.0, 0.2, -3.0, 5.0)


def test_interpolant_view_is_second_order_only():
    prof = solve_abel_thm1(1.0, 0.5, 1.0, 0.0, 2.0)
    view = prof.interpolant_view()
    assert view.max_order == 2
    j = eval_jet(view, 1.5, 2)
    assert j.d2 == pytest.approx(eval_jet(prof, 1.5, 2).d2, rel=1e-5)


@settings(max_examples=15, deadline=None)
@given(alpha=st.floats(0.3, 2.0), c5=st.floats(-1, 1), u0=st.floats(-0.5, 0.5))
def test_abel_interpolant_defect_small(alpha, c5, u0):
    prof = solve_abel_thm1(alpha, c5, 1.0, u0, 2.0)
    # the raw defect is scaled by the size of the right-hand side
    xs = prof.domain.linspace(201)
    worst = 0.0
    for x in xs:
        j = prof.interpolant_jet(x)
        r = prof.rhs(x, j.value, j.d1)
        worst = max(worst, abs(j.d2 - r) / (1 + abs(r)))
    assert worst < 1e-5
