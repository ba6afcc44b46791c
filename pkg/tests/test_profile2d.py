import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from singlab.profile2d import (Profile2D, SignPattern, boundary_residuals, eval_profile2d,
                               is_resonant, phi_function, phi_root, positive_profile,
                               sign_analysis, solve_profile2d)

# p = 4: Φ(X) = X² ... has the closed-form root 1/√3, so a = 1/√3, b = 1/3.
# Values cross-checked with a 40-digit root finder.
P4_ROOT = 0.57735026918962576451
P4_A = 0.57735026918962578211
P4_B = 0.33333333333333337399
P4_HALF = 0.66666666666666670224
# sign-change witness found by scanning p in (1, 2): the profile vanishes at π/2
SIGN_WITNESS_P = 1.8

non_resonant = st.floats(1.2, 6.0).filter(
    lambda p: abs(1 / (p - 1) - round(1 / (p - 1))) > 1e-3)


def test_phi_examples():
    assert phi_function(1.0, 3.0) == pytest.approx(0.0, abs=1e-15)
    for p in (2.5, 4.0, 1.3):
        assert phi_function(0.0, p) == pytest.approx(-math.sin(math.pi / (p - 1)), abs=1e-15)


def test_phi_root_p4():
    assert phi_root(4.0) == pytest.approx(P4_ROOT, abs=1e-12)
    assert abs(phi_function(phi_root(4.0), 4.0)) < 1e-13


def test_phi_vectorised():
    x = np.array([0.0, 0.5, 1.0, 2.0])
    np.testing.assert_allclose(phi_function(x, 3.0), [phi_function(v, 3.0) for v in x])


def test_p3_closed_form():
    zero, ws, neg = solve_profile2d(3.0)
    assert zero.is_zero
    assert ws.a == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert ws.b == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert eval_profile2d(ws, math.pi / 2) == pytest.approx(1.0, abs=1e-12)
    assert (neg.a, neg.b) == (-ws.a, -ws.b)


def test_p4_values():
    ws = positive_profile(4.0)
    assert ws.a == pytest.approx(P4_A, rel=1e-12)
    assert ws.b == pytest.approx(P4_B, rel=1e-12)
    assert eval_profile2d(ws, math.pi / 2) == pytest.approx(P4_HALF, rel=1e-12)


@pytest.mark.parametrize("p", [2.0, 1.5, 1.25, 1.2, 1 + 1 / 3 + 1e-12])
def test_resonant_only_zero(p):
    sols = solve_profile2d(p)
    assert len(sols) == 1 and sols[0].is_zero
    with pytest.raises(ValueError):
        positive_profile(p)


def test_resonance_tolerance():
    assert is_resonant(2.0) and is_resonant(1.5)
    assert not is_resonant(2.0 + 1e-6)
    assert not is_resonant(0.5 + 1.0 + 1e-3)


def test_eval_domain():
    ws = positive_profile(3.0)
    assert eval_profile2d(ws, 0.0) == pytest.approx(ws.a)
    with pytest.raises(ValueError):
        eval_profile2d(ws, -1e-9)
    with pytest.raises(ValueError):
        eval_profile2d(ws, math.pi + 1e-9)


def test_rejects_p_le_one():
    with pytest.raises(ValueError):
        solve_profile2d(1.0)
    with pytest.raises(ValueError):
        phi_function(1.0, 0.9)


def test_boundary_residual_examples():
    assert boundary_residuals(Profile2D(0.0, 0.0, 3.0)) == (0.0, 0.0)
    ws = positive_profile(3.0)
    assert max(map(abs, boundary_residuals(ws))) < 1e-10
    bumped = Profile2D(ws.a, ws.b + 0.1, 3.0)
    r0, _ = boundary_residuals(bumped)
    # ω'(0) = b/(p-1), so shifting b by 0.1 shifts r0 by -0.1/(p-1)
    assert r0 == pytest.approx(-0.1 / 2.0, abs=1e-12)


def test_sign_examples():
    ws = positive_profile(3.0)
    assert sign_analysis(ws).pattern is SignPattern.CONSTANT_SIGN
    assert sign_analysis(-ws).pattern is SignPattern.CONSTANT_SIGN
    rep = sign_analysis(positive_profile(SIGN_WITNESS_P))
    assert rep.pattern is SignPattern.SIGN_CHANGING
    assert rep.crossings == pytest.approx((math.pi / 2,), abs=1e-12)


def test_sign_rejects():
    with pytest.raises(ValueError):
        sign_analysis(Profile2D(0.0, 0.0, 3.0))
    with pytest.raises(ValueError):
        sign_analysis(positive_profile(3.0), samples=50)


@settings(max_examples=60, deadline=None)
@given(non_resonant)
def test_profiles_solve_the_problem(p):
    sols = solve_profile2d(p)
    assert len(sols) == 3
    ws = sols[1]
    scale = max(1.0, abs(ws.a) ** p, abs(ws.b) ** p)
    r0, rpi = boundary_residuals(ws)
    assert abs(r0) < 1e-10 * scale and abs(rpi) < 1e-10 * scale
    assert ws.b == pytest.approx((p - 1) * abs(ws.a) ** (p - 1) * ws.a, rel=1e-12)
    phi = np.linspace(0, math.pi, 41)
    ode = ws.derivative(phi, 2) + ws(phi) / (p - 1) ** 2
    assert np.max(np.abs(ode)) < 1e-12 * scale
    # closed under negation
    assert (sols[2].a, sols[2].b) == (-ws.a, -ws.b)


@settings(max_examples=60, deadline=None)
@given(non_resonant)
def test_phi_single_sign_change(p):
    xs = np.geomspace(1e-8, 1e8, 20001)
    vals = phi_function(xs, p)
    sgn = np.sign(vals)
    assert np.count_nonzero(sgn[:-1] != sgn[1:]) == 1
    if math.tan(math.pi / (p - 1)) > 0:
        # Φ / cos(π/(p-1)) has a positive derivative; compare at float resolution
        signed = vals * math.copysign(1.0, math.cos(math.pi / (p - 1)))
        assert np.all(np.diff(signed) >= -1e-15 * np.abs(signed[1:]))


@settings(max_examples=40, deadline=None)
@given(st.floats(2.0, 8.0))
def test_constant_sign_above_two(p):
    assume(not is_resonant(p))
    assert sign_analysis(positive_profile(p)).pattern is SignPattern.CONSTANT_SIGN
