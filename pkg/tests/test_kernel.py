import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hradon.bump import (TruncationSet, cancellation_residual, derivative_norms, make_bump,
                         partition_sum, phi_scaled, reconstruct_kernel, smoothstep_coeffs)

BUMP = make_bump(4)
F8 = TruncationSet.square(8)


def test_bump_examples():
    assert BUMP.eta(0.1) == 0.0
    assert BUMP.eta(1.0) == 1.0
    assert abs(sum(BUMP.eta(2.0 ** (-j) * 0.73) for j in range(-10, 11)) - 1.0) <= 1e-12


def test_bump_rejects_low_smoothness():
    with pytest.raises(ValueError):
        make_bump(1)


@pytest.mark.parametrize("r", [2, 3, 4, 6])
def test_smoothstep_endpoint_derivatives(r):
    c = np.polynomial.Polynomial(smoothstep_coeffs(r))
    assert c(0.0) == 0.0 and abs(c(1.0) - 1.0) < 1e-12
    for n in range(1, r + 1):
        d = c.deriv(n)
        assert abs(d(0.0)) < 1e-9 and abs(d(1.0)) < 1e-9 * math.factorial(2 * r + 1)
    # S' is proportional to x^r (1 - x)^r, which makes the step monotone
    target = np.polynomial.Polynomial([0.0, 1.0]) ** r * np.polynomial.Polynomial([1.0, -1.0]) ** r
    ratio = c.deriv().coef[r] / target.coef[r]
    np.testing.assert_allclose(c.deriv().coef, ratio * target.coef, rtol=1e-12)
    assert ratio > 0


@pytest.mark.parametrize("r", [2, 4, 5])
def test_theta_and_eta_shape(r):
    b = make_bump(r)
    u = np.linspace(-3, 3, 6001)
    th = b.theta(u)
    assert np.all(th[np.abs(u) <= 1] == 1.0) and np.all(th[np.abs(u) >= 2] == 0.0)
    e = b.eta(u)
    assert np.all(e[(np.abs(u) <= 0.5) | (np.abs(u) >= 2)] == 0.0)
    np.testing.assert_array_equal(e, b.eta(-u))
    np.testing.assert_allclose(e, b.theta(u) - b.theta(2 * u), atol=1e-15)


def test_partition_of_unity_dense():
    N = 12
    u = np.logspace((-N + 2) * math.log10(2), (N - 2) * math.log10(2), 1000)
    for sgn in (1.0, -1.0):
        assert np.abs(partition_sum(BUMP, sgn * u, N) - 1.0).max() <= 1e-12


def test_odd_profile_integral_vanishes():
    half = mpmath.quad(lambda x: BUMP.f(float(x)), [0.5, 1, 2])
    assert abs(half - mpmath.quad(lambda x: -BUMP.f(-float(x)), [0.5, 1, 2])) < 1e-14
    assert cancellation_residual(BUMP, 0, 1.0) <= 1e-10


def test_derivative_norms_against_mpmath():
    l1, jumps = derivative_norms(BUMP, 0)
    ref = mpmath.quad(lambda x: abs(BUMP.f(float(x))), [0.5, 1, 2])
    assert abs(l1 - float(ref)) < 1e-12
    assert jumps == pytest.approx(0.0, abs=1e-12)  # eta/u is continuous
    l1, _ = derivative_norms(BUMP, 1)
    g = lambda x: float(BUMP.f_derivative(np.array([float(x)]), 1)[0])  # noqa: E731
    # split at the interior sign change so |g| is smooth on every piece
    z = float(mpmath.findroot(g, 0.89))
    ref = mpmath.quad(lambda x: abs(g(x)), [0.5, z, 1, 2])
    assert abs(l1 - float(ref)) < 1e-8


def test_phi_scaled_examples():
    assert phi_scaled((0, 0), BUMP, 1.0, 1.0) == BUMP.eta(1.0) ** 2
    assert phi_scaled((3, -2), BUMP, 1.0, 1.0) == 0.0


@given(st.integers(-6, 6), st.integers(-6, 6), st.floats(0.3, 3.0), st.floats(0.3, 3.0),
       st.booleans(), st.booleans())
def test_phi_scaled_scaling_identity(j, k, a, b, ns, nt):
    s = (-a if ns else a) * 2.0**j
    t = (-b if nt else b) * 2.0**k
    lhs = phi_scaled((j, k), BUMP, s, t)
    rhs = 2.0 ** (-j - k) * phi_scaled((0, 0), BUMP, s * 2.0 ** (-j), t * 2.0 ** (-k))
    assert lhs == pytest.approx(rhs, rel=1e-14, abs=0)
    if not (2.0 ** (j - 1) <= abs(s) <= 2.0 ** (j + 1)):
        assert lhs == 0.0


def test_reconstruction_examples():
    assert abs(reconstruct_kernel(F8, BUMP, 1.0, 1.0) - 1.0) <= 1e-10
    assert abs(reconstruct_kernel(F8, BUMP, 3.0, 0.25) - 4.0 / 3.0) <= 1e-10
    # at the outer shell of F8 only one of the two covering rectangles is present
    s = 2.0**8 * 1.5
    v = reconstruct_kernel(F8, BUMP, s, 1.0)
    assert abs(v - 1.0 / s) > 1e-4 / s


def test_reconstruction_rejects_axes():
    with pytest.raises(ValueError):
        reconstruct_kernel(F8, BUMP, 0.0, 1.0)


@settings(max_examples=200)
@given(st.floats(-6, 6), st.floats(-6, 6), st.booleans(), st.booleans())
def test_reconstruction_interior(es, et, ns, nt):
    s = (-1) ** ns * 2.0**es
    t = (-1) ** nt * 2.0**et
    assert abs(reconstruct_kernel(F8, BUMP, s, t) - 1.0 / (s * t)) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(st.integers(-8, 8), st.floats(-2.5, 2.5), st.sampled_from(["s", "t"]))
def test_marginal_cancellation(k, t, axis):
    r = cancellation_residual(BUMP, k, t, axis)
    assert r <= 1e-10
    if not 0.5 < abs(t) < 2:
        assert r == 0.0


def test_cancellation_axis_check():
    with pytest.raises(ValueError):
        cancellation_residual(BUMP, 0, 1.0, axis="u")


def test_truncation_set_helpers():
    F = TruncationSet.rectangle((-1, 1), (0, 2))
    assert len(F) == 9 and (0, 2) in F and (2, 0) not in F
    assert list(F)[0] == (-1, 0)
    assert F.by_k()[1] == [-1, 0, 1]
    assert len(F.filter(lambda j, k: k <= 0)) == 3
    assert len(TruncationSet.square(8)) == 289
