import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hradon.bounds import (growth_threshold, load_constants, min_abs_on_interval, nw_bound,
                           nw_constant, nw_ratio, real_roots_in, vdc_bound, vdc_constant)

from oracles import oscillatory_brute

ONE = lambda x: np.ones_like(x)  # noqa: E731


def test_vdc_quadratic_example():
    b = vdc_bound([0, 0, 100.0], (0, 1), 2)
    assert b == pytest.approx(40 / math.sqrt(200), rel=1e-14)
    assert abs(oscillatory_brute([0, 0, 100.0], ONE, 0, 1)) <= b


def test_vdc_linear_example():
    assert vdc_bound([0, 1.0], (0, 1), 1) == 20.0
    assert vdc_constant(3) == 80.0


def test_vdc_inapplicable_cases():
    with pytest.raises(ValueError):
        vdc_bound([0, 0, 1.0], (-1, 1), 1)     # Q' = 2s vanishes at 0
    with pytest.raises(ValueError):
        vdc_bound([0, 1.0, 0, 1.0], (-1, 1), 1)  # Q' not monotone
    with pytest.raises(ValueError):
        vdc_bound([0, 1.0], (0, 1), 2)          # Q'' = 0
    with pytest.raises(ValueError):
        vdc_bound([0, 1.0], (0, 1), 0)


def test_min_abs_on_interval():
    assert min_abs_on_interval([-1.0, 0, 1.0], -0.5, 0.5) == pytest.approx(0.75)
    assert min_abs_on_interval([-1.0, 0, 1.0], 0, 2) == 0.0
    assert min_abs_on_interval([3.0], 0, 1) == 3.0
    assert real_roots_in([-1.0, 0, 1.0], -2, 2) == pytest.approx([-1.0, 1.0])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=2, max_size=6), st.floats(-2, 2), st.floats(0.05, 2))
def test_min_abs_against_dense_sampling(c, a, w):
    b = a + w
    x = np.linspace(a, b, 20001)
    dense = float(np.abs(np.polynomial.polynomial.polyval(x, c)).min())
    got = min_abs_on_interval(np.array(c), a, b)
    # sampling overestimates the min by at most max|p'| * spacing
    slope = float(np.abs(np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(c))).max())
    assert got <= dense + 1e-12
    assert dense <= got + slope * (b - a) / 20000 + 1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=2, max_size=5), st.lists(st.floats(0, 3), min_size=5,
       max_size=5), st.floats(-2, 2), st.floats(-1, 0.5), st.integers(1, 5))
def test_vdc_never_violated(c, mags, a, logw, k):
    coeffs = np.array([0.0, *(x * 10**m for x, m in zip(c, mags))])
    b = a + 10**logw
    try:
        bound = vdc_bound(coeffs, (a, b), k)
    except ValueError:
        return
    assert abs(oscillatory_brute(coeffs, ONE, a, b)) <= bound


def test_nw_constants_loaded():
    consts = load_constants()["nw_constant"]
    for d in range(1, 7):
        assert nw_constant(d) > 0
        assert str(d) in consts
    with pytest.raises(ValueError):
        nw_constant(9)
    assert growth_threshold() == 0.1


def test_nw_bound_shape_and_errors():
    C1 = nw_constant(1)
    assert nw_bound(5.0, 1, 1, 1.0) == pytest.approx(C1 / 5.0)
    # B enters as B^(1 - j/d)
    assert nw_bound(2.0, 1, 2, 4.0) == pytest.approx(nw_constant(2) * 2**-0.5 * 2.0)
    for args in ((0.0, 1, 1, 1.0), (1.0, 0, 1, 1.0), (1.0, 3, 2, 1.0), (1.0, 1, 1, 0.0)):
        with pytest.raises(ValueError):
            nw_bound(*args)
    assert nw_ratio(nw_bound(3.0, 2, 3, 0.5), 3.0, 2, 3, 0.5) == pytest.approx(nw_constant(3))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_nw_monomial_sweep_bounded(d):
    for e in range(0, 7):
        h = 10.0**e
        c = np.zeros(d + 1)
        c[d] = h
        v = oscillatory_brute(c, ONE, 0.5, 1.0)
        assert abs(v) <= nw_bound(h, d, d, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=1, max_size=4), st.lists(st.floats(0, 3), min_size=4,
       max_size=4), st.floats(-4, 4), st.data())
def test_nw_never_violated(c, mags, logB, data):
    coeffs = np.array([0.0, *(x * 10**m for x, m in zip(c, mags))])
    d = len(coeffs) - 1
    j = data.draw(st.integers(1, d))
    if coeffs[j] == 0:
        return
    B = 2.0**logB
    assert abs(oscillatory_brute(coeffs, ONE, B / 2, B)) <= nw_bound(coeffs[j], j, d, B)
