"""A priori bounds for integrals of e^{2 pi i Q(s)} with polynomial Q."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import numpy as np
from numpy.polynomial import polynomial as npoly


def _coeffs(Q) -> np.ndarray:
    c = getattr(Q, "coeffs", Q)
    return np.atleast_1d(np.asarray(c, dtype=float))


def _trim(coeffs, a: float, b: float) -> np.ndarray:
    """Drop trailing zeros and top terms too small to change a value on [a, b]
    in double precision; such terms only add spurious far-away roots."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if len(c) <= 1:
        return c
    R = max(1.0, abs(a), abs(b))
    size = np.abs(c) * R ** np.arange(len(c))
    big = size.max()
    n = len(c)
    while n > 1 and size[n - 1] <= 1e-20 * big:
        n -= 1
    return c[:n]


def real_roots_in(coeffs: np.ndarray, a: float, b: float) -> list[float]:
    """Real roots of the polynomial strictly inside (a, b)."""
    c = _trim(coeffs, a, b)
    if len(c) <= 1:
        return []
    r = npoly.polyroots(c)
    scale = max(1.0, abs(a), abs(b))
    out = [float(z.real) for z in r if abs(z.imag) <= 1e-10 * max(1.0, abs(z))]
    return sorted(x for x in out if a - 1e-12 * scale < x < b + 1e-12 * scale)


def min_abs_on_interval(coeffs: np.ndarray, a: float, b: float) -> float:
    """min of |p| on [a, b]: zero if p has a root there, else the smallest of
    the endpoint values and the values at interior critical points."""
    c = _trim(coeffs, a, b)
    if len(c) == 0:
        return 0.0
    if len(c) == 1:
        return abs(float(c[0]))
    if real_roots_in(c, a, b):
        return 0.0
    pts = [a, b, *real_roots_in(npoly.polyder(c), a, b)]
    pts = [min(max(x, a), b) for x in pts]
    vals = np.abs(npoly.polyval(np.array(pts), c))
    # a sign change between sample points also signals a root
    sv = np.sign(npoly.polyval(np.array(sorted(pts)), c))
    if np.any(sv[:-1] * sv[1:] <= 0):
        return 0.0
    return float(vals.min())


def vdc_constant(k: int) -> float:
    return 10.0 * 2.0**k


def vdc_bound(Q, interval, k: int) -> float:
    """van der Corput bound C_k (min |Q^(k)|)^(-1/k), C_k = 10 * 2^k.

    The phase is 2 pi Q, so the bound covers the classical constants with
    room to spare.  For k = 1, Q' must be monotone on the interval.
    """
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    a, b = float(interval[0]), float(interval[1])
    if b < a:
        a, b = b, a
    c = _coeffs(Q)
    dk = npoly.polyder(c, k) if len(c) > k else np.zeros(1)
    m = min_abs_on_interval(dk, a, b)
    if m <= 0.0:
        raise ValueError("the k-th derivative vanishes on the interval; bound inapplicable")
    if k == 1:
        d2 = npoly.polyder(c, 2) if len(c) > 2 else np.zeros(1)
        if np.any(d2) and real_roots_in(d2, a, b):
            raise ValueError("Q' is not monotone on the interval; k = 1 bound inapplicable")
    return vdc_constant(k) * m ** (-1.0 / k)


@lru_cache(maxsize=1)
def load_constants() -> dict:
    with resources.files("hradon").joinpath("constants.json").open("r") as fh:
        return json.load(fh)


def nw_constant(d: int) -> float:
    table = load_constants()["nw_constant"]
    key = str(int(d))
    if key not in table:
        raise ValueError(f"no calibrated constant for degree {d}")
    return float(table[key]["value"])


def nw_bound(h_j: float, j: int, d: int, B: float) -> float:
    """C_d |h_j|^(-1/d) B^(1 - j/d): bounds |integral_{B/2}^{B} e^{2 pi i Q}| for
    every Q of degree <= d whose s^j coefficient is h_j."""
    if h_j == 0:
        raise ValueError("h_j must be nonzero")
    if not (1 <= j <= d):
        raise ValueError("need 1 <= j <= d")
    if B <= 0:
        raise ValueError("B must be positive")
    return nw_constant(d) * abs(h_j) ** (-1.0 / d) * B ** (1.0 - j / d)


def nw_ratio(value: float, h_j: float, j: int, d: int, B: float) -> float:
    """|integral| divided by the bound without its constant."""
    return abs(value) * abs(h_j) ** (1.0 / d) * B ** (j / d - 1.0)


def growth_threshold() -> float:
    return float(load_constants()["growth_threshold"]["value"])

