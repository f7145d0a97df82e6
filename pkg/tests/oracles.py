"""Brute-force reference integrals used by the tests.

Everything here is deliberately naive: fixed composite rules with panels
small enough to resolve the oscillation, no adaptivity, no transforms.
"""
import math

import numpy as np

from hradon.bump import derivative_norms

_X, _W = np.polynomial.legendre.leggauss(20)


def composite_gl(f, a, b, panels):
    """Composite 20-point Gauss-Legendre of a vectorized f on [a, b]."""
    e = np.linspace(a, b, panels + 1)
    lo, hi = e[:-1, None], e[1:, None]
    x = 0.5 * (hi - lo) * _X[None, :] + 0.5 * (hi + lo)
    return complex(np.sum(0.5 * (hi - lo) * _W[None, :] * f(x)))


def simpson(f, a, b, n):
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return complex(h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum()))


def phase_cycles(coeffs, a, b, n=4001):
    """Total variation of the phase polynomial over [a, b], in cycles."""
    x = np.linspace(a, b, n)
    return float(np.abs(np.diff(np.polynomial.polynomial.polyval(x, coeffs))).sum())


def oscillatory_brute(coeffs, amp, a, b, per_cycle=4):
    """integral of e^{2 pi i Q} amp over [a, b]; Q polynomial coefficients."""
    n = max(64, int(per_cycle * phase_cycles(coeffs, a, b)) + 1)
    return composite_gl(lambda x: np.exp(2j * np.pi * np.polynomial.polynomial.polyval(x, coeffs))
                        * amp(x), a, b, n)


def mI_brute(P, p0, I, lam, y, t, bump):
    """m_I straight from its definition, with the phase built from P directly."""
    j, k = I
    u = y - t
    sc = 2.0**j

    def integrand(s):
        ph = lam * (2 * y * s**p0 + P(s, u))
        return np.exp(2j * np.pi * ph) * 2.0 ** (-j - k) * bump.f(s / sc) * bump.f(u * 2.0**-k)

    total = 0j
    for lo, hi in ((-2 * sc, -sc), (-sc, -0.5 * sc), (0.5 * sc, sc), (sc, 2 * sc)):
        x = np.linspace(lo, hi, 2001)
        cyc = float(np.abs(np.diff(lam * (2 * y * x**p0 + P(x, u)))).sum())
        total += composite_gl(integrand, lo, hi, max(64, int(8 * cyc) + 1))
    return total


def transform_tail_bound(bump, omega, nmax=13):
    """Upper bound for |integral e^{2 pi i omega a} f(a) da| by repeated
    integration by parts, using the L1 norms and jumps of f's derivatives."""
    o = 2 * math.pi * abs(omega)
    D = [derivative_norms(bump, n) for n in range(nmax + 1)]
    return min(sum(D[m][1] / o ** (m + 1) for m in range(n)) + D[n][0] / o**n
               for n in range(1, nmax + 1))


def _nodes(lo, hi, cycles):
    n = max(8, int(2 * cycles) + 1)
    e = np.linspace(lo, hi, n + 1)
    a, b = e[:-1, None], e[1:, None]
    return ((0.5 * (b - a) * _X[None, :] + 0.5 * (b + a)).ravel(),
            (0.5 * (b - a) * _W[None, :]).ravel())


def multiplier_st_brute(F, lam, eta, bump, omega_cut=40.0):
    """sum over F of the double integral of e^{2 pi i (eta t + lam s t)} phi^(I)(s, t).

    In scaled variables each rectangle is
        int int e^{2 pi i (lam 2^{j+k} a b + eta 2^k b)} f(a) f(b) da db.
    Rectangles whose inner frequency |lam 2^{j+k} b| stays above omega_cut
    are not integrated; the integration-by-parts bound for them is returned
    as the second value.
    """
    f1 = 2 * derivative_norms(bump, 0)[0]
    total, tail = 0j, 0.0
    pieces = ((-2.0, -1.0), (-1.0, -0.5), (0.5, 1.0), (1.0, 2.0))
    for j, k in F:
        w = lam * 2.0 ** (j + k)
        if abs(w) * 0.5 >= omega_cut:
            tail += f1 * transform_tail_bound(bump, abs(w) * 0.5)
            continue
        ax, aw = map(np.concatenate, zip(*(_nodes(lo, hi, abs(w) * 2 * (hi - lo) + 1)
                                           for lo, hi in pieces)))
        fa = aw * bump.f(ax)
        for lo, hi in pieces:
            bx, bw = _nodes(lo, hi, (abs(w) * 2 + abs(eta) * 2.0**k) * (hi - lo) + 1)
            for c in range(0, len(bx), 512):
                b = bx[c:c + 512]
                inner = np.exp(2j * np.pi * w * np.outer(b, ax)) @ fa
                total += np.sum(bw[c:c + 512] * bump.f(b) * np.exp(2j * np.pi * eta * 2.0**k * b)
                                * inner)
    return total, tail
