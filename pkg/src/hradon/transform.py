"""Fourier transform of the odd bump profile and Chebyshev/Fourier moments.

For the profile f(u) = eta(u)/u,

    E(w) = integral e^{2 pi i w u} f(u) du = 2i S(w),
    S(w) = integral_{1/2}^{2} sin(2 pi w u) f(u) du,

so E is purely imaginary and odd.  S is tabulated as piecewise Chebyshev
series on [0, wmax); beyond wmax it is replaced by zero and the dropped part
is controlled by the integration-by-parts envelope ``envelope``.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import jv

from . import backend
from .bump import BumpFunction, derivative_norms, gauss_legendre, make_bump

TABLE_DELTA = 1.0 / 8.0
TABLE_WMAX = 512.0
TABLE_DEGREE = 20


def _frac_product(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """frac(c_i x_j) without the rounding of the full product.

    c has few significant bits (panel centres are multiples of 1/16), so
    splitting x into a 36-bit head and a small tail keeps c * head exact.
    """
    head = np.round(x * 2.0**36) / 2.0**36
    tail = x - head
    return np.mod(np.outer(c, head), 1.0) + np.outer(c, tail)


class BumpTransform:
    """Tabulated E for a given bump; immutable after construction."""

    def __init__(self, bump: BumpFunction, delta: float = TABLE_DELTA,
                 wmax: float = TABLE_WMAX, degree: int = TABLE_DEGREE):
        self.bump = bump
        self.delta = float(delta)
        self.wmax = float(wmax)
        self.degree = int(degree)
        self.table = self._build()
        self._ibp = self._ibp_data(24)

    def _build(self) -> np.ndarray:
        npan = int(round(self.wmax / self.delta))
        centres = (np.arange(npan) + 0.5) * self.delta
        half = 0.5 * self.delta
        # composite Gauss-Legendre, at most 8 cycles per sub-panel at wmax
        x, w = gauss_legendre(40)
        sub = min(1.0 / 16.0, 8.0 / self.wmax)
        nodes, weights = [], []
        for a, b in ((0.5, 1.0), (1.0, 2.0)):
            edges = np.linspace(a, b, int(round((b - a) / sub)) + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                nodes.append(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)
                weights.append(0.5 * (hi - lo) * w)
        sig = np.concatenate(nodes)
        w = np.concatenate(weights)
        m = np.arange(self.degree + 1)
        # e^{i z x} = sum_m eps_m i^m J_m(z) T_m(x) expands each panel in x
        B = jv(m[None, :], 2.0 * np.pi * half * sig[:, None]) * (w * self.bump.f(sig))[:, None]
        # rows c_i = (i + 1/2) delta; write i = 64 a + b and multiply two
        # small exponential tables instead of exponentiating every entry
        blk = 64
        nb = -(-npan // blk)
        fine = np.exp(2j * np.pi * _frac_product((np.arange(blk) + 0.5) * self.delta, sig))
        coarse = np.exp(2j * np.pi * _frac_product(np.arange(nb) * blk * self.delta, sig))
        # Im(eps_m i^m (X + iY)) picks X or Y with a sign by m mod 4
        sgn = np.array([1.0, 1.0, -1.0, -1.0])[m % 4] * np.where(m == 0, 1.0, 2.0)
        use_re = (m % 2) == 1
        table = np.empty((npan, self.degree + 1))
        for a in range(nb):
            A = coarse[a][None, :] * fine
            X = A.real @ B
            Y = A.imag @ B
            rows = slice(a * blk, min(npan, (a + 1) * blk))
            n_rows = rows.stop - rows.start
            table[rows] = (np.where(use_re, X, Y) * sgn)[:n_rows]
        return np.ascontiguousarray(table)

    def _ibp_data(self, nmax: int):
        L = np.empty(nmax + 1)
        J = np.empty(nmax + 1)
        for n in range(nmax + 1):
            L[n], J[n] = derivative_norms(self.bump, n)
        # quadrature of |f^(n)| is not exact at sign changes; pad
        return 1.01 * L, 1.01 * J

    def sine(self, omega) -> np.ndarray:
        """S(omega), odd in omega."""
        return backend.table_eval(self.table, self.delta, self.wmax, np.asarray(omega, dtype=float))

    def __call__(self, omega) -> np.ndarray:
        return 2j * self.sine(omega)

    def dyadic_sine_sum(self, x, exponents) -> np.ndarray:
        """sum over j in exponents of S(2^j x)."""
        scales = np.ldexp(1.0, np.asarray(sorted(exponents), dtype=np.int64)) if len(exponents) else np.zeros(0)
        return backend.table_dyadic_sum(self.table, self.delta, self.wmax,
                                        np.asarray(x, dtype=float), scales)

    def envelope(self, omega) -> np.ndarray:
        """Rigorous upper bound for |E(omega)| from repeated integration by parts."""
        a = np.abs(np.atleast_1d(np.asarray(omega, dtype=float)))
        L, J = self._ibp
        best = np.full(a.shape, 2.0 * L[0])
        pos = a > 0
        z = 2.0 * np.pi * a[pos]
        acc = np.zeros(z.shape)
        for n in range(1, len(L)):
            cand = 2.0 * (acc + L[n] / z**n)
            best[pos] = np.minimum(best[pos], cand)
            acc = acc + J[n] / z ** (n + 1)
        return best if np.ndim(omega) else float(best[0])

    def cutoff_error(self) -> float:
        """Bound on |E| beyond the table range (value treated as zero there)."""
        return float(self.envelope(self.wmax))

    def threshold(self, level: float) -> float:
        """Smallest tabulation point w with envelope(w') <= level for all w' >= w."""
        lo, hi = 1e-3, 1e6
        if self.envelope(lo) <= level:
            return 0.0
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if self.envelope(mid) <= level:
                hi = mid
            else:
                lo = mid
        return hi


@lru_cache(maxsize=8)
def bump_transform(r: int = 4) -> BumpTransform:
    return BumpTransform(make_bump(r))


def transform_of(bump: BumpFunction) -> BumpTransform:
    return bump_transform(bump.r)


# Chebyshev interpolation on first-kind points and Fourier moments of T_m.

@lru_cache(maxsize=16)
def cheb_points(n: int) -> np.ndarray:
    return np.cos(np.pi * (np.arange(n) + 0.5) / n)


@lru_cache(maxsize=16)
def _cheb_matrix(n: int) -> np.ndarray:
    th = np.pi * (np.arange(n) + 0.5) / n
    M = (2.0 / n) * np.cos(np.outer(np.arange(n), th))
    M[0] *= 0.5
    return M


def cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients (last axis) from values at cheb_points(n)."""
    n = values.shape[-1]
    return values @ _cheb_matrix(n).T


_GL_MOMENT = 128
_SMALL_OMEGA = 64.0


def cheb_moments(omega, n: int, cycles=None) -> np.ndarray:
    """mu_m(w) = integral_{-1}^{1} e^{i w x} T_m(x) dx for m < n, shape (..., n).

    Gauss-Legendre for |w| <= 64 (exact to rounding); the forward three-term
    recurrence, stable while m < |w|, above that.  ``cycles`` may carry
    frac(w / 2 pi) computed more accurately than w itself allows.
    """
    if n > _SMALL_OMEGA:
        raise ValueError("moment order too large for the recurrence switch")
    w = np.asarray(omega, dtype=float)
    flat = w.ravel()
    out = np.empty((flat.size, n), dtype=complex)
    small = np.abs(flat) <= _SMALL_OMEGA
    if np.any(small):
        x, gw = gauss_legendre(_GL_MOMENT)
        T = np.cos(np.outer(np.arccos(x), np.arange(n)))  # (nodes, n)
        out[small] = (np.exp(1j * np.outer(flat[small], x)) * gw) @ T
    big = ~small
    if np.any(big):
        wb = flat[big]
        iw = 1j * wb
        if cycles is None:
            ep = np.exp(1j * wb)
        else:
            ep = np.exp(2j * np.pi * np.asarray(cycles, dtype=float).ravel()[big])
        em = np.conj(ep)
        mu = np.empty((wb.size, max(n, 3)), dtype=complex)
        mu[:, 0] = 2.0 * ep.imag / wb
        mu[:, 1] = (ep + em - mu[:, 0]) / iw
        beta = lambda k: ep - (-1) ** k * em  # noqa: E731
        mu[:, 2] = (beta(2) - 4.0 * mu[:, 1]) / iw
        for m in range(2, n - 1):
            mu[:, m + 1] = (m + 1) / iw * (beta(m + 1) / (m + 1) - beta(m - 1) / (m - 1)
                                           + iw * mu[:, m - 1] / (m - 1) - 2.0 * mu[:, m])
        out[big] = mu[:, :n]
    return out.reshape(w.shape + (n,))
