"""Littlewood-Paley bump and the dyadic decomposition of the kernel 1/(st)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator

import numpy as np
from numpy.polynomial import polynomial as npoly

# The bump's support splits into these pieces; on each piece eta is a polynomial.
PIECES = ((0.5, 1.0), (1.0, 2.0))
BREAKS = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


def smoothstep_coeffs(r: int) -> np.ndarray:
    """Increasing-degree coefficients of the degree 2r+1 smoothstep on [0, 1].

    S(0) = 0, S(1) = 1 and the first r derivatives vanish at both ends.
    """
    c = np.zeros(2 * r + 2)
    for i in range(r + 1):
        c[r + 1 + i] = (-1) ** i * math.comb(r + i, i) * math.comb(2 * r + 1, r - i)
    return c


@dataclass(frozen=True)
class BumpFunction:
    """theta = 1 on [-1, 1], 0 off [-2, 2], C^r; eta(u) = theta(u) - theta(2u)."""

    r: int = 4
    _step: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 2:
            raise ValueError("smoothness r must be an integer >= 2")
        object.__setattr__(self, "_step", smoothstep_coeffs(int(self.r)))

    def step(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return npoly.polyval(x, self._step)

    def theta(self, u):
        a = np.abs(np.asarray(u, dtype=float))
        out = np.where(a <= 1.0, 1.0, np.where(a >= 2.0, 0.0, 1.0 - self.step(a - 1.0)))
        return out if out.ndim else float(out)

    def eta(self, u):
        a = np.abs(np.asarray(u, dtype=float))
        lo = a <= 1.0
        # one Horner pass for both pieces, same operation order as polyval
        x = np.where(lo, 2.0 * a - 1.0, a - 1.0)
        y = np.full(a.shape, self._step[-1])
        for c in self._step[-2::-1]:
            y = y * x + c
        out = np.where(lo, y, 1.0 - y)
        out[(a <= 0.5) | (a >= 2.0)] = 0.0
        return out if out.ndim else float(out)

    def f(self, u):
        """The odd profile eta(u)/u, zero off 1/2 < |u| < 2."""
        u = np.asarray(u, dtype=float)
        e = self.eta(u)
        safe = np.where(u == 0.0, 1.0, u)
        out = np.where(e != 0.0, e / safe, 0.0)
        return out if out.ndim else float(out)

    @cached_property
    def piece_polys(self) -> tuple[np.ndarray, np.ndarray]:
        """eta on [1/2, 1] and [1, 2] as increasing-degree polynomials in u."""
        s = npoly.Polynomial(self._step)
        lo = s(npoly.Polynomial([-1.0, 2.0]))
        hi = 1.0 - s(npoly.Polynomial([-1.0, 1.0]))
        return lo.coef.copy(), hi.coef.copy()

    def f_derivative(self, u, n: int):
        """n-th derivative of eta(u)/u for 1/2 < u < 2 (right limits at 1)."""
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape)
        for (a, b), coef in zip(PIECES, self.piece_polys):
            mask = (u >= a) & (u < b) if a == 1.0 else (u > a) & (u < b)
            if not np.any(mask):
                continue
            x = u[mask]
            acc = np.zeros(x.shape)
            for i in range(n + 1):
                dp = npoly.polyval(x, npoly.polyder(coef, i)) if i else npoly.polyval(x, coef)
                m = n - i
                acc += math.comb(n, i) * dp * (-1) ** m * math.factorial(m) / x ** (m + 1)
            out[mask] = acc
        return out

    @cached_property
    def f_l1(self) -> float:
        """Integral of |eta(u)/u| over the full support (both signs)."""
        return 2.0 * derivative_norms(self, 0)[0]


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def derivative_norms(bump: BumpFunction, n: int, nodes: int = 200) -> tuple[float, float]:
    """(L1 norm on (1/2, 2), sum of jumps) of the n-th derivative of eta(u)/u.

    Jumps are taken at 1/2, 1, 2 (the function vanishes outside the support).
    Polynomial/monomial pieces are integrated with Gauss-Legendre on a fine
    split so the L1 norm is exact up to rounding.
    """
    x, w = gauss_legendre(nodes)
    total = 0.0
    for a, b in PIECES:
        edges = np.linspace(a, b, 33)
        lo, hi = edges[:-1, None], edges[1:, None]
        xs = 0.5 * (hi - lo) * x[None, :] + 0.5 * (hi + lo)
        vals = np.abs(bump.f_derivative(xs.ravel(), n)).reshape(xs.shape)
        total += float(np.sum(0.5 * (hi - lo) * w[None, :] * vals))
    jumps = 0.0
    lo_coef, hi_coef = bump.piece_polys
    for point, below, above in ((0.5, None, lo_coef), (1.0, lo_coef, hi_coef), (2.0, hi_coef, None)):
        vb = _piece_derivative(below, point, n) if below is not None else 0.0
        va = _piece_derivative(above, point, n) if above is not None else 0.0
        jumps += abs(va - vb)
    return total, jumps


def _piece_derivative(coef: np.ndarray, x: float, n: int) -> float:
    acc = 0.0
    for i in range(n + 1):
        dp = npoly.polyval(x, npoly.polyder(coef, i)) if i else npoly.polyval(x, coef)
        m = n - i
        acc += math.comb(n, i) * dp * (-1) ** m * math.factorial(m) / x ** (m + 1)
    return float(acc)


def make_bump(r: int = 4) -> BumpFunction:
    return BumpFunction(r)


@dataclass(frozen=True)
class TruncationSet:
    """Finite set of dyadic rectangle indices I = (j, k), iterated lexicographically."""

    indices: frozenset[tuple[int, int]]

    def __init__(self, indices: Iterable[tuple[int, int]] = ()):
        object.__setattr__(self, "indices", frozenset((int(j), int(k)) for j, k in indices))

    @classmethod
    def square(cls, N: int) -> "TruncationSet":
        return cls((j, k) for j in range(-N, N + 1) for k in range(-N, N + 1))

    @classmethod
    def rectangle(cls, jr: tuple[int, int], kr: tuple[int, int]) -> "TruncationSet":
        return cls((j, k) for j in range(jr[0], jr[1] + 1) for k in range(kr[0], kr[1] + 1))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, item) -> bool:
        return tuple(item) in self.indices

    def filter(self, pred: Callable[[int, int], bool]) -> "TruncationSet":
        return TruncationSet(I for I in self.indices if pred(*I))

    def by_k(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for j, k in sorted(self.indices):
            out.setdefault(k, []).append(j)
        return out

    def by_j(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for j, k in sorted(self.indices):
            out.setdefault(j, []).append(k)
        return {j: sorted(v) for j, v in sorted(out.items())}


def phi_scaled(I: tuple[int, int], bump: BumpFunction, s, t):
    """2^(-j-k) phi(2^-j s, 2^-k t) with phi(u, v) = eta(u) eta(v) / (uv)."""
    j, k = I
    u = np.asarray(s, dtype=float) * 2.0 ** (-j)
    v = np.asarray(t, dtype=float) * 2.0 ** (-k)
    out = 2.0 ** (-j - k) * np.asarray(bump.f(u)) * np.asarray(bump.f(v))
    return out if np.ndim(out) else float(out)


def reconstruct_kernel(F: TruncationSet, bump: BumpFunction, s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(s == 0) or np.any(t == 0):
        raise ValueError("kernel reconstruction needs s != 0 and t != 0")
    total = np.zeros(np.broadcast(s, t).shape)
    for I in F:
        total = total + phi_scaled(I, bump, s, t)
    return total if total.ndim else float(total)


def partition_sum(bump: BumpFunction, u, N: int):
    u = np.asarray(u, dtype=float)
    return sum(bump.eta(u * 2.0 ** (-j)) for j in range(-N, N + 1))


def cancellation_residual(bump: BumpFunction, k: int, t: float, axis: str = "s",
                          tol: float = 1e-13) -> float:
    """|integral of phi^(I) over one variable| with the other variable fixed at t.

    axis "s": I = (k, 0), integrate in s.  axis "t": I = (0, k), integrate in t.
    Only the integrated variable's shell matters for the cancellation.
    """
    from .quad import integrate_oscillatory

    if axis not in ("s", "t"):
        raise ValueError("axis must be 's' or 't'")
    fixed = float(bump.f(t))
    if fixed == 0.0:
        return 0.0
    scale = 2.0**k
    amp = lambda x: 2.0 ** (-k) * bump.f(x * 2.0 ** (-k)) * fixed  # noqa: E731
    res = integrate_oscillatory(
        np.zeros(1), amp, (-2.0 * scale, 2.0 * scale), tol=tol,
        breakpoints=[b * scale for b in BREAKS],
    )
    if not res.converged:
        raise ArithmeticError(f"quadrature did not converge: {res.note}")
    return abs(res.value)
