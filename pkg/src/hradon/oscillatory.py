"""The one-dimensional oscillatory integrals m_I and I_j and their sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bump import BumpFunction, TruncationSet, phi_scaled
from .poly import Polynomial2, slice_decomposition
from .quad import QuadratureError, QuadResult, integrate_oscillatory
from .transform import transform_of


@dataclass(frozen=True)
class PhasePoly:
    """Q(s) = sum_p h[p] s^p (in cycles) with the parameters it was built from.

    h[0] is the s-independent phase lam psi_0(y - t); it does not affect
    moduli but is part of m_I.
    """

    h: tuple[float, ...]
    lam: float = 0.0
    y: float = 0.0
    t: float = 0.0
    p0: int = 1

    @classmethod
    def assemble(cls, P: Polynomial2, p0: int, lam: float, y: float, t: float) -> "PhasePoly":
        """Coefficients of lam (2 y s^p0 + P(s, y - t)) for a reduced P."""
        sd = slice_decomposition(P, p0)
        u = float(y) - float(t)
        deg = max([p0, sd.phi.degree if not sd.phi.is_zero() else 0, *sd.psi.keys()])
        h = np.zeros(deg + 1)
        for p, c in sd.phi.coeffs.items():
            h[p] += float(c)
        for p, psi in sd.psi.items():
            h[p] += float(psi(u))
        if not sd.psi0.is_zero():
            h[0] += float(sd.psi0(u))
        h[p0] += 2.0 * float(y)
        return cls(tuple(float(lam) * h), float(lam), float(y), float(t), int(p0))

    @classmethod
    def from_coeffs(cls, coeffs) -> "PhasePoly":
        return cls(tuple(float(c) for c in coeffs))

    @property
    def coeffs(self) -> np.ndarray:
        return np.asarray(self.h, dtype=float)

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coeffs[1:])[0]
        return int(nz[-1]) + 1 if nz.size else 0

    def __call__(self, s):
        return np.polynomial.polynomial.polyval(np.asarray(s, dtype=float), self.coeffs)

    def scaled(self, j: int) -> "PhasePoly":
        """s -> Q(2^j s)."""
        c = np.ldexp(self.coeffs, j * np.arange(len(self.h)))
        return PhasePoly(tuple(c), self.lam, self.y, self.t, self.p0)


@dataclass(frozen=True)
class BumpRow:
    """Phi(a) = f(a) f(v): the rectangle bump restricted to a fixed second variable."""

    bump: BumpFunction
    v: float

    @cached_property
    def weight(self) -> float:
        return float(self.bump.f(self.v))

    def __call__(self, a):
        return self.bump.f(a) * self.weight


def _pieces(scale: float):
    return ((-2.0 * scale, -0.5 * scale), (0.5 * scale, 2.0 * scale))


def _sum_pieces(phase, amp, scale: float, tol: float, method: str = "levin") -> QuadResult:
    val, err, panels, ok, notes = 0j, 0.0, 0, True, []
    for lo, hi in _pieces(scale):
        r = integrate_oscillatory(phase, amp, (lo, hi), tol=tol / 2,
                                  breakpoints=(-scale, scale), method=method)
        val += r.value
        err += r.error_estimate
        panels += r.panels
        ok &= r.converged
        if r.note:
            notes.append(r.note)
    return QuadResult(val, err, panels, ok, "; ".join(sorted(set(notes))))


def eval_mI_result(P: Polynomial2, p0: int, I: tuple[int, int], lam: float, y: float, t: float,
                   bump: BumpFunction, tol: float = 1e-9) -> QuadResult:
    """m_I by direct quadrature in the unscaled variable s."""
    j, k = I
    u = float(y) - float(t)
    if float(bump.f(u * 2.0 ** (-k))) == 0.0:
        return QuadResult(0j, 0.0, 0)
    Q = PhasePoly.assemble(P, p0, lam, y, t)
    amp = lambda s: phi_scaled(I, bump, s, u)  # noqa: E731
    return _sum_pieces(Q.coeffs, amp, 2.0**j, tol)


def eval_mI(P: Polynomial2, p0: int, I: tuple[int, int], lam: float, y: float, t: float,
            bump: BumpFunction, tol: float = 1e-9) -> complex:
    r = eval_mI_result(P, p0, I, lam, y, t, bump, tol)
    if not r.converged:
        raise QuadratureError(f"m_I did not converge ({r.note})", r)
    return complex(r.value)


def eval_Ij_result(Q: PhasePoly, j: int, row: BumpRow, tol: float = 1e-9) -> QuadResult:
    """integral e^{2 pi i Q(s)} 2^-j Phi(2^-j s) ds, evaluated as
    integral e^{2 pi i Q(2^j a)} Phi(a) da.  Affine phases use the bump transform."""
    w = row.weight
    if w == 0.0:
        return QuadResult(0j, 0.0, 0)
    Qj = Q.scaled(j)
    c = Qj.coeffs
    if Qj.degree <= 1:
        trans = transform_of(row.bump)
        slope = float(c[1]) if len(c) > 1 else 0.0
        val = complex(trans(slope)) * w * np.exp(2j * np.pi * math.fmod(c[0], 1.0))
        err = (2e-15 + (trans.cutoff_error() if abs(slope) >= trans.wmax else 0.0)) * abs(w)
        return QuadResult(val, err, 0)
    return _sum_pieces(c, row, 1.0, tol)


def eval_Ij(Q: PhasePoly, j: int, row: BumpRow, tol: float = 1e-9) -> complex:
    r = eval_Ij_result(Q, j, row, tol)
    if not r.converged:
        raise QuadratureError(f"I_j did not converge ({r.note})", r)
    return complex(r.value)


@dataclass(frozen=True)
class SWResult:
    total: float
    normalized: float
    error_estimate: float
    terms: int


def sw_sum_detailed(P: Polynomial2, p0: int, F: TruncationSet, lam: float, y: float, t: float,
                    bump: BumpFunction, tol: float = 1e-9) -> SWResult:
    """sum over F of |m_I(lam, y, t)|, computed through I_j rows."""
    u = float(y) - float(t)
    Q = PhasePoly.assemble(P, p0, lam, y, t) if len(F) else None
    total, err, terms = 0.0, 0.0, 0
    for j, k in F:  # lexicographic
        row = BumpRow(bump, u * 2.0 ** (-k))
        if row.weight == 0.0:
            continue
        r = eval_Ij_result(Q, j, row, tol)
        if not r.converged:
            raise QuadratureError(f"I_j did not converge at I={(j, k)} ({r.note})", r)
        total += 2.0 ** (-k) * abs(r.value)
        err += 2.0 ** (-k) * r.error_estimate
        terms += 1
    return SWResult(total, abs(u) * total, err, terms)


def sw_sum(P: Polynomial2, p0: int, F: TruncationSet, lam: float, y: float, t: float,
           bump: BumpFunction, tol: float = 1e-9) -> float:
    return sw_sum_detailed(P, p0, F, lam, y, t, bump, tol).total

