"""Dyadic size profiles of univariate polynomials via root localization.

On a centered dyadic shell |t| in [2^(k-1/2), 2^(k+1/2)) far from every root,
|psi(t)| behaves like c_k 2^(l_k k) with l_k the number of roots smaller than
2^k.  Shells within a factor C of a root modulus are exceptional.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .poly import UPoly


@dataclass(frozen=True)
class Exceptional:
    reason: str = "root"

    def __repr__(self) -> str:
        return f"Exceptional({self.reason})"


@dataclass(frozen=True)
class ShellSize:
    ell: int
    c: float
    log2_c: float


@dataclass(frozen=True)
class SizeProfile:
    shells: Mapping[int, Exceptional | ShellSize]
    C: float
    roots: tuple[complex, ...]

    def exceptional(self) -> list[int]:
        return [k for k, v in self.shells.items() if isinstance(v, Exceptional)]

    def regular(self) -> dict[int, ShellSize]:
        return {k: v for k, v in self.shells.items() if isinstance(v, ShellSize)}


def exceptional_bound(degree: int, C: float) -> int:
    return degree * math.ceil(2 * math.log2(C) + 1)


def shell_interval(k: int) -> tuple[float, float]:
    return 2.0 ** (k - 0.5), 2.0 ** (k + 0.5)


def _log_abs_on_shell(psi: UPoly, k: int, lead_log2: float, roots: np.ndarray):
    """(min, max) of log2|psi| over the shell, endpoints and real critical points."""
    lo, hi = shell_interval(k)
    cand = [lo, hi]
    d = psi.derivative()
    if not d.is_zero() and d.degree >= 1:
        for r in d.roots():
            if abs(r.imag) <= 1e-9 * max(1.0, abs(r.real)):
                x = abs(r.real)
                if lo < x < hi:
                    cand.append(x)
    xs = np.array(cand)
    xs = np.concatenate([xs, -xs])
    # product form is accurate even when coefficients are huge or tiny
    vals = np.full(xs.shape, lead_log2)
    for r in roots:
        vals = vals + np.log2(np.abs(xs - r))
    return float(vals.min()), float(vals.max())


def crw_decompose(psi: UPoly, k_range: tuple[int, int], C: float = 4.0) -> SizeProfile:
    """Size profile of ``psi`` on the shells k_range[0] <= k <= k_range[1].

    A shell is exceptional when 2^k / C < |r| < C 2^k for a nonzero root r, or
    when the exact max/min of |psi| over the shell exceeds C^2 (the latter can
    only happen for high degree relative to C).  On the other shells l_k
    counts roots with |r| < 2^k and c_k is chosen at the geometric midpoint of
    the range of |psi(t)| / 2^(l_k k), so the ratio lies in [1/C, C].
    """
    if C <= 1:
        raise ValueError("comparability constant must exceed 1")
    if psi.is_zero():
        raise ValueError("psi is identically zero")
    if psi[0] != 0:
        raise ValueError("psi(0) must vanish")
    k0, k1 = int(k_range[0]), int(k_range[1])
    if k1 < k0:
        raise ValueError("empty shell range")
    roots = psi.roots()
    if len(roots) != psi.degree or not np.all(np.isfinite(roots)):
        raise ArithmeticError("root finding failed for psi")
    lead = abs(float(psi[psi.degree]))
    lead_log2 = math.log2(lead)
    mods = np.abs(roots)
    nonzero = mods[mods > 0]
    logC = math.log2(C)
    shells: dict[int, Exceptional | ShellSize] = {}
    for k in range(k0, k1 + 1):
        if nonzero.size and np.any(np.abs(np.log2(nonzero) - k) < logC):
            shells[k] = Exceptional("root")
            continue
        ell = int(np.count_nonzero(mods < 2.0**k))
        lmin, lmax = _log_abs_on_shell(psi, k, lead_log2, roots)
        if lmax - lmin > 2 * logC:
            shells[k] = Exceptional("comparability")
            continue
        log2_c = 0.5 * (lmin + lmax) - ell * k
        shells[k] = ShellSize(ell=ell, c=2.0**log2_c, log2_c=log2_c)
    return SizeProfile(shells=shells, C=float(C), roots=tuple(complex(r) for r in roots))


def shell_ratio(psi: UPoly, k: int, size: ShellSize, t) -> np.ndarray:
    """|psi(t)| / (c_k 2^(l_k k)) evaluated in log space."""
    t = np.asarray(t, dtype=float)
    roots = psi.roots()
    logv = np.full(t.shape, math.log2(abs(float(psi[psi.degree]))))
    for r in roots:
        logv = logv + np.log2(np.abs(t - r))
    return 2.0 ** (logv - size.log2_c - size.ell * k)


def shell_samples(k: int, n: int = 64) -> np.ndarray:
    """n points with |t| ~ 2^k, half of each sign, log-spaced inside the shell."""
    lo, hi = shell_interval(k)
    half = n // 2
    pos = np.exp(np.linspace(math.log(lo), math.log(hi), half + 2)[1:-1])
    return np.concatenate([-pos[::-1], pos])
