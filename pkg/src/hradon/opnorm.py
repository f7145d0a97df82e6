"""Discretized fiber operators, their norms, and multiplier sup sweeps."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .audit import DEFAULT_C0, partition_L1_L2
from .bump import BumpFunction, TruncationSet, make_bump
from .multiplier import eval_multiplier_grid
from .oscillatory import BumpRow, PhasePoly, eval_Ij_result
from .poly import Polynomial2, slice_decomposition
from .quad import QuadratureError, frac_mul
from .transform import transform_of


@dataclass(frozen=True)
class KernelMatrix:
    y: np.ndarray
    t: np.ndarray
    weights: np.ndarray
    entries: np.ndarray
    note: str = ""

    def __post_init__(self):
        if self.entries.shape != (len(self.y), len(self.t)) or len(self.weights) != len(self.t):
            raise ValueError("kernel matrix dimensions do not match its grid")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("kernel matrix has non-finite entries")

    @property
    def shape(self):
        return self.entries.shape


def annulus_grid(m: int, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform points on 2^m <= |y| <= 2^(m+1), half on each side, with
    trapezoid weights per side."""
    if size < 4 or size % 2:
        raise ValueError("grid size must be an even integer >= 4")
    half = size // 2
    pos = np.linspace(2.0**m, 2.0 ** (m + 1), half)
    h = pos[1] - pos[0]
    w = np.full(half, h)
    w[0] = w[-1] = h / 2
    return np.concatenate([-pos[::-1], pos]), np.concatenate([w[::-1], w])


def kernel_matrix(kernel: Callable[[np.ndarray, np.ndarray], np.ndarray],
                  y: np.ndarray, t: np.ndarray, weights: np.ndarray) -> KernelMatrix:
    """Collocation matrix K(y_i, t_l) w_l of an arbitrary vectorized kernel."""
    Y, T = np.meshgrid(y, t, indexing="ij")
    return KernelMatrix(y, t, weights, np.asarray(kernel(Y, T), dtype=complex) * weights[None, :])


def _affine_phase_data(P: Polynomial2, p0: int):
    """(c10, psi1, psi0) when the phase of m_I is affine in s, else None."""
    if p0 != 1:
        return None
    sd = slice_decomposition(P, p0)
    if not sd.phi.is_zero() and sd.phi.degree > 1:
        return None
    if any(p != 1 for p in sd.active()):
        return None
    psi1 = sd.psi.get(1)
    return float(sd.phi[1]), psi1, sd.psi0


def build_Slambda_matrix(P: Polynomial2, p0: int, F: TruncationSet, lam: float, m: int,
                         grid_size: int = 256, bump: BumpFunction | None = None,
                         C0: int = DEFAULT_C0, tol: float = 1e-10) -> KernelMatrix:
    """sum over I with (m, I) in L2 of m_I(lam, y_i, t_l) w_l on the annulus |y|, |t| ~ 2^m.

    F is filtered here; an empty filtered set gives the zero matrix.
    """
    bump = bump or make_bump(4)
    y, w = annulus_grid(m, grid_size)
    _, L2 = partition_L1_L2(F, m, C0)
    K = np.zeros((len(y), len(y)), dtype=complex)
    if not L2 or lam == 0:
        note = "empty L2 set" if not L2 else "lambda = 0"
        return KernelMatrix(y, y.copy(), w, K, note)
    by_k: dict[int, list[int]] = {}
    for _, (j, k) in L2:
        by_k.setdefault(k, []).append(j)
    U = y[:, None] - y[None, :]
    aff = _affine_phase_data(P, p0)
    trans = transform_of(bump)
    for k, js in sorted(by_k.items()):
        fv = bump.f(U * 2.0 ** (-k))
        ii, ll = np.nonzero(fv)
        if ii.size == 0:
            continue
        yy, uu = y[ii], U[ii, ll]
        if aff is not None:
            c10, psi1, psi0 = aff
            slope = lam * (2.0 * yy + c10 + (psi1(uu) if psi1 is not None else 0.0))
            h0 = frac_mul(lam, psi0(uu)) if not psi0.is_zero() else np.zeros(uu.shape)
            acc = np.zeros(ii.size, dtype=complex)
            for j in sorted(js):
                acc += trans(np.ldexp(slope, j))
            vals = acc * fv[ii, ll] * np.exp(2j * np.pi * h0)
        else:
            vals = np.zeros(ii.size, dtype=complex)
            for n, (a, b) in enumerate(zip(ii, ll)):
                Q = PhasePoly.assemble(P, p0, lam, y[a], y[b])
                row = BumpRow(bump, U[a, b] * 2.0 ** (-k))
                for j in sorted(js):
                    r = eval_Ij_result(Q, j, row, tol)
                    if not r.converged:
                        raise QuadratureError(f"I_j did not converge at I={(j, k)}", r)
                    vals[n] += r.value
        K[ii, ll] += 2.0 ** (-k) * vals
    return KernelMatrix(y, y.copy(), w, K * w[None, :])


class NormConvergenceError(ArithmeticError):
    pass


def _lanczos_top(A: np.ndarray, v0: np.ndarray, tol: float, max_iter: int) -> float:
    n = A.shape[1]
    op = LinearOperator((n, n), matvec=lambda x: A.conj().T @ (A @ x), dtype=complex)
    try:
        vals = eigsh(op, k=1, which="LA", v0=v0, tol=tol, maxiter=max_iter,
                     return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NormConvergenceError(f"Lanczos did not reach tol={tol} in {max_iter} restarts") from exc
    return math.sqrt(max(float(vals[0].real), 0.0))


def operator_norm(K: KernelMatrix | np.ndarray, tol: float = 1e-10, max_iter: int = 2000) -> float:
    """Largest singular value of the matrix, to relative tolerance tol.

    Power iteration on A* A stalls when the top singular values cluster,
    which the discretized fiber operators do (they come in near-degenerate
    pairs), so the Krylov space of the same iteration is used instead
    (implicitly restarted Lanczos).  The start is the all-ones vector; a
    second deterministic start (an alternating ramp) guards against a start
    lying in an invariant subspace that misses the top singular vector, and
    the larger estimate is returned.
    """
    A = np.asarray(K.entries if isinstance(K, KernelMatrix) else K, dtype=complex)
    if A.size == 0 or not np.any(A):
        return 0.0
    n = A.shape[1]
    if n < 3:
        return float(np.linalg.norm(A, 2))
    ramp = np.where(np.arange(n) % 2 == 0, 1.0, -1.0) * (1.0 + np.arange(n) / n)
    return max(_lanczos_top(A, np.ones(n, dtype=complex), tol, max_iter),
               _lanczos_top(A, ramp.astype(complex), tol, max_iter))


# ---------------------------------------------------------------------------
# multiplier sup sweeps


@dataclass(frozen=True)
class GridSpec:
    """count log-spaced points on [lo, hi]; the default is 33 per decade
    over six decades centred at 1."""
    lo: float = 1e-3
    hi: float = 1e3
    count: int = 199

    def __post_init__(self):
        if not (0 < self.lo <= self.hi) or self.count < 1:
            raise ValueError("grid needs 0 < min <= max and count >= 1")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 3:
            raise ValueError(f"grid spec {text!r} should be min,max,count")
        return cls(float(parts[0]), float(parts[1]), int(parts[2]))

    def points(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.logspace(math.log10(self.lo), math.log10(self.hi), self.count)

    def as_dict(self) -> dict:
        return {"min": self.lo, "max": self.hi, "count": self.count}


@dataclass(frozen=True)
class SweepReport:
    Ns: tuple[int, ...]
    sups: tuple[float, ...]
    argmax: tuple[tuple[float, float], ...]
    errors: tuple[float, ...]
    slope: float
    variation: float
    lam_grid: dict = field(default_factory=dict)
    eta_grid: dict = field(default_factory=dict)
    tol: float = 1e-8

    def strictly_increasing(self) -> bool:
        return all(b > a + ea + eb for a, b, ea, eb in
                   zip(self.sups, self.sups[1:], self.errors, self.errors[1:]))

    def as_dict(self) -> dict:
        return {
            "N": list(self.Ns), "sup": list(self.sups),
            "argmax": [list(a) for a in self.argmax], "error_bound": list(self.errors),
            "fitted_slope": self.slope, "relative_variation": self.variation,
            "lambda_grid": self.lam_grid, "eta_grid": self.eta_grid, "tol": self.tol,
        }


def _sup_one(args):
    P, N, lams, etas, r, tol = args
    bump = make_bump(r)
    F = TruncationSet.square(N)
    best, arg, emax = -1.0, (math.nan, math.nan), 0.0
    for lam in lams:
        v, e = eval_multiplier_grid(P, F, float(lam), etas, bump, tol)
        if not np.all(np.isfinite(e)):
            raise QuadratureError(f"multiplier did not converge at N={N}, lambda={lam}")
        a = np.abs(v)
        i = int(np.argmax(a))
        emax = max(emax, float(e.max()))
        if a[i] > best:
            best, arg = float(a[i]), (float(lam), float(etas[i]))
    return best, arg, emax


def sweep_multiplier_sup(P: Polynomial2, Ns: Sequence[int], lam_grid: GridSpec | None = None,
                         eta_grid: GridSpec | None = None, bump: BumpFunction | None = None,
                         tol: float = 1e-8, workers: int = 1) -> SweepReport:
    """sup over the grid of |M| for square truncations F_N; the slope is the
    least-squares slope of sup against N."""
    Ns = tuple(int(n) for n in Ns)
    if any(n <= 0 for n in Ns) or any(a >= b for a, b in zip(Ns, Ns[1:])):
        raise ValueError("truncation sizes must be positive and increasing")
    lam_grid = lam_grid or GridSpec()
    eta_grid = eta_grid or GridSpec()
    bump = bump or make_bump(4)
    lams, etas = lam_grid.points(), eta_grid.points()
    jobs = [(P, n, lams, etas, bump.r, tol) for n in Ns]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            res = list(ex.map(_sup_one, jobs))
    else:
        res = [_sup_one(a) for a in jobs]
    sups = tuple(r[0] for r in res)
    slope = float(np.polyfit(np.array(Ns, dtype=float), np.array(sups), 1)[0]) if len(Ns) > 1 else 0.0
    lo, hi = min(sups), max(sups)
    variation = (hi - lo) / lo if lo > 0 else (0.0 if hi == 0 else math.inf)
    return SweepReport(Ns, sups, tuple(r[1] for r in res), tuple(r[2] for r in res), slope,
                       variation, lam_grid.as_dict(), eta_grid.as_dict(), tol)
