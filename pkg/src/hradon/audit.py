"""Numerical audits of the decay estimates and the index partitions used in the
L^2 argument: key quantities A_p(k), the K1/K2 split, the D_k differences,
decay of I_j, phase truncation errors and the R_r partition of j."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .bump import BumpFunction, make_bump
from .crw import crw_decompose, ShellSize
from .oscillatory import BumpRow, PhasePoly, eval_Ij_result
from .poly import Polynomial2, slice_decomposition
from .quad import QuadratureError

DEFAULT_C0 = 5


def default_deltas(L: int) -> list[float]:
    """delta_i = 10^(-3 (L - i)) for i = 1 .. L-1."""
    return [10.0 ** (-3 * (L - i)) for i in range(1, L)]


@dataclass(frozen=True)
class KeyQuantityContext:
    lam: float
    m: int
    p0: int
    profiles: Mapping[int, tuple[int, float]] = field(default_factory=dict)  # p -> (ell, c)

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")
        if self.p0 < 1:
            raise ValueError("p0 must be positive")
        for p, (ell, c) in self.profiles.items():
            if ell < 1 or not c > 0:
                raise ValueError(f"profile for p={p} needs ell >= 1 and c > 0")


def key_quantity_log2A(ctx: KeyQuantityContext, p_star: int, k: int,
                       profile: tuple[int, float] | None = None) -> float:
    ell, c = profile if profile is not None else ctx.profiles[p_star]
    lg = math.log2(abs(ctx.lam))
    return lg + math.log2(c) + ell * k - (p_star / ctx.p0) * (lg + ctx.m)


def key_quantity_A(ctx: KeyQuantityContext, p_star: int, k: int,
                   profile: tuple[int, float] | None = None) -> float:
    """|lam| c 2^(ell k) / (|lam| 2^m)^(p*/p0), formed from its base-2 logarithm."""
    e = key_quantity_log2A(ctx, p_star, k, profile)
    return 2.0**e if e < 1024 else math.inf


@dataclass(frozen=True)
class KPartition:
    K1: tuple[int, ...]
    K2: tuple[int, ...]
    K2p: Mapping[int, tuple[int, ...]]


def partition_K(ctx: KeyQuantityContext, P_set: Iterable[int], k_range: Sequence[int]) -> KPartition:
    """K1: every A_p(k) <= 1; K2: the rest, split by the p with the largest A_p
    (ties go to the smaller p)."""
    ps = sorted(set(P_set))
    ks = sorted(set(int(k) for k in k_range))
    K1, K2 = [], []
    K2p: dict[int, list[int]] = {p: [] for p in ps}
    for k in ks:
        logs = [key_quantity_log2A(ctx, p, k) for p in ps]
        if all(v <= 0.0 for v in logs):
            K1.append(k)
            continue
        K2.append(k)
        best = max(logs)
        winner = next(p for p, v in zip(ps, logs) if v == best)
        K2p[winner].append(k)
    return KPartition(tuple(K1), tuple(K2), {p: tuple(v) for p, v in K2p.items()})


def check_k_partition(part: KPartition, k_range: Sequence[int]) -> bool:
    ks = set(int(k) for k in k_range)
    K1, K2 = set(part.K1), set(part.K2)
    union = set()
    for v in part.K2p.values():
        if union & set(v):
            return False
        union |= set(v)
    return K1 | K2 == ks and not (K1 & K2) and union == K2


def partition_L1_L2(F: Iterable[tuple[int, int]], m: int, C0: int = DEFAULT_C0):
    """(m, I) goes to L1 when m <= k + C0 and to L2 otherwise (k < m - C0)."""
    L1, L2 = [], []
    for j, k in sorted(set((int(a), int(b)) for a, b in F)):
        (L1 if m <= k + C0 else L2).append((m, (j, k)))
    return L1, L2


def check_l_partition(F: Iterable[tuple[int, int]], m: int, C0: int) -> bool:
    F = sorted(set(F))
    L1, L2 = partition_L1_L2(F, m, C0)
    a = {I for _, I in L1}
    b = {I for _, I in L2}
    return not (a & b) and (a | b) == set(F) and all(k <= m - C0 for _, (_, k) in L2)


@dataclass(frozen=True)
class AppendixPartition:
    deltas: tuple[float, ...]
    profiles: tuple[tuple[int, int], ...]   # (p_r, ell_r), r = 1 .. L
    k: int
    sets: Mapping[int, tuple[int, ...]]     # r -> R_r

    def log2_theta(self, r: int, j: int) -> int:
        p, ell = self.profiles[r - 1]
        return ell * self.k + p * j


def _in_R(r: int, L: int, j: int, k: int, profiles, log_deltas) -> bool:
    lt = lambda i: profiles[i - 1][1] * k + profiles[i - 1][0] * j  # noqa: E731
    tl = lt(L)
    for i in range(1, r):
        if not (lt(i) - tl < log_deltas[i - 1]):
            return False
    if r < L:
        return lt(r) - tl >= log_deltas[r - 1]
    return True


def appendix_Rr_partition(j_range: Sequence[int], profiles: Sequence[tuple[int, int]], k: int,
                          deltas: Sequence[float] | None = None) -> AppendixPartition:
    """Sets R_1 .. R_L of j, with theta_r(k, j) = 2^(ell_r k + p_r j).

    ``profiles`` lists (p_r, ell_r) for r = 1 .. L with p_1 > p_2 > ... .
    Comparisons are made on exponents, theta_i < delta_i theta_L becoming
    log2 theta_i - log2 theta_L < log2 delta_i.
    """
    profiles = tuple((int(p), int(ell)) for p, ell in profiles)
    L = len(profiles)
    if L == 0:
        raise ValueError("need at least one profile")
    ps = [p for p, _ in profiles]
    if any(a <= b for a, b in zip(ps, ps[1:])):
        raise ValueError("profiles must have strictly decreasing p_r")
    deltas = tuple(default_deltas(L) if deltas is None else (float(d) for d in deltas))
    if len(deltas) != L - 1:
        raise ValueError(f"need {L - 1} deltas")
    if any(not (0 < d < 1) for d in deltas) or any(a >= b for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be strictly increasing in (0, 1)")
    log_d = [math.log2(d) for d in deltas]
    sets: dict[int, list[int]] = {r: [] for r in range(1, L + 1)}
    for j in sorted(set(int(x) for x in j_range)):
        for r in range(1, L + 1):
            if _in_R(r, L, j, k, profiles, log_d):
                sets[r].append(j)
                break
    return AppendixPartition(deltas, profiles, int(k), {r: tuple(v) for r, v in sets.items()})


def check_r_partition(part: AppendixPartition, j_range: Sequence[int]) -> bool:
    """Membership re-evaluated for every (r, j) independently: exactly one r per j."""
    L = len(part.profiles)
    log_d = [math.log2(d) for d in part.deltas]
    for j in set(int(x) for x in j_range):
        hits = [r for r in range(1, L + 1) if _in_R(r, L, j, part.k, part.profiles, log_d)]
        if len(hits) != 1 or j not in part.sets[hits[0]]:
            return False
    listed = [j for v in part.sets.values() for j in v]
    return len(listed) == len(set(listed)) == len(set(j_range))


# ---------------------------------------------------------------------------
# decay fits


@dataclass(frozen=True)
class DecayFit:
    C: float
    eps: float
    points: int
    x: tuple[float, ...]
    values: tuple[float, ...]


def fit_power_decay(x: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    """Least squares log2 v = log2 C - eps log2 x -> (C, eps)."""
    lx = np.log2(x)
    lv = np.log2(v)
    A = np.vstack([np.ones_like(lx), -lx]).T
    (c0, eps), *_ = np.linalg.lstsq(A, lv, rcond=None)
    return float(2.0**c0), float(eps)


def truncated_phase(P: Polynomial2, p0: int, lam: float, y: float, t: float,
                    keep_main: bool) -> PhasePoly:
    """lam [ (2 y s^p0 if keep_main) + sum_p c_{p,0} s^p + sum_{1 <= p < p0} psi_p(y - t) s^p ]."""
    sd = slice_decomposition(P, p0)
    u = float(y) - float(t)
    deg = max([p0, sd.phi.degree if not sd.phi.is_zero() else 0, *sd.psi.keys()])
    h = np.zeros(deg + 1)
    for p, c in sd.phi.coeffs.items():
        h[p] += float(c)
    for p, psi in sd.psi.items():
        if 1 <= p < p0:
            h[p] += float(psi(u))
    if keep_main:
        h[p0] += 2.0 * float(y)
    return PhasePoly(tuple(float(lam) * h), float(lam), float(y), float(t), int(p0))


NOISE_FLOOR = 1e-12


def check_Ij_decay(P: Polynomial2, p0: int, ctx: KeyQuantityContext, k: int,
                   j_range: Sequence[int], target: str | int = "h_p0",
                   bump: BumpFunction | None = None, y: float | None = None,
                   tol: float = 1e-13) -> DecayFit:
    """Fit |I_j| ~ C (|h| 2^(p j))^(-eps) over the j with |h| 2^(p j) >= 1.

    target "h_p0" uses the full phase at |y| = 2^m, |y - t| = 2^k; an integer
    p < p0 uses the phase truncated to the c_{p,0} and psi_p (p < p0) terms.
    Values under the quadrature noise floor are left out of the fit.
    """
    bump = bump or make_bump(4)
    y = float(2.0**ctx.m if y is None else y)
    t = y - 2.0**k
    if target == "h_p0":
        Q = PhasePoly.assemble(P, p0, ctx.lam, y, t)
        p = p0
    else:
        p = int(target)
        if not (1 <= p < p0):
            raise ValueError("an integer target must satisfy 1 <= p < p0")
        Q = truncated_phase(P, p0, ctx.lam, y, t, keep_main=False)
    h = Q.coeffs[p] if p < len(Q.coeffs) else 0.0
    if h == 0:
        raise ValueError(f"coefficient h_{p} vanishes for this configuration")
    row = BumpRow(bump, 1.0)
    xs, vs = [], []
    for j in sorted(set(int(x) for x in j_range)):
        x = abs(h) * 2.0 ** (p * j)
        if x < 1.0:
            continue
        r = eval_Ij_result(Q, j, row, tol)
        if not r.converged:
            raise QuadratureError(f"I_j did not converge at j={j} ({r.note})", r)
        v = abs(r.value)
        if v <= max(NOISE_FLOOR, 10 * r.error_estimate):
            continue
        xs.append(x)
        vs.append(v)
    if len(xs) < 3:
        raise ValueError("insufficient decaying samples to fit")
    C, eps = fit_power_decay(np.array(xs), np.array(vs))
    return DecayFit(C, eps, len(xs), tuple(xs), tuple(vs))


@dataclass(frozen=True)
class TruncationReport:
    difference: float
    scale: float
    ratio: float
    p1: int


def check_phase_truncation(Q_full: PhasePoly, Q_truncated: PhasePoly, j: int, bound_scale: float,
                           row: BumpRow | None = None, tol: float = 1e-13) -> TruncationReport:
    """|I_j(Q_full) - I_j(Q_truncated)| against bound_scale 2^(p1 j).

    The phases must differ in at most one coefficient, s^p1.
    """
    a, b = Q_full.coeffs, Q_truncated.coeffs
    n = max(len(a), len(b))
    a = np.pad(a, (0, n - len(a)))
    b = np.pad(b, (0, n - len(b)))
    diff = np.nonzero(a != b)[0]
    if len(diff) > 1:
        raise ValueError("phases differ in more than one coefficient")
    p1 = int(diff[0]) if len(diff) else 0
    scale = float(bound_scale) * 2.0 ** (p1 * j)
    if len(diff) == 0:
        return TruncationReport(0.0, scale, 0.0, p1)
    row = row or BumpRow(make_bump(4), 1.0)
    r1 = eval_Ij_result(PhasePoly.from_coeffs(a), j, row, tol)
    r2 = eval_Ij_result(PhasePoly.from_coeffs(b), j, row, tol)
    if not (r1.converged and r2.converged):
        raise QuadratureError("I_j did not converge in the truncation check")
    d = abs(r1.value - r2.value)
    return TruncationReport(d, scale, d / scale if scale > 0 else math.inf, p1)


# ---------------------------------------------------------------------------
# D_k differences


@dataclass(frozen=True)
class DkReport:
    k: int
    log2A: float
    lhs: float                     # max over samples of 2^k |D_k|
    samples: int
    rhs: float = math.nan          # A^eps (A <= 1) or A^-eps (A > 1) once eps is known
    ratio: float = math.nan

    def with_eps(self, eps: float) -> "DkReport":
        rhs = 2.0 ** (-eps * abs(self.log2A))
        return DkReport(self.k, self.log2A, self.lhs, self.samples, rhs, self.lhs / rhs)


@dataclass(frozen=True)
class DkSweep:
    """Fits on the two sides of A = 1; a side with fewer than two usable
    points has eps = nan and contributes no ratios."""
    reports: tuple[DkReport, ...]
    C_small: float
    eps_small: float
    C_large: float
    eps_large: float
    worst_ratio: float
    samples: int

    @property
    def eps(self) -> float:
        vals = [e for e in (self.eps_small, self.eps_large) if not math.isnan(e)]
        return min(vals)


def sample_configs(m: int, k: int, n: int, lam: float, rng: np.random.Generator):
    """(lam, y, t) with |y| ~ 2^m and |y - t| ~ 2^k (centred dyadic shells)."""
    out = []
    for _ in range(n):
        y = rng.choice([-1.0, 1.0]) * 2.0 ** (m + rng.uniform(-0.5, 0.5))
        u = rng.choice([-1.0, 1.0]) * 2.0 ** (k + rng.uniform(-0.5, 0.5))
        out.append((float(lam), float(y), float(y - u)))
    return out


def check_difference_Dk(P: Polynomial2, p0: int, p_star: int, ctx: KeyQuantityContext, k: int,
                        samples: Sequence[tuple[float, float, float]], js: Sequence[int],
                        bump: BumpFunction | None = None, tol: float = 1e-12,
                        eps: float | None = None) -> DkReport:
    """lhs = max over samples of 2^k |sum_j (m_I - m_I^*)|, I = (j, k), where
    m_I^* drops the psi_{p*} term from the phase.  With ``eps`` the report
    also carries rhs = min(A^eps, A^-eps) and lhs / rhs."""
    bump = bump or make_bump(4)
    sd = slice_decomposition(P, p0)
    psi = sd.psi.get(p_star)
    log2A = key_quantity_log2A(ctx, p_star, k)
    worst = 0.0
    if psi is not None and not psi.is_zero():
        for lam, y, t in samples:
            Q = PhasePoly.assemble(P, p0, lam, y, t)
            c = Q.coeffs.copy()
            c[p_star] -= lam * float(psi(y - t))
            Qs = PhasePoly(tuple(c), lam, y, t, p0)
            row = BumpRow(bump, (y - t) * 2.0 ** (-k))
            total = 0j
            for j in sorted(set(js)):
                r1 = eval_Ij_result(Q, j, row, tol)
                r2 = eval_Ij_result(Qs, j, row, tol)
                if not (r1.converged and r2.converged):
                    raise QuadratureError(f"I_j did not converge at j={j}")
                total += r1.value - r2.value
            # 2^k m_I = I_j, so 2^k |D_k| is the modulus of this sum
            worst = max(worst, abs(total))
    rep = DkReport(k, log2A, worst, len(samples))
    return rep.with_eps(eps) if eps is not None else rep


def sweep_difference_Dk(P: Polynomial2, p0: int, p_star: int, ctx: KeyQuantityContext,
                        ks: Sequence[int], js: Sequence[int], n_samples: int, seed: int = 0,
                        bump: BumpFunction | None = None,
                        lams: Sequence[float] | None = None) -> DkSweep:
    """check_difference_Dk over ks (and lams, default ctx.lam), then fit
    lhs ~ C 2^(-eps |log2 A|) separately for A < 1 and A > 1."""
    rng = np.random.default_rng(seed)
    raw = []
    for lam in (lams if lams is not None else [ctx.lam]):
        c = KeyQuantityContext(float(lam), ctx.m, ctx.p0, ctx.profiles)
        for k in ks:
            smp = sample_configs(c.m, k, n_samples, c.lam, rng)
            raw.append(check_difference_Dk(P, p0, p_star, c, k, smp, js, bump))
    fits = {}
    for side, sel in (("small", lambda a: a < 0), ("large", lambda a: a > 0)):
        pts = [(abs(r.log2A), r.lhs) for r in raw if sel(r.log2A) and r.lhs > NOISE_FLOOR]
        if len(pts) >= 2:
            fits[side] = fit_power_decay(np.array([2.0**a for a, _ in pts]),
                                         np.array([b for _, b in pts]))
        else:
            fits[side] = (math.nan, math.nan)
    if all(math.isnan(f[1]) for f in fits.values()):
        raise ValueError("insufficient nonzero differences to fit")
    reports = []
    for r in raw:
        eps = fits["small" if r.log2A < 0 else "large"][1] if r.log2A != 0 else math.nan
        reports.append(r if math.isnan(eps) else r.with_eps(eps))
    ratios = [r.ratio for r in reports if not math.isnan(r.ratio)]
    return DkSweep(tuple(reports), fits["small"][0], fits["small"][1],
                   fits["large"][0], fits["large"][1], max(ratios), n_samples)


def profiles_from_polynomial(P: Polynomial2, p0: int, k_range: tuple[int, int],
                             C: float = 4.0) -> dict[int, dict[int, ShellSize]]:
    """Regular-shell size data (ell_p, c_p) of every psi_p, per shell k."""
    sd = slice_decomposition(P, p0)
    out = {}
    for p in sd.active():
        prof = crw_decompose(sd.psi[p], k_range, C)
        out[p] = prof.regular()
    return out
