"""The truncated multiplier

    M(lam, eta) = sum_{(j,k) in F} integral e^{2 pi i (eta t + lam P(s, t))} phi^{(j,k)}(s, t) ds dt.

After the substitution s = 2^j a, t = 2^k b each rectangle becomes an integral
of f(a) f(b) over the unit shells.  When P is affine in s, P = s g(t) + h(t),
the a-integral is exactly E(2^j lam g(2^k b)) with E the bump transform, so a
whole row of rectangles reduces to one integral in b of

    f(b) e^{2 pi i (eta 2^k b + lam h(2^k b))} H_k(lam g(2^k b)),
    H_k(x) = sum_{j in F, row k} E(2^j x).

If h is at most linear the eta dependence is a pure Fourier factor, so the
b-integrand is approximated once by piecewise Chebyshev series and every eta
on a grid is handled by Chebyshev-Fourier moments.  Polynomials affine in t
get the symmetric treatment (one eta at a time); anything else falls back to
nested adaptive quadrature per rectangle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bump import BREAKS, BumpFunction, TruncationSet
from .poly import Polynomial2, UPoly
from .quad import QuadratureError, frac_mul, integrate_oscillatory
from .transform import BumpTransform, cheb_coeffs, cheb_moments, cheb_points, transform_of

PIECES4 = ((-2.0, -1.0), (-1.0, -0.5), (0.5, 1.0), (1.0, 2.0))
CHEB_N = 24
MAX_SLICE_PANELS = 200000


@dataclass(frozen=True)
class MultiplierResult:
    value: complex
    error_estimate: float
    method: str
    converged: bool = True
    note: str = ""

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class AffineForm:
    """P = v * g(w) + lin * w + rest(w) + const with v the affine variable."""

    var: str
    g: np.ndarray      # increasing float coefficients in the other variable
    lin: float
    rest: np.ndarray   # degree >= 2 part of h (zeros below), may be all zero
    const: float

    @property
    def rest_is_zero(self) -> bool:
        return not np.any(self.rest)


def affine_form(P: Polynomial2, var: str) -> AffineForm | None:
    split = P.affine_split(var)
    if split is None:
        return None
    g, h = split
    gd = g.dense_float() if not g.is_zero() else np.zeros(1)
    hd = h.dense_float() if not h.is_zero() else np.zeros(1)
    const = float(hd[0])
    lin = float(hd[1]) if len(hd) > 1 else 0.0
    rest = hd.copy()
    rest[: min(2, len(rest))] = 0.0
    return AffineForm(var, gd, lin, rest, const)


def _poly_scaled_eval(coeffs: np.ndarray, k: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_q coeffs[q] (2^k x)^q; 2^k x is formed exactly by ldexp."""
    t = np.ldexp(x, k)
    out = np.zeros(x.shape)
    for c in coeffs[::-1]:
        out = out * t + c
    return out


# ---------------------------------------------------------------------------
# s-affine rows, eta-vectorized


@dataclass
class RowApproximation:
    """Chebyshev panels of f(b) * sum_j S(2^j lam g(2^k b)) for every row k."""

    k: np.ndarray
    centre: np.ndarray
    half: np.ndarray
    coef: np.ndarray
    error: float
    n_rows: int
    table_error: float
    converged: bool = True


def approximate_rows(form: AffineForm, F: TruncationSet, lam: float, trans: BumpTransform,
                     tol: float, n: int = CHEB_N) -> RowApproximation:
    rows = F.by_k()
    if not rows:
        return RowApproximation(np.zeros(0, int), np.zeros(0), np.zeros(0), np.zeros((0, n)),
                                0.0, 0, 0.0)
    groups: dict[tuple[int, ...], list[int]] = {}
    for k, js in rows.items():
        groups.setdefault(tuple(js), []).append(k)
    per_row = tol / len(rows)
    dens = per_row / 3.0  # error allowance per unit length of b
    pts = cheb_points(n)
    out_k, out_c, out_h, out_coef = [], [], [], []
    err = 0.0
    converged = True
    jmax = 0
    for js, ks in sorted(groups.items()):
        jmax = max(jmax, len(js))
        kk = np.repeat(np.asarray(ks, dtype=np.int64), len(PIECES4))
        lo = np.tile([p[0] for p in PIECES4], len(ks))
        hi = np.tile([p[1] for p in PIECES4], len(ks))
        used = 0
        while len(kk):
            used += len(kk)
            c = 0.5 * (lo + hi)
            h = 0.5 * (hi - lo)
            b = c[:, None] + h[:, None] * pts[None, :]
            kb = np.broadcast_to(kk[:, None], b.shape)
            x = lam * _poly_scaled_eval(form.g, kb.ravel(), b.ravel())
            vals = trans.bump.f(b.ravel()) * trans.dyadic_sine_sum(x, js)
            co = cheb_coeffs(vals.reshape(b.shape))
            tail = 2.0 * np.abs(co[:, -4:]).sum(axis=1)
            tiny = h < 1e-9
            ok = (tail <= dens) | tiny
            if used > MAX_SLICE_PANELS:
                ok[:] = True
                converged = False
            err += float(np.sum(2.0 * h[ok] * tail[ok]))
            out_k.append(kk[ok])
            out_c.append(c[ok])
            out_h.append(h[ok])
            out_coef.append(co[ok])
            bad = ~ok
            mid = c[bad]
            kk = np.concatenate([kk[bad], kk[bad]])
            lo, hi = np.concatenate([lo[bad], mid]), np.concatenate([mid, hi[bad]])
    # table rounding and the cutoff beyond the table, per evaluation of the row sum
    table_err = len(rows) * jmax * (2e-15 + trans.cutoff_error()) * trans.bump.f_l1
    return RowApproximation(np.concatenate(out_k), np.concatenate(out_c), np.concatenate(out_h),
                            np.concatenate(out_coef), err, len(rows), table_err, converged)


def apply_rows(approx: RowApproximation, eta_eff: np.ndarray) -> np.ndarray:
    """sum over rows and panels of integral e^{2 pi i eta 2^k b} G_k(b) db, times 2i."""
    eta_eff = np.asarray(eta_eff, dtype=float)
    total = np.zeros(eta_eff.shape, dtype=complex)
    if approx.k.size == 0:
        return total
    n = approx.coef.shape[1]
    # panel frequency scale 2^k h is an exact power of two
    mant, expo = np.frexp(approx.half)
    if np.any(mant != 0.5):
        raise AssertionError("panel half-widths must be powers of two")
    e = approx.k + expo - 1
    shifted = np.ldexp(approx.centre, approx.k)
    for ev in np.unique(e):
        idx = np.nonzero(e == ev)[0]
        scale = math.ldexp(1.0, int(ev))
        omega = 2.0 * np.pi * eta_eff * scale
        mu = cheb_moments(omega, n, cycles=frac_mul(eta_eff, scale))
        contrib = mu @ approx.coef[idx].T
        ph = np.exp(2j * np.pi * frac_mul(eta_eff[:, None], shifted[idx][None, :]))
        total += (contrib * ph) @ approx.half[idx]
    return 2j * total


# ---------------------------------------------------------------------------
# one-eta paths


def _row_levin(form: AffineForm, trans: BumpTransform, lam: float, eta: float, k: int,
               js: list[int], tol: float):
    """One row for an s-affine P whose remaining pure part has degree >= 2."""
    eta_eff = eta + lam * form.lin
    ph = np.zeros(max(2, len(form.rest)))
    ph[1] = eta_eff * 2.0**k
    for q in range(2, len(form.rest)):
        ph[q] = lam * form.rest[q] * 2.0 ** (k * q)

    def amp(b):
        x = lam * _poly_scaled_eval(form.g, np.full(b.shape, k), b)
        return 2j * trans.bump.f(b) * trans.dyadic_sine_sum(x, js)

    val, err, ok = 0j, 0.0, True
    for lo, hi in ((-2.0, -0.5), (0.5, 2.0)):
        r = integrate_oscillatory(ph, amp, (lo, hi), tol=tol / 2, breakpoints=(-1.0, 1.0),
                                  method="levin")
        val += r.value
        err += r.error_estimate
        ok &= r.converged
    return val, err, ok


def _col_levin(form: AffineForm, trans: BumpTransform, lam: float, eta: float, j: int,
               ks: list[int], tol: float):
    """One column for a t-affine P = t g(s) + h(s)."""
    ph = np.zeros(max(1, len(form.rest), 2))
    ph[1] = lam * form.lin * 2.0**j
    for q in range(2, len(form.rest)):
        ph[q] = lam * form.rest[q] * 2.0 ** (j * q)

    def amp(a):
        x = eta + lam * _poly_scaled_eval(form.g, np.full(a.shape, j), a)
        return 2j * trans.bump.f(a) * trans.dyadic_sine_sum(x, ks)

    val, err, ok = 0j, 0.0, True
    for lo, hi in ((-2.0, -0.5), (0.5, 2.0)):
        r = integrate_oscillatory(ph, amp, (lo, hi), tol=tol / 2, breakpoints=(-1.0, 1.0),
                                  method="levin")
        val += r.value
        err += r.error_estimate
        ok &= r.converged
    return val, err, ok


MAX_INNER_PANELS = 1 << 14
_CHUNK = 1 << 21  # complex entries per evaluation block


def _inner_family(C: np.ndarray, bump: BumpFunction, tol: float):
    """integral over the unit shells of e^{2 pi i sum_p C[i, p] a^p} f(a) da for
    every row i of C (C[:, 0] is ignored).

    Uniform Gauss-Kronrod panels with at most half a cycle of phase each; a
    row whose Kronrod/Gauss gap exceeds tol gets its panel count doubled.
    Returns (values, error bounds, converged flags).
    """
    from .quad import EPS, G_W, GK_W, GK_X, HALF_CYCLE

    nb, deg1 = C.shape
    powers = np.arange(deg1)
    vals = np.zeros(nb, dtype=complex)
    errs = np.zeros(nb)
    ok = np.ones(nb, dtype=bool)
    for lo, hi in PIECES4:
        var = np.abs(C[:, 1:]) @ np.abs(hi ** powers[1:] - lo ** powers[1:])
        mag = np.abs(C[:, 1:]) @ (2.0 ** powers[1:])
        n = np.maximum(1, 2 ** np.ceil(np.log2(np.maximum(var / HALF_CYCLE, 1.0)))).astype(np.int64)
        todo = np.arange(nb)
        while todo.size:
            ns = n[todo]
            over = ns > MAX_INNER_PANELS
            ok[todo[over]] = False
            todo = todo[~over]
            retry = []
            for m in np.unique(n[todo]):
                rows = todo[n[todo] == m]
                e = np.linspace(lo, hi, int(m) + 1)
                c, h = 0.5 * (e[:-1] + e[1:]), 0.5 * (e[1:] - e[:-1])
                x = (c[:, None] + h[:, None] * GK_X[None, :]).ravel()
                fx = bump.f(x)
                xp = x[None, :] ** powers[1:, None]
                step = max(1, _CHUNK // x.size)
                for r0 in range(0, rows.size, step):
                    rr = rows[r0:r0 + step]
                    ph = C[rr, 1:] @ xp
                    fv = (np.exp(2j * np.pi * ph) * fx).reshape(rr.size, int(m), 21)
                    k = (fv @ GK_W) * h[None, :]
                    g = (fv @ G_W) * h[None, :]
                    err = np.abs(k - g).sum(axis=1)
                    prec = 8.0 * np.pi * EPS * mag[rr] * (np.abs(fv) @ GK_W * h[None, :]).sum(axis=1)
                    bad = err > tol / len(PIECES4)
                    good = rr[~bad]
                    vals[good] += k.sum(axis=1)[~bad]
                    errs[good] += err[~bad] + prec[~bad]
                    retry.extend(rr[bad].tolist())
            todo = np.array(sorted(retry), dtype=np.int64)
            n[todo] *= 2
    return vals, errs, ok


def rectangle_nested(P: Polynomial2, bump: BumpFunction, lam: float, eta: float,
                     I: tuple[int, int], tol: float):
    """One rectangle by nested quadrature (any polynomial).

    The outer integral in b is adaptive; the inner integrals in a are done
    for all outer nodes at once by ``_inner_family``.
    """
    j, k = I
    sj, sk = 2.0**j, 2.0**k
    items = list(P.items())
    deg_s = max((p for (p, _), _ in items), default=0)
    inner_tol = tol / (8.0 * bump.f_l1)
    failures = []

    # terms without s, together with eta t, form a polynomial phase in b that
    # the outer rule handles with oscillation-aware paneling
    deg_t0 = max((q for (p, q), _ in items if p == 0), default=1)
    outer = np.zeros(max(deg_t0, 1) + 1)
    outer[1] = eta * sk
    for (p, q), c in items:
        if p == 0:
            outer[q] += lam * float(c) * sk**q
    inner_err = [0.0]

    def inner(bvals):
        t = sk * np.asarray(bvals, dtype=float)
        C = np.zeros((t.size, deg_s + 1))
        for (p, q), c in items:
            if p:
                C[:, p] += lam * float(c) * t**q * sj**p
        v, e, good = _inner_family(C, bump, inner_tol)
        if not good.all():
            failures.append(int((~good).sum()))
        inner_err[0] = max(inner_err[0], float(e.max(initial=0.0)))
        return v * bump.f(bvals)

    val, err, ok = 0j, 0.0, True
    for lo, hi in ((-2.0, -0.5), (0.5, 2.0)):
        r = integrate_oscillatory(outer, inner, (lo, hi), tol=tol / 4,
                                  breakpoints=(-1.0, 1.0))
        val += r.value
        err += r.error_estimate
        ok &= r.converged
    err += inner_err[0] * bump.f_l1
    return val, err, ok and not failures


# ---------------------------------------------------------------------------
# public entry points


def choose_method(P: Polynomial2) -> str:
    fs = affine_form(P, "s")
    if fs is not None:
        return "row-moments" if fs.rest_is_zero else "row-levin"
    if affine_form(P, "t") is not None:
        return "column-levin"
    return "nested"


def eval_multiplier_detailed(P: Polynomial2, F: TruncationSet, lam: float, eta: float,
                             bump: BumpFunction, tol: float = 1e-8,
                             method: str | None = None) -> MultiplierResult:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    lam, eta = float(lam), float(eta)
    method = method or choose_method(P)
    if len(F) == 0:
        return MultiplierResult(0j, 0.0, method)
    trans = transform_of(bump)
    const = float(P.coeff(0, 0))
    glob = np.exp(2j * np.pi * frac_mul(lam, const)) if const else 1.0
    if method == "row-moments":
        form = affine_form(P, "s")
        if form is None or not form.rest_is_zero:
            raise ValueError("row-moments needs P = s g(t) + c t + const")
        ap = approximate_rows(form, F, lam, trans, 0.9 * tol)
        val = apply_rows(ap, np.array([eta + lam * form.lin]))[0]
        err = ap.error + ap.table_error
        return MultiplierResult(complex(glob * val), err, method, ap.converged and err <= tol,
                                "" if ap.converged else "panel budget exceeded")
    val, err, ok = 0j, 0.0, True
    if method == "row-levin":
        form = affine_form(P, "s")
        if form is None:
            raise ValueError("row-levin needs P affine in s")
        rows = F.by_k()
        for k, js in sorted(rows.items()):
            v, e, o = _row_levin(form, trans, lam, eta, k, js, 0.9 * tol / len(rows))
            val, err, ok = val + v, err + e, ok and o
        err += len(rows) * max(map(len, rows.values())) * (2e-15 + trans.cutoff_error()) * bump.f_l1
    elif method == "column-levin":
        form = affine_form(P, "t")
        if form is None:
            raise ValueError("column-levin needs P affine in t")
        cols = F.by_j()
        for j, ks in sorted(cols.items()):
            v, e, o = _col_levin(form, trans, lam, eta, j, ks, 0.9 * tol / len(cols))
            val, err, ok = val + v, err + e, ok and o
        err += len(cols) * max(map(len, cols.values())) * (2e-15 + trans.cutoff_error()) * bump.f_l1
    elif method == "nested":
        Pn = P.without([(0, 0)])
        for I in F:
            v, e, o = rectangle_nested(Pn, bump, lam, eta, I, tol / len(F))
            val, err, ok = val + v, err + e, ok and o
    else:
        raise ValueError(f"unknown method {method!r}")
    note = "" if ok else "quadrature did not converge"
    return MultiplierResult(complex(glob * val), err, method, ok and err <= tol, note)


def eval_multiplier(P: Polynomial2, F: TruncationSet, lam: float, eta: float,
                    bump: BumpFunction, tol: float = 1e-8) -> complex:
    """Truncated multiplier at (lam, eta); raises QuadratureError if not converged."""
    res = eval_multiplier_detailed(P, F, lam, eta, bump, tol)
    if not res.converged:
        raise QuadratureError(f"multiplier did not converge ({res.note or 'tolerance not met'})")
    return res.value


def eval_multiplier_grid(P: Polynomial2, F: TruncationSet, lam: float, etas,
                         bump: BumpFunction, tol: float = 1e-8):
    """Multiplier along a vector of eta at fixed lam -> (values, error bounds)."""
    etas = np.asarray(etas, dtype=float)
    form = affine_form(P, "s")
    if form is not None and form.rest_is_zero:
        trans = transform_of(bump)
        if len(F) == 0:
            return np.zeros(etas.shape, dtype=complex), np.zeros(etas.shape)
        ap = approximate_rows(form, F, lam, trans, 0.9 * tol)
        vals = apply_rows(ap, etas + lam * form.lin)
        const = float(P.coeff(0, 0))
        if const:
            vals = vals * np.exp(2j * np.pi * frac_mul(lam, const))
        err = np.full(etas.shape, ap.error + ap.table_error)
        if not ap.converged:
            err[:] = np.inf
        return vals, err
    vals = np.empty(etas.shape, dtype=complex)
    errs = np.empty(etas.shape)
    for i, e in enumerate(etas):
        r = eval_multiplier_detailed(P, F, lam, e, bump, tol)
        vals[i] = r.value
        errs[i] = r.error_estimate if r.converged else np.inf
    return vals, errs
