"""Pure numpy versions of the compiled kernels (same signatures, same results)."""
from __future__ import annotations

import numpy as np


def _clenshaw_rows(coef: np.ndarray, x: np.ndarray) -> np.ndarray:
    b1 = np.zeros(x.shape)
    b2 = np.zeros(x.shape)
    x2 = 2.0 * x
    for m in range(coef.shape[1] - 1, 0, -1):
        b1, b2 = coef[:, m] + x2 * b1 - b2, b1
    return coef[:, 0] + x * b1 - b2


def table_eval(table: np.ndarray, delta: float, wmax: float, omega: np.ndarray) -> np.ndarray:
    """Odd extension of the tabulated sine transform at each omega (0 beyond wmax)."""
    omega = np.ascontiguousarray(omega, dtype=float)
    a = np.abs(omega)
    out = np.zeros(omega.shape)
    live = a < wmax
    if not np.any(live):
        return out
    al = a[live]
    idx = np.minimum((al / delta).astype(np.int64), table.shape[0] - 1)
    x = (al - (idx + 0.5) * delta) * (2.0 / delta)
    out[live] = np.sign(omega[live]) * _clenshaw_rows(table[idx], x)
    return out


def table_dyadic_sum(table: np.ndarray, delta: float, wmax: float, x: np.ndarray,
                     scales: np.ndarray) -> np.ndarray:
    """sum over scales c of table_eval(c * x), accumulated in the order given."""
    x = np.ascontiguousarray(x, dtype=float)
    out = np.zeros(x.shape)
    for c in np.asarray(scales, dtype=float):
        out += table_eval(table, delta, wmax, c * x)
    return out
