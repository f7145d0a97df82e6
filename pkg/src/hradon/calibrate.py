"""Regenerate constants.json: the Nagel-Wainger constants and the growth threshold.

Run as ``python -m hradon.calibrate``.  By scaling, |integral_{B/2}^{B} e^{2 pi i Q}|
over B^{1 - j/d} |h_j|^{-1/d} equals the same ratio on [1/2, 1] with h_j
replaced by h_j B^j, so the sweeps work on [1/2, 1] only.
"""
from __future__ import annotations

import argparse
import json
import math
from importlib import resources

import numpy as np

from .quad import integrate_oscillatory

SAFETY = 2.0
THRESHOLD = 0.1


def _integral(coeffs: np.ndarray) -> float:
    r = integrate_oscillatory(coeffs, lambda x: np.ones_like(x), (0.5, 1.0), tol=1e-12,
                              method="levin")
    return abs(r.value)


def _families(d: int, rng: np.random.Generator):
    """(name, coefficient array) samples of degree exactly d."""
    for e in np.linspace(0.0, 6.0, 25):
        for sgn in (1.0, -1.0):
            c = np.zeros(d + 1)
            c[d] = sgn * 10.0**e
            yield "monomial", c
    # a single root of order d-1 of Q' placed in or near the interval
    for s0 in np.linspace(0.0, 1.5, 16):
        base = np.polynomial.polynomial.polyfromroots([s0] * d)
        for e in np.linspace(0.0, 6.0, 13):
            for sgn in (1.0, -1.0):
                yield "shifted", sgn * 10.0**e * base
    for _ in range(200):
        c = rng.uniform(-1.0, 1.0, d + 1) * 10.0 ** rng.uniform(0.0, 4.0, d + 1)
        c[0] = 0.0
        yield "random", c


def nw_sweep(d: int, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed + d)
    worst = 0.0
    where = None
    count = 0
    for name, c in _families(d, rng):
        val = _integral(c)
        for j in range(1, d + 1):
            H = c[j]
            if H == 0:
                continue
            ratio = val * abs(H) ** (1.0 / d)
            count += 1
            if ratio > worst:
                worst, where = ratio, (name, j)
    value = float(f"{SAFETY * worst:.2g}")
    if value < SAFETY * worst:
        value = float(f"{SAFETY * worst * 1.05:.2g}")
    return {"value": value, "max_ratio": worst, "worst_family": where[0], "worst_j": where[1],
            "samples": count, "safety": SAFETY}


def growth_calibration() -> dict:
    from .bump import make_bump, TruncationSet
    from .multiplier import eval_multiplier_grid
    from .poly import parse_polynomial

    bump = make_bump(4)
    grid = np.logspace(-3, 3, 25)
    out = {}
    for text in ("s*t", "s*t^2"):
        P = parse_polynomial(text)
        sups = []
        Ns = [4, 8, 16, 32]
        for N in Ns:
            F = TruncationSet.square(N)
            best = 0.0
            for lam in grid:
                vals, _ = eval_multiplier_grid(P, F, lam, grid, bump)
                best = max(best, float(np.abs(vals).max()))
            sups.append(best)
        slope = float(np.polyfit(Ns, sups, 1)[0])
        out[text] = {"N": Ns, "sup": sups, "slope": slope}
    return {"value": THRESHOLD, "calibration": out,
            "grid": "25 log-spaced points on [1e-3, 1e3] in both variables"}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=None, help="output path (default: packaged constants.json)")
    args = ap.parse_args(argv)
    consts = {"nw_constant": {str(d): nw_sweep(d) for d in range(1, 7)},
              "vdc_constant": "10 * 2^k",
              "growth_threshold": growth_calibration()}
    path = args.out or str(resources.files("hradon").joinpath("constants.json"))
    with open(path, "w") as fh:
        json.dump(consts, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(json.dumps({d: v["value"] for d, v in consts["nw_constant"].items()}))


if __name__ == "__main__":
    main()
