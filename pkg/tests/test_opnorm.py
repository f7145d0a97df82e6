import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hradon.audit import partition_L1_L2
from hradon.bump import TruncationSet, make_bump
from hradon.multiplier import eval_multiplier
from hradon.opnorm import (GridSpec, KernelMatrix, NormConvergenceError, annulus_grid,
                           build_Slambda_matrix, kernel_matrix, operator_norm,
                           sweep_multiplier_sup)
from hradon.oscillatory import eval_mI
from hradon.poly import parse_polynomial

BUMP = make_bump(4)


def test_operator_norm_examples():
    assert operator_norm(np.zeros((5, 5))) == 0.0
    assert operator_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0, rel=1e-10)
    assert operator_norm(np.diag([3.0, 1.0, 2.0, 0.5])) == pytest.approx(3.0, rel=1e-10)


def test_operator_norm_start_orthogonal_to_top():
    # top right singular vector alternates in sign, so it is orthogonal to all-ones
    n = 8
    v = np.where(np.arange(n) % 2 == 0, 1.0, -1.0) / math.sqrt(n)
    A = np.eye(n) + 4.0 * np.outer(v, v)
    assert abs(np.ones(n) @ v) < 1e-15
    assert operator_norm(A) == pytest.approx(5.0, rel=1e-10)


def test_operator_norm_against_svd():
    rng = np.random.default_rng(3)
    for _ in range(5):
        A = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
        ref = np.linalg.svd(A, compute_uv=False)[0]
        assert operator_norm(A, tol=1e-12) == pytest.approx(ref, rel=1e-10)


def test_operator_norm_clustered_top():
    # singular values 1, 1 - 1e-6, ... stall plain power iteration
    rng = np.random.default_rng(4)
    Q1, _ = np.linalg.qr(rng.normal(size=(60, 60)))
    Q2, _ = np.linalg.qr(rng.normal(size=(60, 60)))
    sv = np.concatenate([[1.0, 1.0 - 1e-6], np.linspace(0.9, 0.1, 58)])
    assert operator_norm(Q1 @ np.diag(sv) @ Q2.T, tol=1e-12) == pytest.approx(1.0, rel=1e-10)


def test_operator_norm_budget():
    rng = np.random.default_rng(5)
    with pytest.raises(NormConvergenceError):
        operator_norm(rng.normal(size=(200, 200)), tol=1e-15, max_iter=1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**31))
def test_norm_monotone_under_domination(n, seed):
    rng = np.random.default_rng(seed)
    B = rng.uniform(0, 1, (n, n))
    A = B * rng.uniform(0, 1, (n, n))
    assert operator_norm(A, tol=1e-12) <= operator_norm(B, tol=1e-12) * (1 + 1e-9)


def test_grid_refinement_smooth_kernel():
    k = lambda y, t: np.exp(-(y - t) ** 2) * np.cos(y * t)  # noqa: E731
    norms = []
    for size in (64, 128, 256):
        y, w = annulus_grid(1, size)
        norms.append(operator_norm(kernel_matrix(k, y, y, w)))
    assert abs(norms[1] - norms[0]) <= 0.05 * norms[1]
    assert abs(norms[2] - norms[1]) <= 0.05 * norms[2]


def test_annulus_grid():
    y, w = annulus_grid(2, 8)
    assert len(y) == 8 and np.all(np.abs(y) >= 4) and np.all(np.abs(y) <= 8)
    assert w.sum() == pytest.approx(8.0)
    with pytest.raises(ValueError):
        annulus_grid(0, 7)


def test_kernel_matrix_validation():
    with pytest.raises(ValueError):
        KernelMatrix(np.zeros(2), np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    with pytest.raises(ValueError):
        KernelMatrix(np.zeros(2), np.zeros(2), np.zeros(2), np.full((2, 2), np.nan))


def test_Slambda_trivial_cases():
    P = parse_polynomial("s*t")
    F = TruncationSet.square(8)
    K = build_Slambda_matrix(P, 1, F, 0.0, 0, 16)
    assert not np.any(K.entries) and operator_norm(K) == 0.0
    # every k >= m - C0 + 1: nothing in L2
    K = build_Slambda_matrix(P, 1, TruncationSet.rectangle((-2, 2), (0, 3)), 1.0, 2, 16)
    assert K.note == "empty L2 set" and not np.any(K.entries)


@pytest.mark.parametrize("text", ["s*t", "s*t^2"])
def test_Slambda_entries_match_direct_mI(text):
    P = parse_polynomial(text)
    F = TruncationSet.rectangle((-2, 2), (-3, 0))
    m, C0, lam = 1, 1, 0.8
    K = build_Slambda_matrix(P, 1, F, lam, m, 32, BUMP, C0, tol=1e-11)
    _, L2 = partition_L1_L2(F, m, C0)
    rng = np.random.default_rng(1)
    nz = np.argwhere(np.abs(K.entries) > 0)
    picks = nz[rng.choice(len(nz), 10, replace=False)].tolist() + \
        rng.integers(0, 32, (10, 2)).tolist()
    for i, l in picks:
        y, t = K.y[i], K.t[l]
        direct = sum(eval_mI(P, 1, I, lam, y, t, BUMP, tol=1e-11) for _, I in L2)
        assert abs(K.entries[i, l] - direct * K.weights[l]) <= 1e-9


@pytest.mark.slow
def test_fixed_st_norm_small_lambda_range():
    P = parse_polynomial("s*t")
    F = TruncationSet.square(8)
    norms = [operator_norm(build_Slambda_matrix(P, 1, F, 2.0**e, 0, 128)) for e in (-4, -2, 0)]
    assert max(norms) / min(norms) < 2.0


# multiplier sweeps ---------------------------------------------------------------


def test_grid_spec():
    g = GridSpec.parse("0.01, 100, 5")
    np.testing.assert_allclose(g.points(), [0.01, 0.1, 1, 10, 100])
    assert GridSpec().count == 199  # 33 per decade over six decades
    assert GridSpec(2.0, 2.0, 1).points().tolist() == [2.0]
    for bad in ("1,2", "0,1,3", "2,1,3", "1,2,0"):
        with pytest.raises(ValueError):
            GridSpec.parse(bad)


def test_sweep_zero_polynomial():
    r = sweep_multiplier_sup(parse_polynomial("0"), [2, 4], GridSpec(0.1, 10, 5),
                             GridSpec(0.1, 10, 5))
    assert all(s <= 1e-8 for s in r.sups)


def test_sweep_rejects_bad_sizes():
    with pytest.raises(ValueError):
        sweep_multiplier_sup(parse_polynomial("s*t"), [4, 4])
    with pytest.raises(ValueError):
        sweep_multiplier_sup(parse_polynomial("s*t"), [0, 4])


def test_sweep_small_grid_signatures():
    g = GridSpec(0.01, 100, 13)
    grow = sweep_multiplier_sup(parse_polynomial("s*t"), [2, 4, 6], g, g)
    assert grow.strictly_increasing() and grow.slope > 0.1
    flat = sweep_multiplier_sup(parse_polynomial("s*t^2"), [2, 4, 6], g, g)
    assert flat.slope < grow.slope
    assert grow.as_dict()["N"] == [2, 4, 6]


def test_sweep_argmax_is_consistent():
    g = GridSpec(0.1, 10, 7)
    r = sweep_multiplier_sup(parse_polynomial("s*t"), [3], g, g)
    lam, eta = r.argmax[0]
    v = eval_multiplier(parse_polynomial("s*t"), TruncationSet.square(3), lam, eta, BUMP)
    assert abs(abs(v) - r.sups[0]) <= 1e-7


def test_coefficient_scaling_identity():
    # the multiplier of c P at (lam, eta) is that of P at (c lam, eta)
    F = TruncationSet.square(3)
    etas = np.array([0.01, 0.7, 5.0])
    for c in (100.0, 1e4):
        a = [eval_multiplier(parse_polynomial(f"{c}*s*t"), F, 1e-3, e, BUMP) for e in etas]
        b = [eval_multiplier(parse_polynomial("s*t"), F, c * 1e-3, e, BUMP) for e in etas]
        np.testing.assert_allclose(a, b, atol=2e-8)


def test_coefficient_scaling_nondecreasing():
    # a grid wide enough to contain the peak of every scaled copy
    lam = GridSpec(1e-6, 1e3, 28)
    eta = GridSpec(1e-3, 1e3, 19)
    sups = [sweep_multiplier_sup(parse_polynomial(f"{c}*s*t"), [4], lam, eta).sups[0]
            for c in (1, 100, 10000)]
    assert sups[0] <= sups[1] + 2e-8 and sups[1] <= sups[2] + 2e-8
