"""Backend parity tests: the compiled kernels must match the numpy ones."""

import os
import subprocess
import sys

import numpy as np
import pytest

from graphent import _kernels
from graphent._kernels import pure


def random_wvecs(r, rng):
    # rows of a weighted eigenbasis: sqrt(lambda) times orthonormal vectors
    a = rng.normal(size=(8, r)) + 1j * rng.normal(size=(8, r))
    q, _ = np.linalg.qr(a)
    lam = rng.uniform(0.1, 1.0, size=r)
    lam /= lam.sum()
    return np.ascontiguousarray((q * np.sqrt(lam)).T)


def test_param_count():
    assert pure.param_count(2, 2) == 3
    assert pure.param_count(8, 8) == 63
    assert _kernels.param_count(4, 2) == 13


@pytest.mark.parametrize("m,r", [(2, 2), (4, 2), (4, 4), (8, 8), (16, 8)])
def test_isometry_orthonormal_and_backends_match(m, r):
    rng = np.random.default_rng(100 + m * 10 + r)
    params = rng.uniform(-np.pi, np.pi, size=pure.param_count(m, r))
    vp = pure.mixing_isometry(params, m, r)
    vn = _kernels.mixing_isometry(params, m, r)
    assert np.max(np.abs(vp.conj().T @ vp - np.eye(r))) < 1e-12
    assert np.max(np.abs(vp - vn)) < 1e-12


def test_isometry_identity_at_zero_params():
    v = _kernels.mixing_isometry(np.zeros(pure.param_count(4, 3)), 4, 3)
    assert np.max(np.abs(v - np.eye(4, 3))) == 0.0


def test_isometry_rejects_wrong_param_count():
    with pytest.raises(ValueError):
        pure.mixing_isometry(np.zeros(5), 2, 2)
    with pytest.raises(ValueError):
        _kernels.mixing_isometry(np.zeros(5), 2, 2)


def test_three_tangle_backends_match():
    rng = np.random.default_rng(42)
    for _ in range(300):
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        v /= np.linalg.norm(v)
        assert pure.three_tangle(v) == pytest.approx(_kernels.three_tangle(v), abs=1e-13)


def test_three_tangle_anchors_both_backends():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    w = np.zeros(8, dtype=complex)
    w[1] = w[2] = w[4] = 1 / np.sqrt(3)
    for backend in (pure, _kernels):
        assert backend.three_tangle(ghz) == pytest.approx(1.0, abs=1e-12)
        assert backend.three_tangle(w) <= 1e-12


def test_three_tangle_accepts_readonly_input():
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / np.sqrt(2)
    v.flags.writeable = False
    assert _kernels.three_tangle(v) == pytest.approx(1.0, abs=1e-12)


def test_three_tangle_rejects_wrong_length():
    with pytest.raises(ValueError):
        pure.three_tangle(np.zeros(4, dtype=complex))
    with pytest.raises(ValueError):
        _kernels.three_tangle(np.zeros(4, dtype=complex))


@pytest.mark.parametrize("m,r", [(2, 2), (4, 4), (8, 8), (16, 8)])
def test_member_stats_backends_match(m, r):
    rng = np.random.default_rng(7 * m + r)
    wv = random_wvecs(r, rng)
    params = rng.uniform(-np.pi, np.pi, size=pure.param_count(m, r))
    wp, tp = pure.member_stats(params, wv, m)
    wn, tn = _kernels.member_stats(params, wv, m)
    assert np.max(np.abs(wp - wn)) < 1e-13
    assert np.max(np.abs(tp - tn)) < 5e-13
    assert wp.sum() == pytest.approx(1.0, abs=1e-12)  # trace preserved


def test_objective_backends_match():
    rng = np.random.default_rng(77)
    for m, r in [(2, 2), (4, 2), (8, 4)]:
        wv = random_wvecs(r, rng)
        for _ in range(20):
            params = rng.uniform(-np.pi, np.pi, size=pure.param_count(m, r))
            a = pure.objective_three_tangle(params, wv, m)
            b = _kernels.objective_three_tangle(params, wv, m)
            assert a == pytest.approx(b, abs=1e-12)


def test_native_capacity_guard():
    if _kernels.BACKEND != "native":
        pytest.skip("pure backend has no fixed capacity")
    with pytest.raises(ValueError, match="capacity"):
        _kernels.mixing_isometry(np.zeros(pure.param_count(33, 8)), 33, 8)


def test_env_var_forces_pure_backend():
    code = "from graphent import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, GRAPHENT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "pure"
