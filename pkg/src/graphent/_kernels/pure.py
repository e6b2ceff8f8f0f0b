"""Pure numpy kernels for the decomposition-search inner loop.

Semantics must stay identical to the compiled twin in ``_native.pyx``; the
test suite compares both backends on random inputs.

Conventions: 3-qubit amplitudes are indexed with qubit 0 as the most
significant bit. A decomposition is parametrized by an m x r isometry built
from complex Givens rotations over all row pairs (2 angles each, QR order)
followed by r-1 column phases, applied to weighted eigenvectors (rows of
``wvecs``, already scaled by sqrt(eigenvalue)).
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

_C12_LOW = np.array([0, 2, 4, 6])
_C12_HIGH = np.array([1, 3, 5, 7])
_C13_LOW = np.array([0, 1, 4, 5])
_C13_HIGH = np.array([2, 3, 6, 7])


def param_count(m: int, r: int) -> int:
    """Length of the parameter vector for an m x r mixing isometry."""
    return m * (m - 1) + (r - 1)


def mixing_isometry(params: np.ndarray, m: int, r: int) -> np.ndarray:
    """Isometry with orthonormal columns from the Givens/phase parameters."""
    params = np.asarray(params, dtype=float)
    if params.shape != (param_count(m, r),):
        raise ValueError(f"expected {param_count(m, r)} parameters, got {params.shape}")
    v = np.zeros((m, r), dtype=complex)
    for j in range(r):
        v[j, j] = 1.0
    k = 0
    for p in range(m - 1):
        for q in range(p + 1, m):
            theta, phi = params[k], params[k + 1]
            k += 2
            c, s = np.cos(theta), np.sin(theta)
            e = np.exp(1j * phi)
            rp = c * v[p] - s * e * v[q]
            rq = s * np.conj(e) * v[p] + c * v[q]
            v[p], v[q] = rp, rq
    for j in range(1, r):
        v[:, j] *= np.exp(1j * params[k])
        k += 1
    return v


def _tau_raw_batch(x: np.ndarray) -> np.ndarray:
    """Unnormalized residual tangle, quartic in amplitudes; x has shape (m, 8)."""
    a = np.abs(x) ** 2
    t00 = a[:, :4].sum(axis=1)
    t11 = a[:, 4:].sum(axis=1)
    t01 = (x[:, :4] * x[:, 4:].conj()).sum(axis=1)
    c1 = 4.0 * (t00 * t11 - np.abs(t01) ** 2)

    def pair_c_sq(lo, hi):
        x0 = x[:, lo]
        x1 = x[:, hi]
        # YY on the 2-qubit basis (00,01,10,11) maps v -> (-v3, v2, v1, -v0)
        def yy(v):
            return np.stack([-v[:, 3], v[:, 2], v[:, 1], -v[:, 0]], axis=1)

        y0, y1 = yy(x0), yy(x1)
        t_00 = (x0 * y0).sum(axis=1)
        t_01 = (x0 * y1).sum(axis=1)
        t_11 = (x1 * y1).sum(axis=1)
        frob = np.abs(t_00) ** 2 + 2 * np.abs(t_01) ** 2 + np.abs(t_11) ** 2
        det = t_00 * t_11 - t_01 ** 2
        return np.maximum(frob - 2 * np.abs(det), 0.0)

    tau = c1 - pair_c_sq(_C12_LOW, _C12_HIGH) - pair_c_sq(_C13_LOW, _C13_HIGH)
    return np.maximum(tau, 0.0)


def three_tangle(amps: np.ndarray) -> float:
    """Residual three-tangle of a normalized 3-qubit amplitude vector."""
    amps = np.asarray(amps, dtype=complex)
    if amps.shape != (8,):
        raise ValueError("three_tangle expects 8 amplitudes")
    return float(_tau_raw_batch(amps[None, :])[0])


def member_stats(params: np.ndarray, wvecs: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Weights and per-member (normalized) tangles of the parametrized decomposition."""
    r = wvecs.shape[0]
    v = mixing_isometry(params, m, r)
    x = v @ wvecs
    w = (np.abs(x) ** 2).sum(axis=1)
    raw = _tau_raw_batch(x)
    tangles = np.zeros(m)
    live = w > 1e-14
    tangles[live] = raw[live] / w[live] ** 2
    return w, tangles


def objective_three_tangle(params: np.ndarray, wvecs: np.ndarray, m: int) -> float:
    """Decomposition-averaged three-tangle: sum_i w_i * tangle(member_i)."""
    w, tangles = member_stats(params, wvecs, m)
    return float(np.sum(w * tangles))
