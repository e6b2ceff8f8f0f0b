"""Entanglement measures, convex-roof searches, and separability certificates.

The measures: pair concurrence on two-qubit density matrices, the residual
three-tangle on pure three-qubit states, and negativity across a bipartition.
Mixed-state certification runs a derivative-free search over decompositions
of a density matrix; a certificate is only issued when every member of the
found decomposition passes its residual bound, and every decomposition
carries its source matrix so reconstruction is checkable later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import BIT_CONVENTION, _kernels
from ._kernels import pure as _pure_kernels
from .graphs import (
    Graph,
    LcWitness,
    as_vertex_set,
    connected_components,
    induced_subgraph,
    local_complement,
    to_graph6,
)
from .qstate import (
    DensityMatrix,
    LocalUnitary,
    PauliOperator,
    StateVector,
    apply_pauli,
    build_graph_state,
    lc_unitary,
    partial_trace,
)

CERT_TOL = 1e-9
ISOMETRY_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-10
WEIGHT_FLOOR = 1e-12
EIG_DROP_TOL = 1e-12
RANK2_TOL = 1e-10

_YY = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex
)

# fixed 2x2 mixing matrix applied to weighted eigenvectors of a rank-2 matrix
_RANK2_MIX = np.array([[1, 1j], [1, -1j]], dtype=complex) / np.sqrt(2)


# ---------------------------------------------------------------------------
# measures

def concurrence(dm: DensityMatrix) -> float:
    """Pair concurrence of a two-qubit density matrix.

    The usual spectrum: decreasingly sorted square roots of the eigenvalues
    of rho (YxY) rho* (YxY), combined as max(0, l1 - l2 - l3 - l4). They are
    computed as singular values of the symmetric matrix X^T (YxY) X with
    X = E sqrt(Lambda) from the eigendecomposition, which evaluates the same
    quantity without a non-Hermitian eigensolver.
    """
    if dm.num_qubits != 2:
        raise ValueError("concurrence is defined for two-qubit density matrices")
    vals, vecs = np.linalg.eigh((dm.matrix + dm.matrix.conj().T) / 2)
    vals = np.where(vals > 0, vals, 0.0)  # clamp tiny negatives before sqrt
    x = vecs * np.sqrt(vals)
    tau = x.T @ _YY @ x
    s = np.linalg.svd(tau, compute_uv=False)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def three_tangle_pure(s: StateVector) -> float:
    """Residual three-tangle of a pure three-qubit state, in [0, 1].

    Computed as the focus-qubit tangle minus both pair concurrence squares;
    the kernel evaluates the closed form.
    """
    if s.num_qubits != 3:
        raise ValueError("three_tangle_pure needs exactly three qubits")
    return float(_kernels.three_tangle(np.ascontiguousarray(s.amps)))


def negativity(dm: DensityMatrix, bipartition) -> float:
    """Sum of negative eigenvalues (absolute) of the partial transpose."""
    part_a, part_b = _split_labels(dm.qubit_labels, bipartition)
    k = dm.num_qubits
    positions_b = [dm.qubit_labels.index(q) for q in part_b]
    t = dm.matrix.reshape([2] * (2 * k))
    for p in positions_b:
        t = np.swapaxes(t, p, k + p)
    pt = t.reshape(1 << k, 1 << k)
    vals = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    return float(max(0.0, -vals[vals < 0].sum()))


def schmidt_coefficients(s: StateVector, bipartition) -> np.ndarray:
    """Decreasing Schmidt coefficients across a bipartition of the qubits."""
    part_a, part_b = _split_labels(tuple(range(s.num_qubits)), bipartition)
    axes = [q for q in part_a] + [q for q in part_b]
    mat = s.amps.reshape([2] * s.num_qubits).transpose(axes).reshape(
        1 << len(part_a), 1 << len(part_b)
    )
    return np.linalg.svd(mat, compute_uv=False)


def is_product_across(s: StateVector, bipartition, tol: float = 1e-10) -> bool:
    """True when the state factorizes across the bipartition."""
    sv = schmidt_coefficients(s, bipartition)
    return bool(abs(sv[0] - 1.0) <= tol)


def _split_labels(labels: tuple[int, ...], bipartition):
    part_a = tuple(sorted(int(q) for q in bipartition[0]))
    part_b = tuple(sorted(int(q) for q in bipartition[1]))
    if sorted(part_a + part_b) != sorted(labels) or not part_a or not part_b:
        raise ValueError(f"bipartition {bipartition} does not split labels {labels}")
    if set(part_a) & set(part_b):
        raise ValueError("bipartition blocks overlap")
    return part_a, part_b


# ---------------------------------------------------------------------------
# eigendecompositions with deterministic degenerate bases

def _structured_eig(matrix: np.ndarray, drop_tol: float = EIG_DROP_TOL):
    """Eigendecomposition, descending, zero modes dropped.

    Real-within-tolerance matrices are decomposed over the reals so the
    eigenvectors stay real; degenerate clusters are re-based by projecting
    coordinate vectors onto the eigenspace (greedy, deterministic), which
    aligns flat spectra with the computational basis.
    """
    h = (matrix + matrix.conj().T) / 2
    if np.max(np.abs(h.imag)) < 1e-13:
        vals, vecs = np.linalg.eigh(h.real)
        vecs = vecs.astype(complex)
    else:
        vals, vecs = np.linalg.eigh(h)
    vals = vals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    keep = vals > drop_tol
    vals, vecs = vals[keep], vecs[:, keep]
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[i] - vals[j + 1] < 1e-10:
            j += 1
        if j > i:
            vecs[:, i:j + 1] = _align_cluster(vecs[:, i:j + 1])
        i = j + 1
    return vals, vecs


def _align_cluster(basis: np.ndarray) -> np.ndarray:
    d, k = basis.shape
    proj = basis @ basis.conj().T
    norms = np.linalg.norm(proj, axis=0)
    chosen: list[np.ndarray] = []
    for q in np.argsort(-norms, kind="stable"):
        v = proj[:, q].copy()
        for u in chosen:
            v -= u * (u.conj() @ v)
        nv = np.linalg.norm(v)
        if nv > 0.25:
            chosen.append(v / nv)
            if len(chosen) == k:
                break
    for j in range(k):
        if len(chosen) == k:
            break
        v = basis[:, j].copy()
        for u in chosen:
            v -= u * (u.conj() @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            chosen.append(v / nv)
    return np.stack(chosen, axis=1)


# ---------------------------------------------------------------------------
# decompositions

@dataclass(frozen=True, eq=False)
class Decomposition:
    """Pure-state ensemble realizing a density matrix.

    ``mixing_isometry`` (m x r, orthonormal columns) maps the weighted
    eigenvectors of ``source`` to the subnormalized members. Construction
    checks weights, isometry, and reconstruction, so any held value is valid.
    """

    source: DensityMatrix
    weights: np.ndarray
    members: tuple[StateVector, ...]
    mixing_isometry: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != len(self.members):
            raise ValueError("one weight per member required")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {w.sum()}, not 1")
        v = np.asarray(self.mixing_isometry, dtype=complex)
        r = v.shape[1]
        if v.shape[0] != len(self.members):
            raise ValueError("isometry rows must match member count")
        if np.max(np.abs(v.conj().T @ v - np.eye(r))) > ISOMETRY_TOL:
            raise ValueError("mixing isometry columns are not orthonormal")
        dim = self.source.matrix.shape[0]
        recon = np.zeros((dim, dim), dtype=complex)
        for wi, psi in zip(w, self.members):
            if psi.amps.shape != (dim,):
                raise ValueError("member dimension mismatch")
            recon += wi * np.outer(psi.amps, psi.amps.conj())
        err = np.max(np.abs(recon - self.source.matrix))
        if err > CERT_TOL:
            raise ValueError(f"decomposition reconstructs source to {err}, needs {CERT_TOL}")
        w = w.copy()
        w.flags.writeable = False
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "mixing_isometry", v)

    @property
    def reconstruction_error(self) -> float:
        recon = sum(
            wi * np.outer(p.amps, p.amps.conj())
            for wi, p in zip(self.weights, self.members)
        )
        return float(np.max(np.abs(recon - self.source.matrix)))


def _isometry(params, m: int, r: int) -> np.ndarray:
    # the compiled builder is capped at 32x8; larger shapes take the numpy path
    if r <= 8 and m <= 32:
        return _kernels.mixing_isometry(params, m, r)
    return _pure_kernels.mixing_isometry(params, m, r)


def _decomposition_from_params(rho, params, m, vals, vecs):
    wvecs = (vecs * np.sqrt(vals)).T  # rows are sqrt(lambda_j) e_j
    v = _isometry(params, m, len(vals))
    x = v @ wvecs
    w = (np.abs(x) ** 2).sum(axis=1)
    members = []
    for i in range(m):
        if w[i] > 1e-30:
            members.append(StateVector(_nq(x.shape[1]), x[i] / np.sqrt(w[i])))
        else:
            # weightless member: any normalized state keeps the ensemble valid
            members.append(StateVector(_nq(x.shape[1]), vecs[:, 0]))
            w[i] = 1e-300
    # tiny float drift in the weights is normalized away; members are exact
    w = w / w.sum()
    return Decomposition(rho, w, tuple(members), v)


def _nq(dim: int) -> int:
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


# ---------------------------------------------------------------------------
# convex-roof search

@dataclass(frozen=True, eq=False)
class ConvexRoofResult:
    """Outcome of one decomposition search: a certified upper bound."""

    value: float
    decomposition: Decomposition
    member_values: np.ndarray
    restart_values: tuple[float, ...]
    evaluations: int
    m: int
    restarts: int
    seed: int


def _descent(objective, x0, f_stop, max_sweeps):
    x = x0.copy()
    f = objective(x)
    evals = 1
    if len(x) == 0:  # rank-1 source: the decomposition is unique
        return x, f, evals
    h = np.full(len(x), 0.35)
    for _ in range(max_sweeps):
        improved = False
        for k in range(len(x)):
            if f <= f_stop:
                return x, f, evals
            hk = h[k]
            xp = x.copy()
            xp[k] += hk
            fp = objective(xp)
            xm = x.copy()
            xm[k] -= hk
            fm = objective(xm)
            evals += 2
            best_f, best_x = f, None
            if fp < best_f:
                best_f, best_x = fp, xp
            if fm < best_f:
                best_f, best_x = fm, xm
            den = fp - 2.0 * f + fm
            if den > 1e-18:
                # quadratic fit through the three samples
                step = float(np.clip(-0.5 * (fp - fm) / den * hk, -2.5 * hk, 2.5 * hk))
                xq = x.copy()
                xq[k] += step
                fq = objective(xq)
                evals += 1
                if fq < best_f:
                    best_f, best_x = fq, xq
            if best_x is not None and best_f < f - 1e-18:
                x, f = best_x, best_f
                h[k] = min(hk * 1.4, 1.2)
                improved = True
            else:
                h[k] = hk * 0.5
        if f <= f_stop:
            break
        if not improved and h.max() < 1e-7:
            break
    return x, f, evals


def convex_roof_upper_bound(
    dm: DensityMatrix,
    measure,
    m: int | None = None,
    restarts: int = 32,
    seed: int = 0,
    stop_below: float = 1e-12,
    max_sweeps: int = 40,
) -> ConvexRoofResult:
    """Search decompositions of ``dm`` minimizing the average of ``measure``.

    ``measure`` maps a pure StateVector to a nonnegative float; the average
    over any decomposition upper-bounds the convex roof, so the returned
    value is always a valid bound. ``m`` is the member count (defaults to the
    matrix rank; at most 4x rank). Restart 0 starts from the identity
    isometry; the rest are seeded uniform angles. The search stops early
    when a restart drives the average below ``stop_below``.
    """
    vals, vecs = _structured_eig(dm.matrix)
    r = len(vals)
    if m is None:
        m = r
    if not r <= m <= 4 * r:
        raise ValueError(f"member count m={m} outside rank..4*rank ({r}..{4 * r})")
    if restarts < 1:
        raise ValueError("need at least one restart")
    wvecs = np.ascontiguousarray((vecs * np.sqrt(vals)).T)
    dim = dm.matrix.shape[0]
    nq = _nq(dim)

    if measure is three_tangle_pure and dim == 8:
        def objective(params):
            return _kernels.objective_three_tangle(params, wvecs, m)
    else:
        def objective(params):
            v = _isometry(params, m, r)
            x = v @ wvecs
            w = (np.abs(x) ** 2).sum(axis=1)
            total = 0.0
            for i in range(m):
                if w[i] > 1e-14:
                    total += w[i] * measure(StateVector(nq, x[i] / np.sqrt(w[i])))
            return total

    k = _kernels.param_count(m, r)
    rng = np.random.default_rng(seed)
    best_x, best_f = None, math.inf
    restart_values = []
    evaluations = 0
    for rs in range(restarts):
        x0 = np.zeros(k) if rs == 0 else rng.uniform(-np.pi, np.pi, size=k)
        x, f, ev = _descent(objective, x0, stop_below, max_sweeps)
        evaluations += ev
        restart_values.append(f)
        if f < best_f:
            best_x, best_f = x, f
        if best_f <= stop_below:
            break

    deco = _decomposition_from_params(dm, best_x, m, vals, vecs)
    member_values = np.array(
        [
            measure(psi) if w > WEIGHT_FLOOR else 0.0
            for w, psi in zip(deco.weights, deco.members)
        ]
    )
    value = float(np.dot(deco.weights, member_values))
    return ConvexRoofResult(
        value=value,
        decomposition=deco,
        member_values=member_values,
        restart_values=tuple(restart_values),
        evaluations=evaluations,
        m=m,
        restarts=restarts,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# zero-tangle certification

@dataclass(frozen=True, eq=False)
class ZeroTangleCertificate:
    """Decomposition whose members all have three-tangle below threshold.

    Members below the weight floor are exempt from the residual rule (they
    cannot contribute more than the floor to the average); ``bound_value``
    is the full weighted average including them.
    """

    decomposition: Decomposition
    residuals: np.ndarray
    bound_value: float
    threshold: float = CERT_TOL
    weight_floor: float = WEIGHT_FLOOR
    search: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        res = np.asarray(self.residuals, dtype=float)
        w = self.decomposition.weights
        if len(res) != len(w):
            raise ValueError("one residual per member required")
        live = w >= self.weight_floor
        if np.any(res[live] >= self.threshold):
            raise ValueError("a member residual reaches the certification threshold")
        res = res.copy()
        res.flags.writeable = False
        object.__setattr__(self, "residuals", res)

    def to_json_dict(self) -> dict:
        d = self.decomposition
        return {
            "kind": "zero_tangle_certificate",
            "bit_convention": BIT_CONVENTION,
            "threshold": self.threshold,
            "weight_floor": self.weight_floor,
            "bound_value": self.bound_value,
            "qubit_labels": list(d.source.qubit_labels),
            "source_matrix": _cplx_matrix(d.source.matrix),
            "weights": [float(x) for x in d.weights],
            "members": [_cplx_vector(p.amps) for p in d.members],
            "mixing_isometry": _cplx_matrix(d.mixing_isometry),
            "residuals": [float(x) for x in self.residuals],
            "search": dict(self.search),
        }


@dataclass(frozen=True, eq=False)
class CertificationOutcome:
    """Certification result: a certificate or the evidence of failure."""

    certificate: "ZeroTangleCertificate | BiseparabilityCertificate | None"
    best_value: float
    attempts: tuple[dict, ...]

    @property
    def certified(self) -> bool:
        return self.certificate is not None


def certify_zero_tangle(
    dm: DensityMatrix,
    restarts: int = 32,
    seed: int = 0,
    threshold: float = CERT_TOL,
) -> CertificationOutcome:
    """Try to certify vanishing mixed three-tangle for a 3-qubit matrix.

    Escalation ladder: (m=rank, R), (m=2*rank, R), (m=rank, 2R),
    (m=2*rank, 2R); the first attempt whose decomposition passes the
    per-member residual rule wins. Inconclusive outcomes keep all attempt
    values; they are never reported as "nonzero".
    """
    if len(dm.qubit_labels) != 3:
        raise ValueError("zero-tangle certification needs a three-qubit matrix")
    vals, _ = _structured_eig(dm.matrix)
    r = len(vals)
    ladder = [(r, restarts), (2 * r, restarts), (r, 2 * restarts), (2 * r, 2 * restarts)]
    if r == 1:
        ladder = [(1, 1)]
    attempts = []
    best_value = math.inf
    for step, (m, budget) in enumerate(ladder):
        result = convex_roof_upper_bound(
            dm,
            three_tangle_pure,
            m=m,
            restarts=budget,
            seed=seed + step,
            stop_below=threshold * 1e-3,
        )
        live = result.decomposition.weights >= WEIGHT_FLOOR
        ok = bool(np.all(result.member_values[live] < threshold))
        attempts.append(
            {
                "m": m,
                "restarts": budget,
                "seed": seed + step,
                "value": result.value,
                "max_live_residual": float(result.member_values[live].max(initial=0.0)),
                "certified": ok,
            }
        )
        best_value = min(best_value, result.value)
        if ok:
            cert = ZeroTangleCertificate(
                decomposition=result.decomposition,
                residuals=result.member_values,
                bound_value=result.value,
                threshold=threshold,
                search={
                    "m": m,
                    "restarts": budget,
                    "seed": seed + step,
                    "backend": _kernels.BACKEND,
                    "attempts": attempts,
                },
            )
            return CertificationOutcome(cert, result.value, tuple(attempts))
    return CertificationOutcome(None, best_value, tuple(attempts))


# ---------------------------------------------------------------------------
# biseparability certification (mixtures of states product across some cut)

def _cut_masks(n: int) -> list[int]:
    # one mask per unordered bipartition: the side containing qubit 0
    full = (1 << n) - 1
    top = 1 << (n - 1)
    return [m for m in range(1 << n) if (m & top) and m != full]


def _mask_to_cut(mask: int, n: int):
    part_a = tuple(q for q in range(n) if (mask >> (n - 1 - q)) & 1)
    part_b = tuple(q for q in range(n) if q not in part_a)
    return part_a, part_b


def min_cut_linear_entropy(s: StateVector) -> float:
    """Minimum over bipartitions of the linear entropy of one side.

    Zero exactly when the state is a product across at least one cut, so a
    decomposition averaging this to zero witnesses biseparability.
    """
    if s.num_qubits < 2:
        raise ValueError("need at least two qubits for a cut")
    best = math.inf
    for mask in _cut_masks(s.num_qubits):
        sv = schmidt_coefficients(s, _mask_to_cut(mask, s.num_qubits))
        best = min(best, float(1.0 - np.sum(sv ** 4)))
    return max(best, 0.0)


def _best_cut(s: StateVector):
    best, best_cut = math.inf, None
    for mask in _cut_masks(s.num_qubits):
        cut = _mask_to_cut(mask, s.num_qubits)
        val = float(1.0 - np.sum(schmidt_coefficients(s, cut) ** 4))
        if val < best:
            best, best_cut = val, cut
    return best_cut, max(best, 0.0)


@dataclass(frozen=True, eq=False)
class BiseparabilityCertificate:
    """Decomposition whose members each factorize across some cut.

    Unlike SeparabilityCertificate the cut may differ per member; residuals
    are minimum-cut linear entropies, with the same weight-floor exemption
    as the zero-tangle certificate.
    """

    decomposition: Decomposition
    residuals: np.ndarray
    member_cuts: tuple
    bound_value: float
    threshold: float = CERT_TOL
    weight_floor: float = WEIGHT_FLOOR
    search: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        res = np.asarray(self.residuals, dtype=float)
        w = self.decomposition.weights
        if len(res) != len(w) or len(self.member_cuts) != len(w):
            raise ValueError("one residual and one cut per member required")
        live = w >= self.weight_floor
        if np.any(res[live] >= self.threshold):
            raise ValueError("a member residual reaches the certification threshold")
        res = res.copy()
        res.flags.writeable = False
        object.__setattr__(self, "residuals", res)

    def to_json_dict(self) -> dict:
        d = self.decomposition
        return {
            "kind": "biseparability_certificate",
            "bit_convention": BIT_CONVENTION,
            "threshold": self.threshold,
            "weight_floor": self.weight_floor,
            "bound_value": self.bound_value,
            "qubit_labels": list(d.source.qubit_labels),
            "source_matrix": _cplx_matrix(d.source.matrix),
            "weights": [float(x) for x in d.weights],
            "members": [_cplx_vector(p.amps) for p in d.members],
            "mixing_isometry": _cplx_matrix(d.mixing_isometry),
            "residuals": [float(x) for x in self.residuals],
            "member_cuts": [[list(a), list(b)] for a, b in self.member_cuts],
            "search": dict(self.search),
        }


def certify_biseparable(
    dm: DensityMatrix,
    restarts: int = 8,
    seed: int = 0,
    threshold: float = CERT_TOL,
    max_sweeps: int = 30,
) -> CertificationOutcome:
    """Try to decompose ``dm`` into members each product across some cut.

    Two-step ladder (m=rank, then m=2*rank): this search is exploratory and
    its inconclusive outcomes are reported as such, never as "entangled".
    """
    if len(dm.qubit_labels) < 2:
        raise ValueError("biseparability needs at least two qubits")
    vals, _ = _structured_eig(dm.matrix)
    r = len(vals)
    ladder = [(r, restarts), (2 * r, restarts)] if r > 1 else [(1, 1)]
    attempts = []
    best_value = math.inf
    for step, (m, budget) in enumerate(ladder):
        result = convex_roof_upper_bound(
            dm,
            min_cut_linear_entropy,
            m=m,
            restarts=budget,
            seed=seed + step,
            stop_below=threshold * 1e-3,
            max_sweeps=max_sweeps,
        )
        live = result.decomposition.weights >= WEIGHT_FLOOR
        ok = bool(np.all(result.member_values[live] < threshold))
        attempts.append(
            {
                "m": m,
                "restarts": budget,
                "seed": seed + step,
                "value": result.value,
                "max_live_residual": float(result.member_values[live].max(initial=0.0)),
                "certified": ok,
            }
        )
        best_value = min(best_value, result.value)
        if ok:
            cuts = []
            for w, psi in zip(result.decomposition.weights, result.decomposition.members):
                if w >= WEIGHT_FLOOR:
                    cut, _ = _best_cut(psi)
                else:
                    cut = _mask_to_cut(_cut_masks(psi.num_qubits)[0], psi.num_qubits)
                cuts.append(cut)
            cert = BiseparabilityCertificate(
                decomposition=result.decomposition,
                residuals=result.member_values,
                member_cuts=tuple(cuts),
                bound_value=result.value,
                threshold=threshold,
                search={
                    "m": m,
                    "restarts": budget,
                    "seed": seed + step,
                    "backend": _kernels.BACKEND,
                    "attempts": attempts,
                },
            )
            return CertificationOutcome(cert, result.value, tuple(attempts))
    return CertificationOutcome(None, best_value, tuple(attempts))


# ---------------------------------------------------------------------------
# rank-2 closed-form decomposition

def lemma1_decomposition(dm: DensityMatrix) -> Decomposition:
    """Two-member decomposition of a rank-2 matrix via the fixed mixing matrix
    (1, i; 1, -i)/sqrt(2) applied to the weighted eigenvectors.

    For balanced mixtures of a state and its three-fold Z-conjugate this
    produces the pair of members that factorize across first-vs-rest.
    """
    h = (dm.matrix + dm.matrix.conj().T) / 2
    full_vals = np.linalg.eigvalsh(h)[::-1]
    if len(full_vals) < 2 or (len(full_vals) > 2 and full_vals[2] > RANK2_TOL):
        raise ValueError("matrix rank is not 2 within tolerance")
    if full_vals[1] <= RANK2_TOL:
        raise ValueError("matrix rank is not 2 within tolerance")
    vals, vecs = _structured_eig(dm.matrix)
    vals, vecs = vals[:2], vecs[:, :2]
    wvecs = (vecs * np.sqrt(vals)).T
    x = _RANK2_MIX @ wvecs
    w = (np.abs(x) ** 2).sum(axis=1)
    members = tuple(StateVector(_nq(x.shape[1]), x[i] / np.sqrt(w[i])) for i in range(2))
    return Decomposition(dm, w / w.sum(), members, _RANK2_MIX.copy())


# ---------------------------------------------------------------------------
# graph-state separability certificates

@dataclass(frozen=True, eq=False)
class SeparabilityCertificate:
    """Ensemble witnessing separability of a reduction across a bipartition.

    Every member must factorize across the bipartition (second Schmidt
    coefficient below tolerance); construction enforces it.
    """

    decomposition: Decomposition
    bipartition: tuple[tuple[int, ...], tuple[int, ...]]
    schmidt_seconds: np.ndarray
    provenance: dict = field(default_factory=dict)
    tolerance: float = CERT_TOL

    def __post_init__(self) -> None:
        labels = self.decomposition.source.qubit_labels
        part_a, part_b = _split_labels(labels, self.bipartition)
        object.__setattr__(self, "bipartition", (part_a, part_b))
        sec = np.asarray(self.schmidt_seconds, dtype=float)
        if len(sec) != len(self.decomposition.members):
            raise ValueError("one Schmidt coefficient per member required")
        if np.any(sec >= self.tolerance):
            raise ValueError("a member is entangled across the claimed bipartition")
        sec = sec.copy()
        sec.flags.writeable = False
        object.__setattr__(self, "schmidt_seconds", sec)

    def to_json_dict(self) -> dict:
        d = self.decomposition
        return {
            "kind": "separability_certificate",
            "bit_convention": BIT_CONVENTION,
            "tolerance": self.tolerance,
            "qubit_labels": list(d.source.qubit_labels),
            "bipartition": [list(self.bipartition[0]), list(self.bipartition[1])],
            "source_matrix": _cplx_matrix(d.source.matrix),
            "weights": [float(x) for x in d.weights],
            "members": [_cplx_vector(p.amps) for p in d.members],
            "mixing_isometry": _cplx_matrix(d.mixing_isometry),
            "schmidt_seconds": [float(x) for x in self.schmidt_seconds],
            "provenance": dict(self.provenance),
        }


def theorem2_separable_decomposition(
    g: Graph, vertices, witness: LcWitness
) -> SeparabilityCertificate:
    """Separable decomposition of a graph-state reduction from an LC witness.

    Replays the witness to a graph whose induced subgraph on the subset
    disconnects, writes the reduction there as a uniform mixture of
    Z-decorated subgraph states (each a product across the components), and
    pulls the members back through the move chain's local unitaries.
    """
    s = as_vertex_set(vertices, g.n)
    if not 2 <= len(s) <= g.n - 1:
        raise ValueError("subset must be proper with at least two vertices")
    if not witness.is_valid_for(g):
        raise ValueError("witness replay does not reach its recorded graph")
    order = sorted(s)
    pos = {v: i for i, v in enumerate(order)}
    k = len(order)

    # replay the chain, collecting the local unitary at each step
    chain = LocalUnitary.identity(g.n)
    cur = g
    for a in witness.moves:
        chain = chain.then(lc_unitary(cur, a))
        cur = local_complement(cur, a)
    sub, _ = induced_subgraph(cur, s)
    comps = connected_components(sub)
    if len(comps) < 2:
        raise ValueError("witness endpoint does not disconnect the subset")
    part_a = tuple(order[i] for i in sorted(comps[0]))
    part_b = tuple(v for v in order if v not in part_a)

    # trace the outside vertices one by one; each contributes the Z pattern
    # of its current neighborhood inside the subset
    masks = list(cur.adj)
    patterns = []
    for b in (v for v in range(g.n) if v not in s):
        nb = masks[b]
        pat = 0
        rest = nb
        while rest:
            v = (rest & -rest).bit_length() - 1
            if v in pos:
                pat |= 1 << pos[v]
            rest &= rest - 1
        patterns.append(pat)
        for v in range(g.n):
            masks[v] &= ~(1 << b)
        masks[b] = 0
    basis = _gf2_basis(patterns)
    span = _gf2_span(basis)

    base = build_graph_state(sub)
    pullback = chain.restrict(order).adjoint()
    members = []
    for pat in span:
        letters = "".join("Z" if (pat >> i) & 1 else "I" for i in range(k))
        decorated = apply_pauli(base, PauliOperator(letters))
        members.append(pullback.apply(decorated))

    rho = partial_trace(build_graph_state(g), s)
    vals, vecs = _structured_eig(rho.matrix)
    weights = np.full(len(span), 1.0 / len(span))
    # recover the mixing isometry from overlaps with the eigenvectors
    x = np.stack([np.sqrt(w) * m.amps for w, m in zip(weights, members)])
    v = (x @ vecs.conj()) / np.sqrt(vals)
    deco = Decomposition(rho, weights, tuple(members), v)
    bip_positions = (
        tuple(pos[q] for q in part_a),
        tuple(pos[q] for q in part_b),
    )
    seconds = np.array(
        [schmidt_coefficients(m, bip_positions)[1] for m in members]
    )
    return SeparabilityCertificate(
        decomposition=deco,
        bipartition=(part_a, part_b),
        schmidt_seconds=seconds,
        provenance={
            "graph6": to_graph6(g),
            "subset": [int(q) for q in order],
            "witness_moves": [int(a) for a in witness.moves],
            "witness_graph6": to_graph6(witness.resulting_graph),
        },
    )


def _gf2_basis(masks) -> list[int]:
    basis: list[int] = []
    for m in masks:
        cur = m
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
            basis.sort(reverse=True)
    return basis


def _gf2_span(basis) -> list[int]:
    span = [0]
    for b in basis:
        span = span + [x ^ b for x in span]
    return sorted(span)


# ---------------------------------------------------------------------------
# mixing superoperator

def theorem1_superoperator(dm: DensityMatrix, letters: str) -> DensityMatrix:
    """Average of the identity channel and conjugation by a Z-pattern.

    ``letters`` gives one of I or Z per qubit; the output is
    (rho + U rho U^dagger) / 2 with U the corresponding tensor product.
    """
    if len(letters) != dm.num_qubits or any(c not in "IZ" for c in letters):
        raise ValueError("letters must be a string over I, Z matching the qubit count")
    k = dm.num_qubits
    signs = np.ones(1 << k)
    for q, c in enumerate(letters):
        if c == "Z":
            bit = ((np.arange(1 << k) >> (k - 1 - q)) & 1).astype(bool)
            signs = np.where(bit, -signs, signs)
    u = np.diag(signs)
    mixed = (dm.matrix + u @ dm.matrix @ u) / 2
    return DensityMatrix(dm.qubit_labels, mixed)


# ---------------------------------------------------------------------------
# serialization helpers

def _cplx_vector(v: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in v]


def _cplx_matrix(m: np.ndarray) -> list:
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]
