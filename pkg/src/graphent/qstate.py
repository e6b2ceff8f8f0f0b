"""State vectors, density matrices, Pauli strings, and graph-state builders.

Basis index convention: qubit 0 owns the MOST significant bit of the
amplitude index, so ``|q0 q1 ... q_{n-1}>`` maps to index
``q0*2^(n-1) + ... + q_{n-1}``. Every serialized artifact records this.

State vectors are capped at 14 qubits and density matrices at 8; both are
validated on construction (norm / Hermiticity / trace / positivity), so a
value that exists is a value that passed its contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import BIT_CONVENTION
from .errors import CapacityError
from .graphs import Graph

MAX_STATE_QUBITS = 14
MAX_DENSITY_QUBITS = 8

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

_SQRT_MINUS_IX = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2)
_SQRT_IZ = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
_IDENTITY2 = np.eye(2, dtype=complex)


def index_bit(i: int, q: int, n: int) -> int:
    """Bit of qubit ``q`` inside basis index ``i`` (qubit 0 = most significant)."""
    return (i >> (n - 1 - q)) & 1


def _qubit_bits(n: int, q: int) -> np.ndarray:
    """Boolean array over all 2^n indices: is qubit q's bit set."""
    return ((np.arange(1 << n) >> (n - 1 - q)) & 1).astype(bool)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on ``num_qubits`` qubits."""

    num_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.num_qubits <= MAX_STATE_QUBITS:
            raise CapacityError(f"state capacity is 1..{MAX_STATE_QUBITS} qubits")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(f"expected {1 << self.num_qubits} amplitudes, got {amps.shape}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state over a labeled subset of qubits.

    ``qubit_labels`` remembers which original qubits the rows/columns refer
    to (ascending); the matrix axes follow the same bit convention as
    ``StateVector`` restricted to those qubits.
    """

    qubit_labels: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        labels = tuple(int(x) for x in self.qubit_labels)
        if not labels:
            raise ValueError("density matrix needs at least one qubit label")
        if len(labels) > MAX_DENSITY_QUBITS:
            raise CapacityError(f"density capacity is {MAX_DENSITY_QUBITS} qubits")
        if list(labels) != sorted(set(labels)):
            raise ValueError("qubit labels must be strictly increasing")
        d = 1 << len(labels)
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL or abs(np.trace(m).imag) > TRACE_TOL:
            raise ValueError("matrix trace deviates from 1 beyond tolerance")
        low = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
        if low < -PSD_TOL:
            raise ValueError(f"matrix has eigenvalue {low} below -{PSD_TOL}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "qubit_labels", labels)
        object.__setattr__(self, "matrix", m)

    @property
    def num_qubits(self) -> int:
        return len(self.qubit_labels)


@dataclass(frozen=True)
class PauliOperator:
    """Tensor product of single-qubit Paulis with an overall phase.

    ``letters[q]`` is one of I, X, Y, Z acting on qubit ``q``; ``phase`` is
    restricted to the fourth roots of unity so products stay in the group.
    """

    letters: str
    phase: complex = 1.0

    def __post_init__(self) -> None:
        if not self.letters or any(c not in "IXYZ" for c in self.letters):
            raise ValueError(f"letters must be nonempty over IXYZ, got {self.letters!r}")
        if self.phase not in (1, -1, 1j, -1j):
            raise ValueError("phase must be a fourth root of unity")


# ---------------------------------------------------------------------------
# construction

def plus_state(n: int) -> StateVector:
    """Uniform superposition on ``n`` qubits."""
    if not 1 <= n <= MAX_STATE_QUBITS:
        raise CapacityError(f"state capacity is 1..{MAX_STATE_QUBITS} qubits")
    return StateVector(n, np.full(1 << n, 1 / np.sqrt(1 << n), dtype=complex))


def apply_cz(s: StateVector, a: int, b: int) -> StateVector:
    """Controlled-Z between qubits ``a`` and ``b`` (symmetric)."""
    n = s.num_qubits
    if a == b or not (0 <= a < n and 0 <= b < n):
        raise ValueError(f"need two distinct qubits in 0..{n - 1}, got {a}, {b}")
    both = _qubit_bits(n, a) & _qubit_bits(n, b)
    amps = np.where(both, -s.amps, s.amps)
    return StateVector(n, amps)


def build_graph_state(g: Graph) -> StateVector:
    """Graph state: plus state with one CZ per edge."""
    if g.n > MAX_STATE_QUBITS:
        raise CapacityError(f"state capacity is {MAX_STATE_QUBITS} qubits, graph has {g.n}")
    s = plus_state(g.n)
    for a, b in g.edges():
        s = apply_cz(s, a, b)
    return s


def ghz_state(n: int) -> StateVector:
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return StateVector(n, amps)


def w_state(n: int) -> StateVector:
    if n < 2:
        raise ValueError("w state needs at least two qubits")
    amps = np.zeros(1 << n, dtype=complex)
    for q in range(n):
        amps[1 << (n - 1 - q)] = 1 / np.sqrt(n)
    return StateVector(n, amps)


# ---------------------------------------------------------------------------
# Pauli action

def stabilizer_op(g: Graph, a: int) -> PauliOperator:
    """The graph-state stabilizer generator at vertex ``a``: X there, Z on neighbors."""
    if not 0 <= a < g.n:
        raise ValueError(f"vertex {a} outside 0..{g.n - 1}")
    letters = ["I"] * g.n
    letters[a] = "X"
    for b in g.neighborhood(a):
        letters[b] = "Z"
    return PauliOperator("".join(letters))


def apply_pauli(s: StateVector, p: PauliOperator) -> StateVector:
    """Apply a Pauli string to a state vector."""
    n = s.num_qubits
    if len(p.letters) != n:
        raise ValueError(f"operator has {len(p.letters)} letters, state has {n} qubits")
    xmask = 0
    sign_mask = 0  # qubits contributing (-1)^bit: Z and Y both do
    ny = 0
    for q, letter in enumerate(p.letters):
        pos = 1 << (n - 1 - q)
        if letter in "XY":
            xmask |= pos
        if letter in "ZY":
            sign_mask |= pos
        if letter == "Y":
            ny += 1
    idx = np.arange(1 << n)
    parity = np.bitwise_count(idx & sign_mask) & 1
    coeff = p.phase * (1j) ** ny * np.where(parity, -1.0, 1.0)
    out = np.empty_like(s.amps)
    out[idx ^ xmask] = coeff * s.amps
    return StateVector(n, out)


def pauli_product(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Group product p*q with phase tracking."""
    if len(p.letters) != len(q.letters):
        raise ValueError("length mismatch")
    table = {
        ("I", "I"): ("I", 1), ("I", "X"): ("X", 1), ("I", "Y"): ("Y", 1), ("I", "Z"): ("Z", 1),
        ("X", "I"): ("X", 1), ("X", "X"): ("I", 1), ("X", "Y"): ("Z", 1j), ("X", "Z"): ("Y", -1j),
        ("Y", "I"): ("Y", 1), ("Y", "X"): ("Z", -1j), ("Y", "Y"): ("I", 1), ("Y", "Z"): ("X", 1j),
        ("Z", "I"): ("Z", 1), ("Z", "X"): ("Y", 1j), ("Z", "Y"): ("X", -1j), ("Z", "Z"): ("I", 1),
    }
    letters = []
    phase = p.phase * q.phase
    for c1, c2 in zip(p.letters, q.letters):
        letter, f = table[(c1, c2)]
        letters.append(letter)
        phase *= f
    return PauliOperator("".join(letters), phase)


# ---------------------------------------------------------------------------
# reductions

def partial_trace(state, keep) -> DensityMatrix:
    """Trace out all qubits not in ``keep``.

    Accepts a StateVector (labels are 0..n-1) or a DensityMatrix (labels are
    its own). ``keep`` must be a nonempty proper subset of the labels.
    """
    if isinstance(state, StateVector):
        labels = tuple(range(state.num_qubits))
    elif isinstance(state, DensityMatrix):
        labels = state.qubit_labels
    else:
        raise TypeError(f"cannot trace {type(state).__name__}")
    keep = tuple(sorted({int(q) for q in keep}))
    if not keep:
        raise ValueError("keep set is empty")
    if any(q not in labels for q in keep):
        raise ValueError(f"keep set {keep} is not within labels {labels}")
    if len(keep) == len(labels):
        raise ValueError("keep set must be a proper subset")
    if len(keep) > MAX_DENSITY_QUBITS:
        raise CapacityError(f"density capacity is {MAX_DENSITY_QUBITS} qubits")
    positions = [labels.index(q) for q in keep]
    rest = [i for i in range(len(labels)) if i not in positions]
    k = len(positions)
    if isinstance(state, StateVector):
        tensor = state.amps.reshape([2] * state.num_qubits)
        mat = tensor.transpose(positions + rest).reshape(1 << k, -1)
        rho = mat @ mat.conj().T
    else:
        nq = len(labels)
        tensor = state.matrix.reshape([2] * (2 * nq))
        perm = positions + rest + [p + nq for p in positions] + [p + nq for p in rest]
        t = tensor.transpose(perm).reshape(1 << k, -1, 1 << k, 1 << (nq - k))
        rho = np.einsum("atbt->ab", t)
    return DensityMatrix(keep, rho)


def purity(dm: DensityMatrix) -> float:
    """Tr(rho^2); 1/dim for maximally mixed, 1 for pure."""
    return float(np.sum(np.abs(dm.matrix) ** 2))


# ---------------------------------------------------------------------------
# local unitaries

@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """Tensor product of single-qubit unitaries, one 2x2 factor per qubit."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        fs = []
        for q, f in enumerate(self.factors):
            f = np.asarray(f, dtype=complex)
            if f.shape != (2, 2):
                raise ValueError(f"factor {q} is not 2x2")
            if np.max(np.abs(f @ f.conj().T - _IDENTITY2)) > 1e-12:
                raise ValueError(f"factor {q} is not unitary within 1e-12")
            f = f.copy()
            f.flags.writeable = False
            fs.append(f)
        object.__setattr__(self, "factors", tuple(fs))

    @property
    def num_qubits(self) -> int:
        return len(self.factors)

    @classmethod
    def identity(cls, n: int) -> "LocalUnitary":
        return cls(tuple(_IDENTITY2 for _ in range(n)))

    def then(self, other: "LocalUnitary") -> "LocalUnitary":
        """Composite that applies ``self`` first, then ``other``."""
        if other.num_qubits != self.num_qubits:
            raise ValueError("qubit count mismatch")
        return LocalUnitary(tuple(o @ s for o, s in zip(other.factors, self.factors)))

    def adjoint(self) -> "LocalUnitary":
        return LocalUnitary(tuple(f.conj().T for f in self.factors))

    def restrict(self, qubits) -> "LocalUnitary":
        """Factors at the given qubits, ascending, as a smaller local unitary."""
        qs = sorted({int(q) for q in qubits})
        if not qs or qs[0] < 0 or qs[-1] >= self.num_qubits:
            raise ValueError(f"qubits {qs} outside 0..{self.num_qubits - 1}")
        return LocalUnitary(tuple(self.factors[q] for q in qs))

    def apply(self, s: StateVector) -> StateVector:
        if s.num_qubits != self.num_qubits:
            raise ValueError("qubit count mismatch")
        t = s.amps.reshape([2] * self.num_qubits)
        for q, f in enumerate(self.factors):
            t = np.tensordot(f, t, axes=([1], [q]))
            t = np.moveaxis(t, 0, q)
        return StateVector(s.num_qubits, t.reshape(-1))

    def conjugate_density(self, dm: DensityMatrix) -> DensityMatrix:
        """U rho U-dagger on a density matrix with matching qubit count."""
        if dm.num_qubits != self.num_qubits:
            raise ValueError("qubit count mismatch")
        n = dm.num_qubits
        t = dm.matrix.reshape([2] * (2 * n))
        for q, f in enumerate(self.factors):
            t = np.tensordot(f, t, axes=([1], [q]))
            t = np.moveaxis(t, 0, q)
            t = np.tensordot(f.conj(), t, axes=([1], [n + q]))
            t = np.moveaxis(t, 0, n + q)
        return DensityMatrix(dm.qubit_labels, t.reshape(1 << n, 1 << n))


def lc_unitary(g: Graph, a: int) -> LocalUnitary:
    """Single-qubit unitaries mapping the graph state of ``g`` to that of
    its local complementation at ``a`` (up to global phase):
    sqrt(-iX) at ``a`` and sqrt(iZ) at each neighbor.
    """
    if not 0 <= a < g.n:
        raise ValueError(f"vertex {a} outside 0..{g.n - 1}")
    factors = [_IDENTITY2] * g.n
    factors[a] = _SQRT_MINUS_IX
    for b in g.neighborhood(a):
        factors[b] = _SQRT_IZ
    return LocalUnitary(tuple(factors))


def states_equal_up_to_phase(s1: StateVector, s2: StateVector, tol: float = 1e-10) -> bool:
    """True when the states differ only by a global phase."""
    if s1.num_qubits != s2.num_qubits:
        return False
    return abs(abs(s1.overlap(s2)) - 1.0) <= tol


# ---------------------------------------------------------------------------
# serialization

def state_to_json(s: StateVector) -> str:
    doc = {
        "kind": "state_vector",
        "qubits": s.num_qubits,
        "bit_convention": BIT_CONVENTION,
        "amplitudes": [[float(a.real), float(a.imag)] for a in s.amps],
    }
    return json.dumps(doc, indent=2)


def state_from_json(text: str) -> StateVector:
    doc = json.loads(text)
    if doc.get("kind") != "state_vector":
        raise ValueError("document is not a state_vector")
    if doc.get("bit_convention") != BIT_CONVENTION:
        raise ValueError(f"unsupported bit convention {doc.get('bit_convention')!r}")
    amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
    return StateVector(int(doc["qubits"]), amps)


def density_to_json(dm: DensityMatrix) -> str:
    doc = {
        "kind": "density_matrix",
        "qubit_labels": list(dm.qubit_labels),
        "bit_convention": BIT_CONVENTION,
        "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in dm.matrix],
    }
    return json.dumps(doc, indent=2)


def density_from_json(text: str) -> DensityMatrix:
    doc = json.loads(text)
    if doc.get("kind") != "density_matrix":
        raise ValueError("document is not a density_matrix")
    if doc.get("bit_convention") != BIT_CONVENTION:
        raise ValueError(f"unsupported bit convention {doc.get('bit_convention')!r}")
    m = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
    return DensityMatrix(tuple(doc["qubit_labels"]), m)
