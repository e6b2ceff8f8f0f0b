"""Structured verification suites over graph-state populations.

Each ``verify_*`` driver examines a population (graph classes x qubit
subsets, or a parameter grid), produces one verdict per instance, and
returns a :class:`ClaimReport` whose passing instances each embed a
certificate that :func:`recheck_certificate` can re-validate from the JSON
alone — reconstruction, residuals, Schmidt coefficients, witness replays —
without re-running any search.

The module also houses the four-qubit normal-form family (parameters
``a, b, c, d`` with derived ``A, B, C, D``), the six pairwise-vanishing
inequalities tied to it, and the one-parameter ``mg4`` family used to
exhibit fully entangled states outside the graph-state orbit.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import BIT_CONVENTION, __version__, _kernels
from .errors import CapacityError
from .graphs import (
    Graph,
    LcWitness,
    as_vertex_set,
    can_disconnect_by_lc,
    enumerate_connected_graphs,
    family,
    find_isomorphism,
    induced_subgraph,
    is_connected,
    local_complement,
    parse_graph6,
    to_graph6,
    _orbit_moves,
)
from .qstate import (
    DensityMatrix,
    StateVector,
    build_graph_state,
    ghz_state,
    lc_unitary,
    partial_trace,
    purity,
    w_state,
)
from .entanglement import (
    CERT_TOL,
    Decomposition,
    certify_biseparable,
    certify_zero_tangle,
    concurrence,
    lemma1_decomposition,
    schmidt_coefficients,
    theorem2_separable_decomposition,
    three_tangle_pure,
    _cplx_matrix,
    _cplx_vector,
)

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"
NOT_APPLICABLE = "NOT_APPLICABLE"
INFO = "INFO"
_VERDICTS = (PASS, FAIL, INCONCLUSIVE, NOT_APPLICABLE, INFO)

CONCURRENCE_ZERO_TOL = 1e-10
REDUCTION_IDENTITY_TOL = 1e-10
PRODUCT_GAP_TOL = 1e-10
SCHMIDT_SECOND_TOL = 1e-9
SLACK_TOL = 1e-12
PURITY_MATCH_TOL = 1e-9
TRANSPORT_TOL = 1e-12
PARAM_NORM_TOL = 1e-10
_RECHECK_MATCH_TOL = 1e-10


# ---------------------------------------------------------------------------
# report containers


@dataclass(frozen=True)
class InstanceResult:
    """One examined instance: verdict plus the evidence behind it."""

    instance: str
    verdict: str
    residual: float | None = None
    detail: dict = field(default_factory=dict)
    certificate: dict | None = None

    def __post_init__(self) -> None:
        if self.verdict not in _VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == PASS and self.certificate is None:
            raise ValueError("a PASS verdict must carry a re-checkable certificate")
        if self.verdict == FAIL and not self.detail:
            raise ValueError("a FAIL verdict must carry concrete evidence")


@dataclass(frozen=True)
class ClaimReport:
    """Per-instance verdicts for one claim over one population.

    ``wall_clock_seconds`` is informational and deliberately excluded from
    the JSON form so identical runs serialize byte-identically.
    """

    claim: str
    population: str
    instances: tuple[InstanceResult, ...]
    tolerances: dict
    seeds: dict
    wall_clock_seconds: float

    def __post_init__(self) -> None:
        keys = [r.instance for r in self.instances]
        if len(set(keys)) != len(keys):
            raise ValueError("instance keys must be unique")
        if list(keys) != sorted(keys):
            raise ValueError("instances must be sorted by key")

    @property
    def counts(self) -> dict[str, int]:
        out = {v: 0 for v in _VERDICTS}
        for r in self.instances:
            out[r.verdict] += 1
        out["total"] = len(self.instances)
        return out

    @property
    def verdict(self) -> str:
        c = self.counts
        if c[FAIL]:
            return FAIL
        if c[INCONCLUSIVE] or c[NOT_APPLICABLE]:
            # a not-applicable instance established nothing, so the claim
            # as a whole cannot honestly be reported as verified
            return INCONCLUSIVE
        return PASS

    def to_json_dict(self) -> dict:
        return {
            "kind": "claim_report",
            "claim": self.claim,
            "tool": {"name": "graphent", "version": __version__},
            "backend": _kernels.BACKEND,
            "bit_convention": BIT_CONVENTION,
            "population": self.population,
            "tolerances": dict(self.tolerances),
            "seeds": dict(self.seeds),
            "summary": self.counts,
            "verdict": self.verdict,
            "instances": [
                {
                    "instance": r.instance,
                    "verdict": r.verdict,
                    "residual": r.residual,
                    "detail": r.detail,
                    "certificate": r.certificate,
                }
                for r in self.instances
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self, json_name: str = "") -> str:
        """Summary table; certificate paths point into the sibling JSON file."""
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim", "instance", "verdict", "residual", "certificate_path"])
        for i, r in enumerate(self.instances):
            path = f"{json_name}#instances/{i}/certificate" if r.certificate is not None else ""
            writer.writerow(
                [self.claim, r.instance, r.verdict, "" if r.residual is None else repr(r.residual), path]
            )
        return buf.getvalue()


def _finish(claim, population, instances, tolerances, seeds, t0) -> ClaimReport:
    inst = tuple(sorted(instances, key=lambda r: r.instance))
    return ClaimReport(
        claim=claim,
        population=population,
        instances=inst,
        tolerances=dict(tolerances),
        seeds=dict(seeds),
        wall_clock_seconds=time.perf_counter() - t0,
    )


def _fmt_subset(subset) -> str:
    return "(" + ",".join(str(int(q)) for q in subset) + ")"


# ---------------------------------------------------------------------------
# measurement certificates (plain recomputable facts)


def _state_source(s: StateVector) -> dict:
    return {"num_qubits": s.num_qubits, "amplitudes": _cplx_vector(s.amps)}


def _measure_certificate(source: dict, subset, measure: str, value: float, tolerance: float) -> dict:
    return {
        "kind": "measure_check",
        "bit_convention": BIT_CONVENTION,
        "source": dict(source),
        "subset": None if subset is None else [int(q) for q in subset],
        "measure": measure,
        "value": float(value),
        "tolerance": float(tolerance),
    }


def _state_from_source(source: dict) -> StateVector:
    keys = [k for k in ("graph6", "amplitudes", "mg4_c", "ghz", "w") if k in source]
    if len(keys) != 1:
        raise ValueError("source must name exactly one construction")
    k = keys[0]
    if k == "graph6":
        return build_graph_state(parse_graph6(source["graph6"]))
    if k == "amplitudes":
        amps = np.array([complex(re, im) for re, im in source["amplitudes"]])
        return StateVector(int(source["num_qubits"]), amps)
    if k == "mg4_c":
        return mg4(float(source["mg4_c"]))
    if k == "ghz":
        return ghz_state(int(source["ghz"]))
    return w_state(int(source["w"]))


# -- independent recomputation helpers (numpy only; no reuse of the search
#    code paths, so a recheck exercises a genuinely different route)


def _indep_schmidt(amps: np.ndarray, n: int, part_a) -> np.ndarray:
    part_a = tuple(sorted(int(q) for q in part_a))
    part_b = tuple(q for q in range(n) if q not in part_a)
    tensor = amps.reshape([2] * n).transpose(part_a + part_b)
    mat = tensor.reshape(1 << len(part_a), 1 << len(part_b))
    return np.linalg.svd(mat, compute_uv=False)


def _indep_concurrence(mat: np.ndarray) -> float:
    yy = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)
    vals, vecs = np.linalg.eigh((mat + mat.conj().T) / 2)
    vals = np.clip(vals, 0.0, None)
    x = vecs * np.sqrt(vals)
    sv = np.linalg.svd(x.T @ yy @ x, compute_uv=False)
    return float(max(0.0, sv[0] - sv[1:].sum()))


def _indep_tangle(amps: np.ndarray) -> float:
    """Three-tangle via the degree-4 invariant, written out from scratch."""
    a = amps
    d1 = (
        (a[0] * a[7]) ** 2
        + (a[1] * a[6]) ** 2
        + (a[2] * a[5]) ** 2
        + (a[4] * a[3]) ** 2
    )
    d2 = (
        a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1]
    )
    d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


def _indep_negativity(mat: np.ndarray, n: int, part_b) -> float:
    part_b = tuple(sorted(int(q) for q in part_b))
    tensor = mat.reshape([2] * (2 * n))
    perm = list(range(2 * n))
    for q in part_b:
        perm[q], perm[n + q] = perm[n + q], perm[q]
    swapped = tensor.transpose(perm).reshape(1 << n, 1 << n)
    vals = np.linalg.eigvalsh((swapped + swapped.conj().T) / 2)
    return float(max(0.0, -vals[vals < 0].sum()))


def _indep_min_cut_entropy(amps: np.ndarray, n: int) -> tuple[float, tuple[int, ...]]:
    best = np.inf
    best_cut: tuple[int, ...] = ()
    for mask in range(1, 1 << (n - 1)):
        cut = tuple(q for q in range(n) if (mask >> (n - 1 - q)) & 1) or (0,)
        # qubit 0 always on side a: enumerate masks over qubits 1..n-1 with 0 added
        cut = (0,) + tuple(q for q in range(1, n) if (mask >> (q - 1)) & 1)
        if len(cut) == n:
            continue
        sv = _indep_schmidt(amps, n, cut)
        ent = 1.0 - float(np.sum(sv**4))
        if ent < best:
            best = ent
            best_cut = cut
    return best, best_cut


_MEASURES = {
    "concurrence_pair",
    "purity_pair",
    "three_tangle_pure",
    "single_qubit_reduction_error",
    "product_gap_min",
    "pairwise_concurrence_max",
    "pairwise_vanishing_min_slack",
}


def _recompute_measure(measure: str, source: dict, subset) -> float:
    s = _state_from_source(source)
    n = s.num_qubits
    if measure == "concurrence_pair":
        return _indep_concurrence(partial_trace(s, subset).matrix)
    if measure == "purity_pair":
        m = partial_trace(s, subset).matrix
        return float(np.trace(m @ m).real)
    if measure == "three_tangle_pure":
        return _indep_tangle(np.asarray(s.amps))
    if measure == "single_qubit_reduction_error":
        return max(
            float(np.abs(partial_trace(s, (q,)).matrix - np.eye(2) / 2).max()) for q in range(n)
        )
    if measure == "product_gap_min":
        gap = np.inf
        for mask in range(1 << (n - 1)):
            cut = (0,) + tuple(q for q in range(1, n) if (mask >> (q - 1)) & 1)
            if len(cut) == n:
                continue
            sv = _indep_schmidt(np.asarray(s.amps), n, cut)
            gap = min(gap, 1.0 - float(sv[0]))
        return float(gap)
    if measure == "pairwise_concurrence_max":
        return max(
            _indep_concurrence(partial_trace(s, p).matrix)
            for p in itertools.combinations(range(n), 2)
        )
    if measure == "pairwise_vanishing_min_slack":
        params = _params_from_source(source)
        return float(pairwise_vanishing_slacks(params).min())
    raise ValueError(f"unknown measure {measure!r}")


# ---------------------------------------------------------------------------
# certification instance builders


def _zero_tangle_instance(
    dm: DensityMatrix, label: str, restarts: int, seed: int, provenance: dict
) -> InstanceResult:
    out = certify_zero_tangle(dm, restarts=restarts, seed=seed)
    if out.certified:
        cert = out.certificate
        live = cert.decomposition.weights >= cert.weight_floor
        resid = float(np.max(cert.residuals[live]))
        doc = cert.to_json_dict()
        doc["provenance"] = dict(provenance)
        return InstanceResult(label, PASS, residual=resid, detail={"attempts": len(out.attempts)}, certificate=doc)
    return InstanceResult(
        label,
        INCONCLUSIVE,
        residual=float(out.best_value),
        detail={"attempts": [dict(a) for a in out.attempts]},
    )


def _biseparable_instance(
    dm: DensityMatrix, label: str, restarts: int, seed: int, provenance: dict
) -> InstanceResult:
    out = certify_biseparable(dm, restarts=restarts, seed=seed)
    if out.certified:
        cert = out.certificate
        live = cert.decomposition.weights >= cert.weight_floor
        resid = float(np.max(cert.residuals[live]))
        doc = cert.to_json_dict()
        doc["provenance"] = dict(provenance)
        return InstanceResult(label, PASS, residual=resid, detail={"attempts": len(out.attempts)}, certificate=doc)
    return InstanceResult(
        label,
        INCONCLUSIVE,
        residual=float(out.best_value),
        detail={"attempts": [dict(a) for a in out.attempts]},
    )


def _witness_certificate(g: Graph, subset, witness: LcWitness) -> dict:
    return {
        "kind": "lc_witness",
        "graph6": to_graph6(g),
        "subset": [int(q) for q in sorted(subset)],
        "moves": [int(a) for a in witness.moves],
        "witness_graph6": to_graph6(witness.resulting_graph),
    }


def _separability_instance(g: Graph, subset, witness: LcWitness, label: str) -> InstanceResult:
    cert = theorem2_separable_decomposition(g, subset, witness)
    resid = float(cert.schmidt_seconds.max())
    return InstanceResult(
        label,
        PASS,
        residual=resid,
        detail={
            "bipartition": [list(cert.bipartition[0]), list(cert.bipartition[1])],
            "members": len(cert.decomposition.members),
        },
        certificate=cert.to_json_dict(),
    )


# ---------------------------------------------------------------------------
# claim drivers


def verify_lemma1(restarts: int = 32, seed: int = 0) -> ClaimReport:
    """Zero-tangle certificates for every triple of every 4-vertex class.

    Also records which classes reproduce separable members under the fixed
    rank-2 mixing matrix, and re-validates one certificate transported along
    a local-complementation unitary to its orbit neighbor.
    """
    t0 = time.perf_counter()
    instances: list[InstanceResult] = []
    reps = enumerate_connected_graphs(4)
    fixed_mix_worst: dict[str, float] = {}
    for g in reps:
        g6 = to_graph6(g)
        state = build_graph_state(g)
        worst = 0.0
        for triple in itertools.combinations(range(4), 3):
            dm = partial_trace(state, triple)
            instances.append(
                _zero_tangle_instance(
                    dm,
                    f"tangle {g6} {_fmt_subset(triple)}",
                    restarts,
                    seed,
                    {"graph6": g6, "subset": list(triple)},
                )
            )
            dec = lemma1_decomposition(dm)
            seconds = [
                float(schmidt_coefficients(m, ((0,), (1, 2)))[1]) for m in dec.members
            ]
            worst = max(worst, max(seconds))
            instances.append(
                InstanceResult(
                    f"fixed-mix {g6} {_fmt_subset(triple)}",
                    INFO,
                    residual=max(seconds),
                    detail={
                        "schmidt_seconds": seconds,
                        "separable_first_vs_rest": max(seconds) < SCHMIDT_SECOND_TOL,
                    },
                )
            )
        fixed_mix_worst[g6] = worst
    identified = sorted(g6 for g6, w in fixed_mix_worst.items() if w < SCHMIDT_SECOND_TOL)
    instances.append(
        InstanceResult(
            "fixed-mix identification",
            PASS if identified else FAIL,
            detail={"identified": identified, "worst_by_class": fixed_mix_worst},
            certificate={
                "kind": "fixed_mix_identification",
                "bit_convention": BIT_CONVENTION,
                "schmidt_threshold": SCHMIDT_SECOND_TOL,
                "identified": identified,
                "worst_by_class": {k: float(v) for k, v in fixed_mix_worst.items()},
            }
            if identified
            else None,
        )
    )
    instances.append(_lemma1_transport_instance(restarts, seed))
    return _finish(
        "lemma1",
        "6 connected 4-vertex classes x 4 triples, plus fixed-mix scan and transport cross-check",
        instances,
        {
            "certification_threshold": CERT_TOL,
            "schmidt_second": SCHMIDT_SECOND_TOL,
            "transport_agreement": TRANSPORT_TOL,
        },
        {"seed": seed, "restarts": restarts},
        t0,
    )


def _lemma1_transport_instance(restarts: int, seed: int) -> InstanceResult:
    """Certify one reduction, then push the certificate along an LC move.

    The move's local unitary maps the reduction of the source graph to the
    reduction of its orbit neighbor, so the transported members must form a
    valid zero-tangle certificate there with unchanged member tangles.
    """
    src = family("complete", 4)
    dst = local_complement(src, 0)
    triple = (1, 2, 3)
    out = certify_zero_tangle(partial_trace(build_graph_state(src), triple), restarts=restarts, seed=seed)
    if not out.certified:
        return InstanceResult(
            "lc-transport complete->neighbor",
            INCONCLUSIVE,
            residual=float(out.best_value),
            detail={"stage": "source certification failed"},
        )
    dec = out.certificate.decomposition
    u = lc_unitary(src, 0).restrict(triple)
    moved = [u.apply(m) for m in dec.members]
    rho_dst = partial_trace(build_graph_state(dst), triple)
    recon = sum(
        w * np.outer(m.amps, m.amps.conj()) for w, m in zip(dec.weights, moved)
    )
    recon_err = float(np.abs(recon - rho_dst.matrix).max())
    tangle_shift = max(
        abs(three_tangle_pure(a) - three_tangle_pure(b)) for a, b in zip(dec.members, moved)
    )
    agree = max(recon_err, tangle_shift)
    transported = Decomposition(
        source=rho_dst,
        weights=dec.weights,
        members=tuple(moved),
        mixing_isometry=dec.mixing_isometry,
    )
    residuals = np.array([three_tangle_pure(m) for m in transported.members])
    doc = {
        "kind": "zero_tangle_certificate",
        "bit_convention": BIT_CONVENTION,
        "threshold": out.certificate.threshold,
        "weight_floor": out.certificate.weight_floor,
        "bound_value": float(np.dot(transported.weights, residuals)),
        "qubit_labels": list(rho_dst.qubit_labels),
        "source_matrix": _cplx_matrix(rho_dst.matrix),
        "weights": [float(x) for x in transported.weights],
        "members": [_cplx_vector(m.amps) for m in transported.members],
        "mixing_isometry": _cplx_matrix(transported.mixing_isometry),
        "residuals": [float(x) for x in residuals],
        "search": dict(out.certificate.search),
        "provenance": {
            "graph6": to_graph6(dst),
            "subset": list(triple),
            "transported_from_graph6": to_graph6(src),
            "move": 0,
        },
    }
    verdict = PASS if agree < TRANSPORT_TOL else FAIL
    return InstanceResult(
        "lc-transport complete->neighbor",
        verdict,
        residual=agree,
        detail={"reconstruction_error": recon_err, "member_tangle_shift": float(tangle_shift)},
        certificate=doc if verdict == PASS else None,
    )


def _theorem1_cell_worker(payload) -> InstanceResult:
    g6, triple, restarts, seed = payload
    dm = partial_trace(build_graph_state(parse_graph6(g6)), triple)
    return _zero_tangle_instance(
        dm,
        f"tangle {g6} {_fmt_subset(triple)}",
        restarts,
        seed,
        {"graph6": g6, "subset": list(triple)},
    )


def verify_theorem1(
    n: int,
    sample: int | None = None,
    seed: int = 0,
    restarts: int = 32,
    workers: int | None = None,
) -> ClaimReport:
    """Certify zero three-tangle for triple reductions of n-vertex classes.

    Exhaustive for 4 <= n <= 6; at n = 7 a seeded sample of cells (default
    200) is examined. ``workers`` fans cells out across processes; the
    result is independent of the worker count.
    """
    if not 4 <= n <= 7:
        raise CapacityError("triple certification population covers 4..7 vertices")
    t0 = time.perf_counter()
    reps = enumerate_connected_graphs(n)
    cells = [
        (to_graph6(g), triple)
        for g in reps
        for triple in itertools.combinations(range(n), 3)
    ]
    cells.sort()
    population = f"connected {n}-vertex classes ({len(reps)}) x {len(list(itertools.combinations(range(n), 3)))} triples"
    if n == 7:
        count = 200 if sample is None else int(sample)
        if not 1 <= count <= len(cells):
            raise ValueError("sample size out of range")
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(cells), size=count, replace=False)
        cells = [cells[i] for i in sorted(picked)]
        population += f", sampled {count} cells (seed {seed})"
    elif sample is not None:
        raise ValueError("sampling applies only at n = 7")
    payloads = [(g6, triple, restarts, seed) for g6, triple in cells]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk = max(1, len(payloads) // (workers * 8))
            instances = list(pool.map(_theorem1_cell_worker, payloads, chunksize=chunk))
    else:
        instances = [_theorem1_cell_worker(p) for p in payloads]
    instances.append(_disconnected_triple_crosscheck(n))
    return _finish(
        "theorem1",
        population,
        instances,
        {"certification_threshold": CERT_TOL},
        {"seed": seed, "restarts": restarts},
        t0,
    )


def _disconnected_triple_crosscheck(n: int) -> InstanceResult:
    """A path-graph triple with a disconnected induced subgraph.

    Its reduction separates with an empty move list, tying the triple
    population to the subset-separability machinery on the easiest case.
    """
    g = family("path", n)
    triple = (0, 1, 3) if n == 4 else (0, 2, 4)
    sub, _ = induced_subgraph(g, triple)
    witness = LcWitness((), g)
    inst = _separability_instance(
        g, triple, witness, f"disconnected-triple crosscheck path {_fmt_subset(triple)}"
    )
    detail = dict(inst.detail)
    detail["induced_subgraph_connected"] = is_connected(sub)
    return InstanceResult(inst.instance, inst.verdict, inst.residual, detail, inst.certificate)


def verify_pairwise_zero(n: int, sample_graphs: int | None = None, seed: int = 0) -> ClaimReport:
    """Concurrence of every pair reduction of every connected class is zero.

    Exhaustive for 3 <= n <= 6; at n = 7 a seeded sample of classes
    (default 200) is examined.
    """
    if not 3 <= n <= 7:
        raise CapacityError("pairwise population covers 3..7 vertices")
    t0 = time.perf_counter()
    reps = sorted(enumerate_connected_graphs(n), key=to_graph6)
    population = f"connected {n}-vertex classes ({len(reps)}) x {n * (n - 1) // 2} pairs"
    if n == 7:
        count = 200 if sample_graphs is None else int(sample_graphs)
        if not 1 <= count <= len(reps):
            raise ValueError("sample size out of range")
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(reps), size=count, replace=False)
        reps = [reps[i] for i in sorted(picked)]
        population += f", sampled {count} classes (seed {seed})"
    elif sample_graphs is not None:
        raise ValueError("sampling applies only at n = 7")
    instances = []
    for g in reps:
        g6 = to_graph6(g)
        state = build_graph_state(g)
        for pair in itertools.combinations(range(n), 2):
            value = concurrence(partial_trace(state, pair))
            ok = value < CONCURRENCE_ZERO_TOL
            instances.append(
                InstanceResult(
                    f"pair {g6} {_fmt_subset(pair)}",
                    PASS if ok else FAIL,
                    residual=float(value),
                    detail={} if ok else {"concurrence": float(value), "graph6": g6, "pair": list(pair)},
                    certificate=_measure_certificate(
                        {"graph6": g6}, pair, "concurrence_pair", value, CONCURRENCE_ZERO_TOL
                    )
                    if ok
                    else None,
                )
            )
    return _finish(
        "pairwise",
        population,
        instances,
        {"concurrence_zero": CONCURRENCE_ZERO_TOL},
        {"seed": seed},
        t0,
    )


def verify_theorem2(g: Graph, vertices, state_level: bool | None = None) -> ClaimReport:
    """Witness search plus separable decomposition for one (graph, subset).

    When no orbit member disconnects the induced subgraph the criterion
    simply does not apply (the claim is one-directional), reported as such.
    """
    t0 = time.perf_counter()
    s = as_vertex_set(vertices, g.n)
    subset = tuple(sorted(s))
    if not is_connected(g):
        raise ValueError("the graph must be connected")
    g6 = to_graph6(g)
    if state_level is None:
        state_level = g.n <= 8 and len(subset) <= 7
    instances = []
    witness = can_disconnect_by_lc(g, subset)
    label = f"witness {g6} {_fmt_subset(subset)}"
    if witness is None:
        instances.append(
            InstanceResult(
                label,
                NOT_APPLICABLE,
                detail={"reason": "no orbit member disconnects the induced subgraph"},
            )
        )
    else:
        instances.append(
            InstanceResult(
                label,
                PASS,
                detail={"moves": [int(a) for a in witness.moves]},
                certificate=_witness_certificate(g, subset, witness),
            )
        )
        if state_level:
            instances.append(
                _separability_instance(g, subset, witness, f"certificate {g6} {_fmt_subset(subset)}")
            )
    return _finish(
        "theorem2",
        f"graph {g6}, subset {_fmt_subset(subset)}",
        instances,
        {"member_schmidt_second": CERT_TOL, "reconstruction": CERT_TOL},
        {},
        t0,
    )


def verify_corollary1(
    kind: str,
    n: int,
    tree_seeds: tuple[int, ...] = (0, 1, 2, 3, 4),
    state_level: bool | None = None,
) -> ClaimReport:
    """Every 2..(n-1)-subset of the family graph yields a disconnection witness.

    ``kind`` is path, complete, or tree (five seeded trees by default); for
    n <= 6 each witness is upgraded to a checked separable decomposition.
    A subset with no witness is reported as a counterexample candidate.
    """
    if kind not in ("path", "complete", "tree"):
        raise ValueError("kind must be path, complete, or tree")
    if not 3 <= n <= 8:
        raise CapacityError("family scan covers 3..8 vertices")
    if state_level is None:
        state_level = n <= 6
    t0 = time.perf_counter()
    graphs: list[tuple[str, Graph]] = []
    if kind == "tree":
        for s in tree_seeds:
            g = family("tree", n, seed=s)
            graphs.append((f"{to_graph6(g)}@{s}", g))
    else:
        g = family(kind, n)
        graphs.append((to_graph6(g), g))
    instances = []
    for tag, g in graphs:
        orbit = _orbit_moves(g)
        for k in range(2, n):
            for subset in itertools.combinations(range(n), k):
                witness = None
                for member, moves in orbit.items():
                    sub, _ = induced_subgraph(member, subset)
                    if not is_connected(sub):
                        witness = LcWitness(moves, member)
                        break
                label = f"witness {tag} {_fmt_subset(subset)}"
                if witness is None:
                    instances.append(
                        InstanceResult(
                            label,
                            FAIL,
                            detail={
                                "counterexample_candidate": True,
                                "graph6": to_graph6(g),
                                "subset": list(subset),
                                "orbit_size": len(orbit),
                            },
                        )
                    )
                    continue
                instances.append(
                    InstanceResult(
                        label,
                        PASS,
                        detail={"moves": [int(a) for a in witness.moves]},
                        certificate=_witness_certificate(g, subset, witness),
                    )
                )
                if state_level:
                    instances.append(
                        _separability_instance(
                            g, subset, witness, f"certificate {tag} {_fmt_subset(subset)}"
                        )
                    )
    seeds = {"tree_seeds": list(tree_seeds)} if kind == "tree" else {}
    return _finish(
        "corollary1",
        f"{kind} family, n={n}, subsets of size 2..{n - 1}"
        + (f", {len(graphs)} seeded trees" if kind == "tree" else ""),
        instances,
        {"member_schmidt_second": CERT_TOL, "reconstruction": CERT_TOL},
        seeds,
        t0,
    )


def check_fully_entangled(
    s: StateVector,
    seed: int = 0,
    restarts: int = 32,
    bisep_restarts: int = 4,
    source: dict | None = None,
) -> ClaimReport:
    """Three-condition examination of a pure state (2 <= n <= 6 qubits).

    No product bipartition; every single-qubit reduction maximally mixed;
    and per level k = 2..n-1, every k-qubit reduction free of genuine
    k-party entanglement — pair concurrences must vanish outright, while
    levels 3 and above carry certified / inconclusive statuses (an upper
    bound that fails to reach zero proves nothing). Once a definitive
    failure exists, deeper levels are skipped.
    """
    n = s.num_qubits
    if n < 2:
        raise ValueError("the check needs at least two qubits")
    if n > 6:
        raise CapacityError("the full check is capped at 6 qubits")
    if source is None:
        source = _state_source(s)
    t0 = time.perf_counter()
    instances = []
    amps = np.asarray(s.amps)

    gap = np.inf
    product_cut = None
    for mask in range(1 << (n - 1)):
        cut = (0,) + tuple(q for q in range(1, n) if (mask >> (q - 1)) & 1)
        if len(cut) == n:
            continue
        sv = _indep_schmidt(amps, n, cut)
        if 1.0 - sv[0] < gap:
            gap = 1.0 - float(sv[0])
            product_cut = cut
    cond1_ok = gap >= PRODUCT_GAP_TOL
    instances.append(
        InstanceResult(
            "condition1 no-product-bipartition",
            PASS if cond1_ok else FAIL,
            residual=float(gap),
            detail={} if cond1_ok else {"product_bipartition": list(product_cut)},
            certificate=_measure_certificate(source, None, "product_gap_min", gap, PRODUCT_GAP_TOL)
            if cond1_ok
            else None,
        )
    )

    dev = max(float(np.abs(partial_trace(s, (q,)).matrix - np.eye(2) / 2).max()) for q in range(n))
    cond2_ok = dev < REDUCTION_IDENTITY_TOL
    instances.append(
        InstanceResult(
            "condition2 single-qubit-reductions",
            PASS if cond2_ok else FAIL,
            residual=dev,
            detail={} if cond2_ok else {"max_deviation_from_identity_over_2": dev},
            certificate=_measure_certificate(
                source, None, "single_qubit_reduction_error", dev, REDUCTION_IDENTITY_TOL
            )
            if cond2_ok
            else None,
        )
    )

    failed = not (cond1_ok and cond2_ok)
    level_status: dict[int, str] = {}
    for k in range(2, n):
        if failed and k > 2:
            level_status[k] = "skipped"
            instances.append(
                InstanceResult(
                    f"level {k} status",
                    INFO,
                    detail={"status": "skipped", "reason": "definitive failure at an earlier condition"},
                )
            )
            continue
        cell_verdicts = []
        for subset in itertools.combinations(range(n), k):
            label_sub = _fmt_subset(subset)
            if k == 2:
                value = concurrence(partial_trace(s, subset))
                ok = value < CONCURRENCE_ZERO_TOL
                cell_verdicts.append(PASS if ok else FAIL)
                instances.append(
                    InstanceResult(
                        f"level 2 pair {label_sub}",
                        PASS if ok else FAIL,
                        residual=float(value),
                        detail={} if ok else {"concurrence": float(value), "pair": list(subset)},
                        certificate=_measure_certificate(
                            source, subset, "concurrence_pair", value, CONCURRENCE_ZERO_TOL
                        )
                        if ok
                        else None,
                    )
                )
            elif k == 3:
                inst = _zero_tangle_instance(
                    partial_trace(s, subset),
                    f"level 3 triple {label_sub}",
                    restarts,
                    seed,
                    {"source": source, "subset": list(subset)},
                )
                cell_verdicts.append(inst.verdict)
                instances.append(inst)
            else:
                inst = _biseparable_instance(
                    partial_trace(s, subset),
                    f"level {k} subset {label_sub}",
                    bisep_restarts,
                    seed,
                    {"source": source, "subset": list(subset)},
                )
                cell_verdicts.append(inst.verdict)
                instances.append(inst)
        if FAIL in cell_verdicts:
            status = "violated"
            failed = True
        elif INCONCLUSIVE in cell_verdicts:
            status = "inconclusive"
        else:
            status = "certified"
        level_status[k] = status
        instances.append(
            InstanceResult(f"level {k} status", INFO, detail={"status": status})
        )
    return _finish(
        "fully-entangled",
        f"{n}-qubit pure state: {1 << (n - 1)} bipartitions, {n} reductions, levels 2..{n - 1}",
        instances,
        {
            "product_gap": PRODUCT_GAP_TOL,
            "reduction_identity": REDUCTION_IDENTITY_TOL,
            "concurrence_zero": CONCURRENCE_ZERO_TOL,
            "certification_threshold": CERT_TOL,
        },
        {"seed": seed, "restarts": restarts, "bisep_restarts": bisep_restarts},
        t0,
    )


# ---------------------------------------------------------------------------
# the four-qubit normal-form family


@dataclass(frozen=True)
class NormalFormParams:
    """Parameters a, b, c, d of the four-qubit normal-form family.

    Derived quantities: A=(a+d)/2, B=(b+c)/2, C=(a-d)/2, D=(b-c)/2 with
    polar forms x1..x4 and phases (the first phase is gauged to zero, so A
    is a nonnegative real). The stored parameters must already be scaled so
    the resulting state has unit norm — equivalently x1^2+x2^2+x3^2+x4^2 =
    1/2 — and gauged; :meth:`from_raw` performs both and records the factor.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    gauge_factor: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        total = sum(abs(v) ** 2 for v in (self.A, self.B, self.C, self.D))
        if abs(total - 0.5) > PARAM_NORM_TOL:
            raise ValueError(
                f"|A|^2+|B|^2+|C|^2+|D|^2 = {total}, expected 1/2 (use from_raw to normalize)"
            )
        if abs(self.A.imag) > PARAM_NORM_TOL or self.A.real < -PARAM_NORM_TOL:
            raise ValueError("the phase gauge requires A to be a nonnegative real")

    @classmethod
    def from_raw(cls, a: complex, b: complex, c: complex, d: complex) -> "NormalFormParams":
        """Scale to unit state norm and rotate the global phase so A >= 0."""
        A = (a + d) / 2.0
        B = (b + c) / 2.0
        C = (a - d) / 2.0
        D = (b - c) / 2.0
        total = sum(abs(v) ** 2 for v in (A, B, C, D))
        if total < 1e-24:
            raise ValueError("all four amplitudes vanish")
        factor = 1.0 / np.sqrt(2.0 * total)
        if abs(A) > 1e-300:
            factor *= np.exp(-1j * np.angle(A))
        return cls(a * factor, b * factor, c * factor, d * factor, gauge_factor=complex(factor))

    @property
    def A(self) -> complex:
        return (self.a + self.d) / 2.0

    @property
    def B(self) -> complex:
        return (self.b + self.c) / 2.0

    @property
    def C(self) -> complex:
        return (self.a - self.d) / 2.0

    @property
    def D(self) -> complex:
        return (self.b - self.c) / 2.0

    @property
    def magnitudes(self) -> tuple[float, float, float, float]:
        return (abs(self.A), abs(self.B), abs(self.C), abs(self.D))

    @property
    def phases(self) -> tuple[float, float, float, float]:
        return (
            0.0,
            float(np.angle(self.B)),
            float(np.angle(self.C)),
            float(np.angle(self.D)),
        )

    def to_json_dict(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "d": [self.d.real, self.d.imag],
            "gauge_factor": [self.gauge_factor.real, self.gauge_factor.imag],
        }


def _params_from_source(source: dict) -> NormalFormParams:
    if "mg4_c" in source:
        return mg4_params(float(source["mg4_c"]))
    p = source["normal_form"]
    return NormalFormParams(
        complex(p["a"][0], p["a"][1]),
        complex(p["b"][0], p["b"][1]),
        complex(p["c"][0], p["c"][1]),
        complex(p["d"][0], p["d"][1]),
        gauge_factor=complex(p["gauge_factor"][0], p["gauge_factor"][1]),
    )


def normal_form_state(p: NormalFormParams) -> StateVector:
    """Place A on 0000/1111, C on 0011/1100, B on 0101/1010, D on 0110/1001."""
    amps = np.zeros(16, dtype=complex)
    amps[0b0000] = amps[0b1111] = p.A
    amps[0b0011] = amps[0b1100] = p.C
    amps[0b0101] = amps[0b1010] = p.B
    amps[0b0110] = amps[0b1001] = p.D
    return StateVector(4, amps)


_SLACK_PAIRS = ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2))


def pairwise_vanishing_slacks(p: NormalFormParams) -> np.ndarray:
    """Slack of each of the six inequalities tying parameter pairs to the
    squared magnitudes of the complementary pair; nonnegative slack
    everywhere makes every two-qubit reduction of the state unentangled.

    Order: (1,2), (3,4), (1,3), (2,4), (1,4), (2,3) in 1-based parameter
    indexing; each entry is right-hand side minus left-hand side.
    """
    x = p.magnitudes
    ph = p.phases
    out = np.empty(6)
    for row, (i, j) in enumerate(_SLACK_PAIRS):
        rest = [k for k in range(4) if k not in (i, j)]
        lhs = 2.0 * x[i] * x[j] * abs(np.cos(ph[i] - ph[j]))
        rhs = x[rest[0]] ** 2 + x[rest[1]] ** 2
        out[row] = rhs - lhs
    return out


def pairwise_vanishing_holds(p: NormalFormParams, tol: float = SLACK_TOL) -> bool:
    """True when all six inequalities hold within ``tol``."""
    return bool(pairwise_vanishing_slacks(p).min() >= -tol)


def mg4(c: float) -> StateVector:
    """One-parameter family c(|0000>+|1111>) + i sqrt(1/2-c^2)(|0011>+|1100>)."""
    c = float(c)
    if not -1e-12 <= c <= np.sqrt(0.5) + 1e-12:
        raise ValueError("c must lie in [0, sqrt(1/2)]")
    c = min(max(c, 0.0), float(np.sqrt(0.5)))
    d = float(np.sqrt(max(0.0, 0.5 - c * c)))
    amps = np.zeros(16, dtype=complex)
    amps[0b0000] = amps[0b1111] = c
    amps[0b0011] = amps[0b1100] = 1j * d
    return StateVector(4, amps)


def mg4_params(c: float) -> NormalFormParams:
    """Normal-form parameters whose state equals mg4(c) exactly."""
    c = float(c)
    if not -1e-12 <= c <= np.sqrt(0.5) + 1e-12:
        raise ValueError("c must lie in [0, sqrt(1/2)]")
    c = min(max(c, 0.0), float(np.sqrt(0.5)))
    d = float(np.sqrt(max(0.0, 0.5 - c * c)))
    return NormalFormParams(a=c + 1j * d, b=0j, c=0j, d=c - 1j * d)


def sample_normal_form_params(count: int, seed: int = 1):
    """Random gauged parameter draws (real parts uniform in [0,1], imaginary
    in [-1,1], then normalized); yields ``count`` NormalFormParams."""
    rng = np.random.default_rng(seed)
    produced = 0
    while produced < count:
        re = rng.uniform(0.0, 1.0, 4)
        im = rng.uniform(-1.0, 1.0, 4)
        try:
            p = NormalFormParams.from_raw(*(re + 1j * im))
        except ValueError:
            continue
        produced += 1
        yield p


def normal_form_sample_sweep(count: int = 10_000, seed: int = 1) -> dict:
    """Check both directions of the inequality criterion on random draws.

    Returns summary statistics: when all six inequalities hold, every pair
    concurrence of the built state must vanish; when one fails, some pair
    concurrence should be strictly positive.
    """
    holders = violators = 0
    max_conc_holders = 0.0
    min_maxconc_violators = np.inf
    violators_without_witness = 0
    for p in sample_normal_form_params(count, seed):
        state = normal_form_state(p)
        mc = max(
            concurrence(partial_trace(state, pair))
            for pair in itertools.combinations(range(4), 2)
        )
        if pairwise_vanishing_holds(p):
            holders += 1
            max_conc_holders = max(max_conc_holders, mc)
        else:
            violators += 1
            min_maxconc_violators = min(min_maxconc_violators, mc)
            if mc <= 1e-6:
                violators_without_witness += 1
    return {
        "samples": count,
        "seed": seed,
        "holders": holders,
        "violators": violators,
        "max_concurrence_on_holders": float(max_conc_holders),
        "min_max_concurrence_on_violators": (
            None if violators == 0 else float(min_maxconc_violators)
        ),
        "violators_without_concurrence_witness": violators_without_witness,
    }


# ---------------------------------------------------------------------------
# the mg4 scan and the purity-based inequivalence flag


def _class_pair_purities() -> dict[str, list[float]]:
    table: dict[str, list[float]] = {}
    for g in enumerate_connected_graphs(4):
        state = build_graph_state(g)
        table[to_graph6(g)] = [
            float(purity(partial_trace(state, pair)))
            for pair in itertools.combinations(range(4), 2)
        ]
    return table


def lu_inequivalence_scan(grid, restarts: int = 8, seed: int = 0) -> ClaimReport:
    """Full examination of mg4 across a grid of c values.

    Per grid point: the purity of the qubits-(1,2) reduction against the
    finite set of graph-state pair purities (a local-unitary invariant, so a
    value outside the set certifies inequivalence), the no-product and
    maximally-mixed-reduction conditions, vanishing pair concurrences, the
    six parameter inequalities, and zero-tangle certificates for all four
    triples.
    """
    grid = [float(c) for c in grid]
    if not grid:
        raise ValueError("the grid must contain at least one value")
    for c in grid:
        if not -1e-12 <= c <= np.sqrt(0.5) + 1e-12:
            raise ValueError("grid values must lie in [0, sqrt(1/2)]")
    if len(set(repr(c) for c in grid)) != len(grid):
        raise ValueError("grid values must be distinct")
    t0 = time.perf_counter()
    table = _class_pair_purities()
    graph_values = sorted({round(v, 12) for row in table.values() for v in row})
    instances = []
    flagged = []
    for c in grid:
        state = mg4(c)
        tag = f"mg4 c={c!r}"
        source = {"mg4_c": c}

        p = float(purity(partial_trace(state, (1, 2))))
        dist = min(abs(p - v) for v in graph_values)
        outside = dist > PURITY_MATCH_TOL
        if outside:
            flagged.append({"c": c, "purity": p, "min_distance": float(dist)})
        instances.append(
            InstanceResult(
                f"{tag} purity",
                INFO,
                residual=p,
                detail={"purity": p, "min_distance_to_graph_set": float(dist), "flagged": outside},
            )
        )

        gap = _recompute_measure("product_gap_min", source, None)
        ok1 = gap >= PRODUCT_GAP_TOL
        instances.append(
            InstanceResult(
                f"{tag} condition1",
                PASS if ok1 else FAIL,
                residual=float(gap),
                detail={} if ok1 else {"product_gap": float(gap)},
                certificate=_measure_certificate(source, None, "product_gap_min", gap, PRODUCT_GAP_TOL)
                if ok1
                else None,
            )
        )
        dev = _recompute_measure("single_qubit_reduction_error", source, None)
        ok2 = dev < REDUCTION_IDENTITY_TOL
        instances.append(
            InstanceResult(
                f"{tag} condition2",
                PASS if ok2 else FAIL,
                residual=float(dev),
                detail={} if ok2 else {"max_deviation": float(dev)},
                certificate=_measure_certificate(
                    source, None, "single_qubit_reduction_error", dev, REDUCTION_IDENTITY_TOL
                )
                if ok2
                else None,
            )
        )
        mc = max(
            concurrence(partial_trace(state, pair))
            for pair in itertools.combinations(range(4), 2)
        )
        okp = mc < CONCURRENCE_ZERO_TOL
        instances.append(
            InstanceResult(
                f"{tag} pairwise",
                PASS if okp else FAIL,
                residual=float(mc),
                detail={} if okp else {"max_pair_concurrence": float(mc)},
                certificate=_measure_certificate(
                    source, None, "pairwise_concurrence_max", mc, CONCURRENCE_ZERO_TOL
                )
                if okp
                else None,
            )
        )
        slack = float(pairwise_vanishing_slacks(mg4_params(c)).min())
        oks = slack >= -SLACK_TOL
        instances.append(
            InstanceResult(
                f"{tag} slacks",
                PASS if oks else FAIL,
                residual=slack,
                detail={} if oks else {"min_slack": slack},
                certificate=_measure_certificate(
                    source, None, "pairwise_vanishing_min_slack", slack, SLACK_TOL
                )
                if oks
                else None,
            )
        )
        for triple in itertools.combinations(range(4), 3):
            instances.append(
                _zero_tangle_instance(
                    partial_trace(state, triple),
                    f"{tag} triple {_fmt_subset(triple)}",
                    restarts,
                    seed,
                    {"source": source, "subset": list(triple)},
                )
            )
    found = len(flagged) > 0
    instances.append(
        InstanceResult(
            "inequivalence flag",
            PASS if found else FAIL,
            detail={"flagged_count": len(flagged)}
            if found
            else {"flagged_count": 0, "grid": grid, "graph_values": graph_values},
            certificate={
                "kind": "purity_gap",
                "bit_convention": BIT_CONVENTION,
                "pair": [1, 2],
                "tolerance": PURITY_MATCH_TOL,
                "graph_pair_purities": {k: table[k] for k in sorted(table)},
                "graph_values": graph_values,
                "flagged": flagged,
            }
            if found
            else None,
        )
    )
    return _finish(
        "mg4-scan",
        f"mg4 family on {len(grid)} grid values x (purity, conditions, pairs, slacks, 4 triples)",
        instances,
        {
            "purity_match": PURITY_MATCH_TOL,
            "product_gap": PRODUCT_GAP_TOL,
            "reduction_identity": REDUCTION_IDENTITY_TOL,
            "concurrence_zero": CONCURRENCE_ZERO_TOL,
            "slack": SLACK_TOL,
            "certification_threshold": CERT_TOL,
        },
        {"seed": seed, "restarts": restarts},
        t0,
    )


# ---------------------------------------------------------------------------
# local-complementation class structure


def _cut_rank_profile(g: Graph) -> tuple[int, ...]:
    """Multiset of binary cut ranks over all bipartitions — invariant under
    both relabeling and local complementation, so it separates orbit cells."""
    prof = []
    full = (1 << g.n) - 1
    for mask in range(1, full):
        if not mask & 1:
            continue
        rows = [g.adj[v] & (full ^ mask) for v in range(g.n) if (mask >> v) & 1]
        # gaussian elimination over GF(2)
        basis: list[int] = []
        for row in rows:
            cur = row
            for b in basis:
                cur = min(cur, cur ^ b)
            if cur:
                basis.append(cur)
                basis.sort(reverse=True)
        prof.append(len(basis))
    return tuple(sorted(prof))


def _relabeled(g: Graph, perm) -> Graph:
    return Graph.from_edges(g.n, [(perm[a], perm[b]) for a, b in g.edges()])


def lc_class_partition(n: int) -> ClaimReport:
    """Partition the connected isomorphism classes by orbit membership.

    Each merge records the move and vertex map proving two classes
    equivalent; cut-rank profiles certify the separation of cells whose
    profiles differ. For n = 4 the expected split is exactly {4, 2}.
    """
    if not 1 <= n <= 7:
        raise CapacityError("class partition covers 1..7 vertices")
    t0 = time.perf_counter()
    reps = enumerate_connected_graphs(n)
    g6s = [to_graph6(g) for g in reps]
    buckets: dict[tuple, list[int]] = {}

    def _bucket_key(g: Graph) -> tuple:
        degs = tuple(sorted(g.degree(v) for v in range(g.n)))
        tri = tuple(
            sorted(
                sum(bin(g.adj[v] & g.adj[u]).count("1") for u in range(g.n) if g.has_edge(v, u))
                for v in range(g.n)
            )
        )
        return (g.edge_count(), degs, tri)

    for i, g in enumerate(reps):
        buckets.setdefault(_bucket_key(g), []).append(i)
    parent = list(range(len(reps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    merges = []
    for i, g in enumerate(reps):
        for a in range(n):
            h = local_complement(g, a)
            target = None
            perm = None
            for cand in buckets.get(_bucket_key(h), []):
                perm = find_isomorphism(h, reps[cand])
                if perm is not None:
                    target = cand
                    break
            if target is None:
                raise RuntimeError("orbit member matches no isomorphism class")
            ri, rj = find(i), find(target)
            if ri != rj:
                parent[ri] = rj
                merges.append(
                    {
                        "from_graph6": g6s[i],
                        "move": a,
                        "perm": [int(x) for x in perm],
                        "to_graph6": g6s[target],
                    }
                )
    cells_by_root: dict[int, list[int]] = {}
    for i in range(len(reps)):
        cells_by_root.setdefault(find(i), []).append(i)
    cells = sorted(
        (sorted(g6s[i] for i in members) for members in cells_by_root.values()),
        key=lambda c: (len(c), c),
    )
    sizes = [len(c) for c in cells]
    profiles = {g6s[i]: list(_cut_rank_profile(g)) for i, g in enumerate(reps)}
    cell_profiles = [sorted({tuple(profiles[g6]) for g6 in cell}) for cell in cells]
    separated = 0
    unseparated_pairs = []
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            if set(cell_profiles[i]) & set(cell_profiles[j]):
                unseparated_pairs.append([i, j])
            else:
                separated += 1
    cert = {
        "kind": "lc_partition",
        "n": n,
        "class_count": len(reps),
        "cells": cells,
        "merges": merges,
        "cut_rank_profiles": {k: profiles[k] for k in sorted(profiles)},
    }
    if n == 4:
        ok = sizes == [2, 4] and not unseparated_pairs
        main = InstanceResult(
            "partition n=4",
            PASS if ok else FAIL,
            detail={"sizes": sizes, "unseparated_cell_pairs": unseparated_pairs},
            certificate=cert if ok else None,
        )
    else:
        main = InstanceResult(
            f"partition n={n}",
            INFO,
            detail={"sizes": sizes},
            certificate=cert,
        )
    instances = [
        main,
        InstanceResult(
            "profile separation",
            INFO,
            detail={
                "separated_cell_pairs": separated,
                "unseparated_cell_pairs": unseparated_pairs,
            },
        ),
    ]
    return _finish(
        "lc-classes",
        f"connected {n}-vertex classes ({len(reps)}), single-move closure under isomorphism",
        instances,
        {},
        {},
        t0,
    )


# ---------------------------------------------------------------------------
# the independent certificate checker


def _problems_decomposition(doc: dict) -> tuple[list[str], np.ndarray, np.ndarray, np.ndarray]:
    """Validate weights/isometry/reconstruction of a serialized ensemble."""
    problems = []
    weights = np.asarray(doc["weights"], dtype=float)
    members = np.array(
        [[complex(re, im) for re, im in row] for row in doc["members"]]
    )
    mixing = np.array(
        [[complex(re, im) for re, im in row] for row in doc["mixing_isometry"]]
    )
    source = np.array(
        [[complex(re, im) for re, im in row] for row in doc["source_matrix"]]
    )
    if np.any(weights <= 0):
        problems.append("weights are not all positive")
    if abs(weights.sum() - 1.0) > 1e-9:
        problems.append(f"weights sum to {weights.sum()}")
    r = mixing.shape[1]
    if np.max(np.abs(mixing.conj().T @ mixing - np.eye(r))) > 1e-9:
        problems.append("mixing isometry columns are not orthonormal")
    if np.max(np.abs(source - source.conj().T)) > 1e-9:
        problems.append("source matrix is not Hermitian")
    if abs(np.trace(source).real - 1.0) > 1e-9:
        problems.append("source matrix trace is not 1")
    recon = (members.T * weights) @ members.conj()
    err = float(np.abs(recon - source).max())
    if err > CERT_TOL:
        problems.append(f"reconstruction error {err} exceeds {CERT_TOL}")
    for i, row in enumerate(members):
        if abs(np.linalg.norm(row) - 1.0) > 1e-8:
            problems.append(f"member {i} is not normalized")
            break
    return problems, weights, members, source


def _check_source_matrix(doc: dict, problems: list[str]) -> None:
    prov = doc.get("provenance", {})
    if "graph6" in prov and "subset" in prov:
        g = parse_graph6(prov["graph6"])
        rho = partial_trace(build_graph_state(g), tuple(prov["subset"])).matrix
        source = np.array([[complex(re, im) for re, im in row] for row in doc["source_matrix"]])
        dev = float(np.abs(rho - source).max())
        if dev > 1e-12:
            problems.append(f"provenance reduction deviates from source matrix by {dev}")
    elif "source" in prov and "subset" in prov:
        s = _state_from_source(prov["source"])
        rho = partial_trace(s, tuple(prov["subset"])).matrix
        source = np.array([[complex(re, im) for re, im in row] for row in doc["source_matrix"]])
        dev = float(np.abs(rho - source).max())
        if dev > 1e-12:
            problems.append(f"provenance reduction deviates from source matrix by {dev}")


def recheck_certificate(doc: dict) -> tuple[bool, list[str]]:
    """Re-validate a serialized certificate using independent routines.

    Nothing is searched and nothing from the original computation is
    trusted: ensembles are re-multiplied, member measures recomputed from
    closed forms, witnesses replayed move by move. Returns (ok, problems);
    a structurally broken document is a failed recheck, never an exception.
    """
    try:
        return _recheck_inner(doc)
    except Exception as exc:  # noqa: BLE001 - untrusted input must not raise
        return False, [f"malformed certificate document: {exc!r}"]


def _recheck_inner(doc: dict) -> tuple[bool, list[str]]:
    kind = doc.get("kind")
    problems: list[str] = []
    if doc.get("bit_convention", BIT_CONVENTION) != BIT_CONVENTION:
        return False, ["bit convention mismatch"]

    if kind == "zero_tangle_certificate":
        problems, weights, members, _ = _problems_decomposition(doc)
        threshold = float(doc["threshold"])
        floor = float(doc["weight_floor"])
        tangles = np.array([_indep_tangle(row) for row in members])
        for i, (w, t) in enumerate(zip(weights, tangles)):
            if w >= floor and t >= threshold:
                problems.append(f"live member {i} has tangle {t}")
        bound = float(np.dot(weights, tangles))
        if bound > float(doc["bound_value"]) + 1e-9:
            problems.append("stored bound understates the recomputed average")
        _check_source_matrix(doc, problems)
        return not problems, problems

    if kind == "biseparability_certificate":
        problems, weights, members, _ = _problems_decomposition(doc)
        threshold = float(doc["threshold"])
        floor = float(doc["weight_floor"])
        k = int(np.log2(members.shape[1]))
        for i, (w, row) in enumerate(zip(weights, members)):
            if w < floor:
                continue
            ent, _ = _indep_min_cut_entropy(row, k)
            if ent >= threshold:
                problems.append(f"live member {i} has min-cut entropy {ent}")
        _check_source_matrix(doc, problems)
        return not problems, problems

    if kind == "separability_certificate":
        problems, weights, members, _ = _problems_decomposition(doc)
        labels = [int(x) for x in doc["qubit_labels"]]
        part_a = [int(x) for x in doc["bipartition"][0]]
        positions = tuple(labels.index(q) for q in part_a)
        k = len(labels)
        tol = float(doc["tolerance"])
        for i, row in enumerate(members):
            sv = _indep_schmidt(row, k, positions)
            if len(sv) > 1 and sv[1] >= tol:
                problems.append(f"member {i} has second Schmidt coefficient {sv[1]}")
        source = np.array([[complex(re, im) for re, im in row] for row in doc["source_matrix"]])
        neg = _indep_negativity(source, k, positions)
        if neg > 1e-10:
            problems.append(f"negativity across the certified bipartition is {neg}")
        prov = doc.get("provenance", {})
        if {"graph6", "subset", "witness_moves", "witness_graph6"} <= prov.keys():
            g = parse_graph6(prov["graph6"])
            cur = g
            for a in prov["witness_moves"]:
                cur = local_complement(cur, int(a))
            if to_graph6(cur) != prov["witness_graph6"]:
                problems.append("witness replay does not reach the recorded endpoint")
            else:
                sub, _ = induced_subgraph(cur, tuple(prov["subset"]))
                if is_connected(sub):
                    problems.append("witness endpoint does not disconnect the subset")
            rho = partial_trace(build_graph_state(g), tuple(prov["subset"])).matrix
            dev = float(np.abs(rho - source).max())
            if dev > 1e-12:
                problems.append(f"provenance reduction deviates from source matrix by {dev}")
        return not problems, problems

    if kind == "measure_check":
        measure = doc["measure"]
        if measure not in _MEASURES:
            return False, [f"unknown measure {measure!r}"]
        value = _recompute_measure(measure, doc["source"], doc.get("subset"))
        if abs(value - float(doc["value"])) > _RECHECK_MATCH_TOL:
            problems.append(
                f"recomputed {measure} = {value} differs from stored {doc['value']}"
            )
        return not problems, problems

    if kind == "lc_witness":
        g = parse_graph6(doc["graph6"])
        cur = g
        for a in doc["moves"]:
            cur = local_complement(cur, int(a))
        if to_graph6(cur) != doc["witness_graph6"]:
            problems.append("move replay does not reach the recorded endpoint")
        else:
            sub, _ = induced_subgraph(cur, tuple(doc["subset"]))
            if is_connected(sub):
                problems.append("endpoint does not disconnect the subset")
        return not problems, problems

    if kind == "fixed_mix_identification":
        threshold = float(doc["schmidt_threshold"])
        recomputed: dict[str, float] = {}
        for g in enumerate_connected_graphs(4):
            g6 = to_graph6(g)
            state = build_graph_state(g)
            worst = 0.0
            for triple in itertools.combinations(range(4), 3):
                dec = lemma1_decomposition(partial_trace(state, triple))
                for m in dec.members:
                    sv = _indep_schmidt(np.asarray(m.amps), 3, (0,))
                    worst = max(worst, float(sv[1]))
            recomputed[g6] = worst
        identified = sorted(g6 for g6, w in recomputed.items() if w < threshold)
        if identified != list(doc["identified"]):
            problems.append(
                f"recomputed identification {identified} differs from stored {doc['identified']}"
            )
        for g6, stored in doc["worst_by_class"].items():
            if abs(recomputed.get(g6, np.inf) - float(stored)) > 1e-9:
                problems.append(f"class {g6} worst Schmidt coefficient mismatch")
        return not problems, problems

    if kind == "lc_partition":
        cells = [list(c) for c in doc["cells"]]
        known = {g6 for cell in cells for g6 in cell}
        roots: dict[str, str] = {g6: g6 for g6 in known}

        def find(x: str) -> str:
            while roots[x] != x:
                roots[x] = roots[roots[x]]
                x = roots[x]
            return x

        for merge in doc["merges"]:
            g = parse_graph6(merge["from_graph6"])
            h = local_complement(g, int(merge["move"]))
            perm = [int(x) for x in merge["perm"]]
            if sorted(perm) != list(range(h.n)):
                problems.append(
                    f"merge {merge['from_graph6']} --{merge['move']}--> {merge['to_graph6']} has a non-permutation vertex map"
                )
                continue
            if _relabeled(h, perm) != parse_graph6(merge["to_graph6"]):
                problems.append(
                    f"merge {merge['from_graph6']} --{merge['move']}--> {merge['to_graph6']} does not replay"
                )
                continue
            ra, rb = find(merge["from_graph6"]), find(merge["to_graph6"])
            if ra != rb:
                roots[ra] = rb
        regrouped: dict[str, set[str]] = {}
        for g6 in known:
            regrouped.setdefault(find(g6), set()).add(g6)
        rebuilt = sorted(
            (sorted(c) for c in regrouped.values()), key=lambda c: (len(c), c)
        )
        if rebuilt != sorted((sorted(c) for c in cells), key=lambda c: (len(c), c)):
            problems.append("merge closure does not reproduce the recorded cells")
        for g6, stored in doc["cut_rank_profiles"].items():
            if list(_cut_rank_profile(parse_graph6(g6))) != list(stored):
                problems.append(f"cut-rank profile mismatch for {g6}")
        return not problems, problems

    if kind == "purity_gap":
        table = _class_pair_purities()
        for g6, stored in doc["graph_pair_purities"].items():
            ours = table.get(g6)
            if ours is None or np.max(np.abs(np.array(ours) - np.array(stored))) > 1e-10:
                problems.append(f"pair purity table mismatch for {g6}")
        values = sorted({round(v, 12) for row in table.values() for v in row})
        if values != [float(v) for v in doc["graph_values"]]:
            problems.append("graph purity value set mismatch")
        pair = tuple(doc["pair"])
        tol = float(doc["tolerance"])
        for entry in doc["flagged"]:
            p = float(purity(partial_trace(mg4(float(entry["c"])), pair)))
            if abs(p - float(entry["purity"])) > 1e-10:
                problems.append(f"purity mismatch at c={entry['c']}")
            if min(abs(p - v) for v in values) <= tol:
                problems.append(f"flagged c={entry['c']} actually matches a graph value")
        return not problems, problems

    return False, [f"unknown certificate kind {kind!r}"]
