"""Command-line front end: build states, compute measures, run claim
suites, and explore local-complementation orbits.

Exit codes: 0 all checks passed; 1 a failure or counterexample was found;
2 an inconclusive or not-applicable instance is present; 64 usage error;
74 output could not be written. Identical invocations (including seeds)
produce byte-identical JSON on the same backend.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import re
import sys

import numpy as np

from . import BIT_CONVENTION, __version__, _kernels
from .claims import (
    ClaimReport,
    check_fully_entangled,
    lc_class_partition,
    lu_inequivalence_scan,
    recheck_certificate,
    verify_corollary1,
    verify_lemma1,
    verify_pairwise_zero,
    verify_theorem1,
    verify_theorem2,
    _fmt_subset,
)
from .entanglement import concurrence, negativity, three_tangle_pure
from .graphs import (
    Graph,
    can_disconnect_by_lc,
    family,
    parse_graph6,
    to_graph6,
    _orbit_moves,
)
from .qstate import (
    DensityMatrix,
    build_graph_state,
    ghz_state,
    partial_trace,
    purity,
    state_to_json,
    w_state,
)

EX_OK = 0
EX_FAIL = 1
EX_INCONCLUSIVE = 2
EX_USAGE = 64
EX_IO = 74

_CLAIMS = (
    "lemma1",
    "theorem1",
    "theorem2",
    "corollary1",
    "pairwise",
    "lc-classes",
    "fully-entangled",
    "mg4-scan",
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage by default; that status
    means "inconclusive" here, so usage errors are remapped."""

    def error(self, message):
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="graphent",
        description="Graph states, entanglement measures, and claim verification.",
    )
    parser.add_argument("--version", action="version", version=f"graphent {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    def add_graph_source(p, with_state=False):
        p.add_argument("--graph6", help="graph6 string ('-' reads one line from stdin)")
        p.add_argument(
            "--edges",
            help="edge list like '0 1,1 2' ('-' reads stdin); pairs separated by "
            "commas or newlines, endpoints by spaces or '-'",
        )
        p.add_argument(
            "--family",
            choices=("path", "cycle", "star", "complete", "tree"),
            help="named graph family (requires --n)",
        )
        p.add_argument("--n", type=int, help="vertex/qubit count")
        p.add_argument("--seed", type=int, default=0, help="seed (trees, sampling, searches)")
        if with_state:
            p.add_argument("--state", help="named state instead of a graph: ghzN or wN")

    b = sub.add_parser("build", help="construct a graph state and emit it as JSON")
    add_graph_source(b)
    b.add_argument("--out", help="output file (default: stdout)")

    m = sub.add_parser("measure", help="compute entanglement measures of a state")
    add_graph_source(m, with_state=True)
    m.add_argument("--pairs", action="store_true", help="pairwise concurrence table")
    m.add_argument("--tangle", action="store_true", help="three-tangle (3-qubit states)")
    m.add_argument("--negativity", action="store_true", help="negativity across every bipartition")
    m.add_argument("--purity", action="store_true", help="single-qubit and pair reduction purities")
    m.add_argument("--reductions", action="store_true", help="single-qubit reduction matrices")
    m.add_argument("--out", help="output file (default: stdout)")

    v = sub.add_parser("verify", help="run a claim suite and write JSON + CSV reports")
    v.add_argument("claim", choices=_CLAIMS, metavar="claim", help="|".join(_CLAIMS))
    add_graph_source(v, with_state=True)
    v.add_argument("--subset", help="comma-separated qubit subset, e.g. '0,2'")
    v.add_argument("--kind", choices=("path", "complete", "tree"), help="corollary1 family")
    v.add_argument("--tree-seeds", default="0,1,2,3,4", help="corollary1 tree seeds")
    v.add_argument("--grid", help="mg4-scan grid: start:end:step (inclusive) or c1,c2,...")
    v.add_argument("--restarts", type=int, help="search restarts (default 32; mg4-scan 8)")
    v.add_argument("--bisep-restarts", type=int, default=4, help="restarts for size-4+ cells")
    v.add_argument("--sample", type=int, help="sampled population size at n=7")
    v.add_argument("--workers", type=int, help="process pool size for theorem1 cells")
    v.add_argument("--witness-only", action="store_true", help="skip state-level certificates")
    v.add_argument("--out-dir", help="report directory (default: $GRAPHENT_OUTPUT_DIR or '.')")
    v.add_argument("--stem", help="report file stem (default: the claim id)")

    o = sub.add_parser("orbit", help="list a local-complementation orbit")
    add_graph_source(o)
    o.add_argument("--witness", help="subset to search a disconnection witness for")
    o.add_argument("--out", help="output file (default: stdout)")

    r = sub.add_parser("recheck", help="re-validate certificates in a report JSON")
    r.add_argument("report", help="path to a claim report or certificate JSON ('-' = stdin)")
    return parser


# ---------------------------------------------------------------------------
# input resolution


def _parse_edges(text: str, n: int | None) -> Graph:
    pairs = []
    for token in re.split(r"[,;\n]+", text.strip()):
        token = token.strip()
        if not token:
            continue
        ends = re.split(r"[\s\-]+", token)
        if len(ends) != 2:
            raise ValueError(f"edge {token!r} is not a pair of vertices")
        pairs.append((int(ends[0]), int(ends[1])))
    if not pairs and n is None:
        raise ValueError("an empty edge list needs --n for the vertex count")
    needed = max((max(a, b) for a, b in pairs), default=-1) + 1
    if n is None:
        n = needed
    elif n < needed:
        raise ValueError(f"--n {n} is smaller than the largest edge endpoint requires ({needed})")
    return Graph.from_edges(n, pairs)


def _graph_from_args(ns, parser) -> tuple[Graph, dict]:
    chosen = [ns.graph6 is not None, ns.edges is not None, ns.family is not None]
    if sum(chosen) != 1:
        parser.error("choose exactly one graph source: --graph6, --edges, or --family")
    if ns.graph6 is not None:
        text = sys.stdin.readline().strip() if ns.graph6 == "-" else ns.graph6
        g = parse_graph6(text)
        return g, {"graph6": to_graph6(g)}
    if ns.edges is not None:
        text = sys.stdin.read() if ns.edges == "-" else ns.edges
        g = _parse_edges(text, ns.n)
        return g, {"graph6": to_graph6(g), "edges": [list(e) for e in g.edges()]}
    if ns.n is None:
        parser.error("--family requires --n")
    g = family(ns.family, ns.n, seed=ns.seed)
    src = {"family": ns.family, "n": ns.n, "graph6": to_graph6(g)}
    if ns.family == "tree":
        src["seed"] = ns.seed
    return g, src


_STATE_RE = re.compile(r"(ghz|w)(\d+)", re.IGNORECASE)


def _state_from_args(ns, parser):
    if ns.state is not None:
        m = _STATE_RE.fullmatch(ns.state.strip())
        if m is None:
            parser.error("--state must look like ghz4 or w5")
        kind, n = m.group(1).lower(), int(m.group(2))
        if kind == "ghz":
            return ghz_state(n), {"ghz": n}
        return w_state(n), {"w": n}
    g, src = _graph_from_args(ns, parser)
    return build_graph_state(g), {"graph6": src["graph6"]}


def _parse_subset(text: str) -> tuple[int, ...]:
    try:
        subset = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ValueError(f"subset {text!r} is not a comma-separated list of integers") from exc
    if not subset:
        raise ValueError("the subset is empty")
    return subset


def _parse_grid(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("grid ranges use start:end:step")
        start, end, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        if end < start - 1e-12:
            raise ValueError("grid end is below its start")
        values = []
        k = 0
        while True:
            v = start + k * step
            if v > end + 1e-12:
                break
            values.append(v)
            k += 1
        return values
    return [float(tok) for tok in spec.split(",") if tok.strip() != ""]


# ---------------------------------------------------------------------------
# output


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _doc_header(source: dict) -> dict:
    return {
        "tool": {"name": "graphent", "version": __version__},
        "backend": _kernels.BACKEND,
        "bit_convention": BIT_CONVENTION,
        "source": source,
    }


# ---------------------------------------------------------------------------
# subcommands


def _cmd_build(ns, parser) -> int:
    g, src = _graph_from_args(ns, parser)
    state = build_graph_state(g)
    doc = {"kind": "graph_state", **_doc_header(src), "state": json.loads(state_to_json(state))}
    _emit(json.dumps(doc, sort_keys=True, indent=2), ns.out)
    return EX_OK


_NEGATIVITY_CAP = 8


def _cmd_measure(ns, parser) -> int:
    s, src = _state_from_args(ns, parser)
    n = s.num_qubits
    want_all = not (ns.pairs or ns.tangle or ns.negativity or ns.purity or ns.reductions)
    if ns.tangle and n != 3:
        parser.error("--tangle needs a 3-qubit state")
    if ns.negativity and n > _NEGATIVITY_CAP:
        parser.error(f"--negativity is capped at {_NEGATIVITY_CAP} qubits")
    measures: dict = {}
    if ns.pairs or want_all:
        measures["pair_concurrences"] = {
            _fmt_subset(p): float(concurrence(partial_trace(s, p)))
            for p in itertools.combinations(range(n), 2)
        }
    if ns.tangle or (want_all and n == 3):
        measures["tangle"] = float(three_tangle_pure(s))
    if ns.negativity or (want_all and n <= _NEGATIVITY_CAP):
        amps = np.asarray(s.amps)
        dm = DensityMatrix(tuple(range(n)), np.outer(amps, amps.conj()))
        table = {}
        for mask in range(1 << (n - 1)):
            part_a = (0,) + tuple(q for q in range(1, n) if (mask >> (q - 1)) & 1)
            if len(part_a) == n:
                continue
            part_b = tuple(q for q in range(n) if q not in part_a)
            table[f"{_fmt_subset(part_a)}|{_fmt_subset(part_b)}"] = float(
                negativity(dm, (part_a, part_b))
            )
        measures["negativities"] = table
    if ns.purity or want_all:
        table = {}
        for k in (1, 2):
            if n <= k:
                continue
            for subset in itertools.combinations(range(n), k):
                table[_fmt_subset(subset)] = float(purity(partial_trace(s, subset)))
        measures["purities"] = table
    if ns.reductions or want_all:
        measures["single_qubit_reductions"] = {
            str(q): [
                [[float(x.real), float(x.imag)] for x in row]
                for row in partial_trace(s, (q,)).matrix
            ]
            for q in range(n)
        }
    doc = {
        "kind": "measure_report",
        **_doc_header(src),
        "num_qubits": n,
        "measures": measures,
    }
    _emit(json.dumps(doc, sort_keys=True, indent=2), ns.out)
    return EX_OK


def _run_claim(ns, parser) -> ClaimReport:
    claim = ns.claim
    restarts = ns.restarts
    if claim == "lemma1":
        return verify_lemma1(restarts=restarts if restarts is not None else 32, seed=ns.seed)
    if claim == "theorem1":
        if ns.n is None:
            parser.error("theorem1 requires --n")
        return verify_theorem1(
            ns.n,
            sample=ns.sample,
            seed=ns.seed,
            restarts=restarts if restarts is not None else 32,
            workers=ns.workers,
        )
    if claim == "pairwise":
        if ns.n is None:
            parser.error("pairwise requires --n")
        return verify_pairwise_zero(ns.n, sample_graphs=ns.sample, seed=ns.seed)
    if claim == "theorem2":
        if ns.subset is None:
            parser.error("theorem2 requires --subset")
        g, _ = _graph_from_args(ns, parser)
        return verify_theorem2(
            g, _parse_subset(ns.subset), state_level=False if ns.witness_only else None
        )
    if claim == "corollary1":
        if ns.kind is None or ns.n is None:
            parser.error("corollary1 requires --kind and --n")
        seeds = tuple(int(t) for t in ns.tree_seeds.split(","))
        return verify_corollary1(
            ns.kind, ns.n, tree_seeds=seeds, state_level=False if ns.witness_only else None
        )
    if claim == "lc-classes":
        if ns.n is None:
            parser.error("lc-classes requires --n")
        return lc_class_partition(ns.n)
    if claim == "fully-entangled":
        s, src = _state_from_args(ns, parser)
        return check_fully_entangled(
            s,
            seed=ns.seed,
            restarts=restarts if restarts is not None else 32,
            bisep_restarts=ns.bisep_restarts,
            source=src,
        )
    if claim == "mg4-scan":
        if ns.grid is None:
            parser.error("mg4-scan requires --grid")
        return lu_inequivalence_scan(
            _parse_grid(ns.grid), restarts=restarts if restarts is not None else 8, seed=ns.seed
        )
    parser.error(f"unknown claim {claim!r}")


def _cmd_verify(ns, parser) -> int:
    report = _run_claim(ns, parser)
    out_dir = ns.out_dir or os.environ.get("GRAPHENT_OUTPUT_DIR") or "."
    os.makedirs(out_dir, exist_ok=True)
    stem = ns.stem or ns.claim
    json_name = f"{stem}.json"
    json_path = os.path.join(out_dir, json_name)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(report.to_csv(json_name))
    c = report.counts
    sys.stdout.write(
        f"{report.claim}: {report.verdict} "
        f"(pass {c['PASS']}, fail {c['FAIL']}, inconclusive {c['INCONCLUSIVE']}, "
        f"not-applicable {c['NOT_APPLICABLE']}, info {c['INFO']}; "
        f"{c['total']} instances, {report.wall_clock_seconds:.1f}s)\n"
    )
    sys.stdout.write(f"wrote {json_path} and {csv_path}\n")
    if report.verdict == "FAIL":
        return EX_FAIL
    if report.verdict == "INCONCLUSIVE":
        return EX_INCONCLUSIVE
    return EX_OK


def _cmd_orbit(ns, parser) -> int:
    g, src = _graph_from_args(ns, parser)
    orbit = _orbit_moves(g)
    doc = {
        "kind": "orbit_listing",
        **_doc_header(src),
        "size": len(orbit),
        "members": [
            {"graph6": to_graph6(member), "moves": [int(a) for a in moves]}
            for member, moves in orbit.items()
        ],
    }
    if ns.witness is not None:
        subset = _parse_subset(ns.witness)
        w = can_disconnect_by_lc(g, subset)
        doc["witness"] = (
            None
            if w is None
            else {
                "subset": [int(q) for q in sorted(subset)],
                "moves": [int(a) for a in w.moves],
                "witness_graph6": to_graph6(w.resulting_graph),
            }
        )
    _emit(json.dumps(doc, sort_keys=True, indent=2), ns.out)
    return EX_OK


def _cmd_recheck(ns, parser) -> int:
    text = sys.stdin.read() if ns.report == "-" else None
    if text is None:
        with open(ns.report, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("kind") == "claim_report":
        certs = [
            (inst["instance"], inst["certificate"])
            for inst in doc.get("instances", [])
            if inst.get("certificate") is not None
        ]
    else:
        certs = [("document", doc)]
    bad = 0
    for name, cert in certs:
        ok, problems = recheck_certificate(cert)
        if not ok:
            bad += 1
            sys.stdout.write(f"RECHECK FAIL {name}: {'; '.join(problems[:3])}\n")
    sys.stdout.write(f"rechecked {len(certs)} certificates, {bad} failed\n")
    return EX_OK if bad == 0 else EX_FAIL


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.error("a command is required")
    try:
        if ns.command == "build":
            return _cmd_build(ns, parser)
        if ns.command == "measure":
            return _cmd_measure(ns, parser)
        if ns.command == "verify":
            return _cmd_verify(ns, parser)
        if ns.command == "orbit":
            return _cmd_orbit(ns, parser)
        if ns.command == "recheck":
            return _cmd_recheck(ns, parser)
        parser.error(f"unknown command {ns.command!r}")
    except OSError as exc:
        sys.stderr.write(f"graphent: i/o error: {exc}\n")
        return EX_IO
    except ValueError as exc:
        # CapacityError and Graph6Error are ValueErrors too
        sys.stderr.write(f"graphent: error: {exc}\n")
        return EX_USAGE
    return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
