#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the numpy fallback.

Two layers:

* micro — the three hot kernels (``three_tangle``, ``mixing_isometry``,
  ``objective_three_tangle``) timed side by side by importing both backend
  modules directly, at the decomposition shapes the search actually visits.
* end-to-end — ``certify_zero_tangle`` on a graph-state triple reduction,
  run once with the active backend and once in a subprocess with
  ``GRAPHENT_PURE=1`` so both paths include the full escalation ladder.

Usage: ``python3 benchmarks/bench_kernels.py [--repeats N] [--json PATH]``
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from graphent._kernels import pure as pure_backend

try:
    from graphent._kernels import _native as native_backend
except ImportError:
    native_backend = None


def _best_per_call(fn, calls: int, repeats: int) -> float:
    """Best-of-``repeats`` mean seconds per call of ``fn`` over ``calls`` calls."""
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(calls):
            fn()
        best = min(best, (time.perf_counter() - t0) / calls)
    return best


def _micro_cases(seed: int):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=8) + 1j * rng.normal(size=8)
    amps /= np.linalg.norm(amps)
    cases = [("three_tangle", {"amps": amps}, 20000)]
    for m, r in ((2, 2), (4, 2), (8, 2), (8, 4)):
        params = rng.uniform(-np.pi, np.pi, size=pure_backend.param_count(m, r))
        wvecs = rng.normal(size=(r, 8)) + 1j * rng.normal(size=(r, 8))
        cases.append(
            (f"mixing_isometry m={m} r={r}", {"params": params, "m": m, "r": r}, 8000)
        )
        cases.append(
            (
                f"objective m={m} r={r}",
                {"params": params, "wvecs": wvecs, "m": m},
                8000,
            )
        )
    return cases


def _bind(backend, name: str, payload: dict):
    if name == "three_tangle":
        return lambda: backend.three_tangle(payload["amps"])
    if name.startswith("mixing_isometry"):
        return lambda: backend.mixing_isometry(payload["params"], payload["m"], payload["r"])
    return lambda: backend.objective_three_tangle(
        payload["params"], payload["wvecs"], payload["m"]
    )


def run_micro(repeats: int, seed: int) -> list[dict]:
    rows = []
    for name, payload, calls in _micro_cases(seed):
        row = {"case": name, "calls": calls}
        row["pure_us"] = _best_per_call(_bind(pure_backend, name, payload), calls, repeats) * 1e6
        if native_backend is not None:
            row["native_us"] = (
                _best_per_call(_bind(native_backend, name, payload), calls, repeats) * 1e6
            )
            row["speedup"] = row["pure_us"] / row["native_us"]
        rows.append(row)
    return rows


def run_end_to_end(repeats: int) -> dict:
    """Time certify_zero_tangle on a path-4 triple reduction, active backend."""
    from graphent._kernels import BACKEND
    from graphent.entanglement import certify_zero_tangle
    from graphent.graphs import parse_graph6
    from graphent.qstate import build_graph_state, partial_trace

    # complete-graph triple: the optimizer has to iterate, unlike easy cells
    dm = partial_trace(build_graph_state(parse_graph6("C~")), (0, 1, 2))
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = certify_zero_tangle(dm, restarts=8, seed=0)
        best = min(best, time.perf_counter() - t0)
    return {"backend": BACKEND, "seconds": best, "certified": out.certificate is not None}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="best-of repeats (default 5)")
    ap.add_argument("--seed", type=int, default=0, help="input-generation seed")
    ap.add_argument("--json", metavar="PATH", help="also write results as JSON")
    ap.add_argument("--end-to-end-only", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.end_to_end_only:
        print(json.dumps(run_end_to_end(args.repeats)))
        return 0

    rows = run_micro(args.repeats, args.seed)
    width = max(len(r["case"]) for r in rows)
    print(f"{'case':<{width}}  {'pure µs':>10}  {'native µs':>10}  {'speedup':>8}")
    for r in rows:
        native = f"{r['native_us']:10.2f}" if "native_us" in r else f"{'—':>10}"
        speed = f"{r['speedup']:7.1f}x" if "speedup" in r else f"{'—':>8}"
        print(f"{r['case']:<{width}}  {r['pure_us']:10.2f}  {native}  {speed}")

    ends = [run_end_to_end(args.repeats)]
    if ends[0]["backend"] == "native":
        env = dict(os.environ, GRAPHENT_PURE="1")
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--end-to-end-only",
             "--repeats", str(args.repeats)],
            capture_output=True, text=True, env=env,
        )
        if proc.returncode == 0:
            ends.append(json.loads(proc.stdout))
    print()
    for e in ends:
        print(
            f"end-to-end certify_zero_tangle (complete-graph triple, 8 restarts) "
            f"[{e['backend']}]: {e['seconds'] * 1e3:.1f} ms"
        )
    if len(ends) == 2:
        print(f"end-to-end speedup: {ends[1]['seconds'] / ends[0]['seconds']:.1f}x")

    if args.json:
        doc = {"micro": rows, "end_to_end": ends}
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"\nwrote {args.json}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
