"""Command-line interface: inputs, outputs, exit codes, determinism."""

import io
import json
import sys

import numpy as np
import pytest

from graphent.cli import main


def _run(argv, stdin_text=None):
    """Invoke main() catching argparse's SystemExit; returns the exit code."""
    old_stdin = sys.stdin
    if stdin_text is not None:
        sys.stdin = io.StringIO(stdin_text)
    try:
        try:
            return main(argv)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else 64
    finally:
        sys.stdin = old_stdin


class TestBuild:
    def test_single_edge_amplitudes(self, capsys):
        assert _run(["build", "--edges", "0 1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        amps = [complex(re, im) for re, im in doc["state"]["amplitudes"]]
        assert amps == [0.5, 0.5, 0.5, -0.5]

    def test_path4_uniform_magnitudes(self, capsys):
        assert _run(["build", "--family", "path", "--n", "4"]) == 0
        doc = json.loads(capsys.readouterr().out)
        mags = [abs(complex(re, im)) for re, im in doc["state"]["amplitudes"]]
        assert len(mags) == 16
        assert max(abs(m - 0.25) for m in mags) < 1e-12

    def test_graph6_input(self, capsys):
        assert _run(["build", "--graph6", "C~"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["source"]["graph6"] == "C~"
        assert doc["bit_convention"] == "qubit0-most-significant-bit"

    def test_stdin_graph6(self, capsys):
        assert _run(["build", "--graph6", "-"], stdin_text="C~\n") == 0
        assert json.loads(capsys.readouterr().out)["source"]["graph6"] == "C~"

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "state.json"
        assert _run(["build", "--family", "star", "--n", "3", "--out", str(path)]) == 0
        doc = json.loads(path.read_text(encoding="utf-8"))
        assert doc["state"]["qubits"] == 3

    def test_two_sources_rejected(self):
        assert _run(["build", "--graph6", "C~", "--family", "path", "--n", "4"]) == 64

    def test_bad_graph6(self):
        assert _run(["build", "--graph6", "notvalid"]) == 64

    def test_edges_need_n_when_empty(self):
        assert _run(["build", "--edges", "  "]) == 64


class TestMeasure:
    def test_ghz3_tangle(self, capsys):
        assert _run(["measure", "--state", "ghz3", "--tangle"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert abs(doc["measures"]["tangle"] - 1.0) < 1e-12

    def test_w3_tangle_zero(self, capsys):
        assert _run(["measure", "--state", "w3", "--tangle"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["measures"]["tangle"] < 1e-12

    def test_star4_pairs_vanish(self, capsys):
        assert _run(["measure", "--family", "star", "--n", "4", "--pairs"]) == 0
        doc = json.loads(capsys.readouterr().out)
        table = doc["measures"]["pair_concurrences"]
        assert len(table) == 6
        assert all(v < 1e-10 for v in table.values())

    def test_default_emits_all_applicable(self, capsys):
        assert _run(["measure", "--state", "ghz3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert set(doc["measures"]) == {
            "pair_concurrences",
            "tangle",
            "negativities",
            "purities",
            "single_qubit_reductions",
        }
        # GHZ: every bipartition has negativity 1/2, every reduction purity 1/2
        assert all(abs(v - 0.5) < 1e-9 for v in doc["measures"]["negativities"].values())
        assert all(abs(v - 0.5) < 1e-9 for v in doc["measures"]["purities"].values())

    def test_tangle_requires_three_qubits(self):
        assert _run(["measure", "--state", "ghz4", "--tangle"]) == 64

    def test_bad_state_name(self):
        assert _run(["measure", "--state", "bell2"]) == 64


class TestVerify:
    def test_pairwise_writes_reports(self, tmp_path, capsys):
        assert _run(["verify", "pairwise", "--n", "3", "--out-dir", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "pairwise: PASS" in out
        doc = json.loads((tmp_path / "pairwise.json").read_text(encoding="utf-8"))
        assert doc["kind"] == "claim_report"
        assert doc["verdict"] == "PASS"
        csv_lines = (tmp_path / "pairwise.csv").read_text(encoding="utf-8").splitlines()
        assert csv_lines[0] == "claim,instance,verdict,residual,certificate_path"
        assert "pairwise.json#instances/0/certificate" in csv_lines[1]

    def test_inconclusive_exit_code(self, tmp_path):
        code = _run(
            [
                "verify",
                "theorem2",
                "--family",
                "cycle",
                "--n",
                "5",
                "--subset",
                "0,1,2,3",
                "--out-dir",
                str(tmp_path),
            ]
        )
        assert code == 2

    def test_fail_exit_code(self, tmp_path):
        code = _run(
            ["verify", "fully-entangled", "--state", "w3", "--out-dir", str(tmp_path)]
        )
        assert code == 1

    def test_byte_identical_reports(self, tmp_path):
        args = ["verify", "pairwise", "--n", "4", "--out-dir", str(tmp_path)]
        assert _run(args + ["--stem", "one"]) == 0
        assert _run(args + ["--stem", "two"]) == 0
        a = (tmp_path / "one.json").read_bytes()
        b = (tmp_path / "two.json").read_bytes()
        assert a == b

    def test_env_output_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("GRAPHENT_OUTPUT_DIR", str(tmp_path))
        assert _run(["verify", "lc-classes", "--n", "4"]) == 0
        assert (tmp_path / "lc-classes.json").exists()
        assert (tmp_path / "lc-classes.csv").exists()

    def test_corollary_tree_flags(self, tmp_path):
        code = _run(
            [
                "verify",
                "corollary1",
                "--kind",
                "tree",
                "--n",
                "4",
                "--tree-seeds",
                "0,1",
                "--witness-only",
                "--out-dir",
                str(tmp_path),
            ]
        )
        assert code == 0
        doc = json.loads((tmp_path / "corollary1.json").read_text(encoding="utf-8"))
        assert doc["seeds"] == {"tree_seeds": [0, 1]}
        assert all(i["instance"].startswith("witness") for i in doc["instances"])

    def test_mg4_grid_range_syntax(self, tmp_path):
        code = _run(
            [
                "verify",
                "mg4-scan",
                "--grid",
                "0:0.2:0.1",
                "--restarts",
                "4",
                "--out-dir",
                str(tmp_path),
            ]
        )
        assert code == 0
        doc = json.loads((tmp_path / "mg4-scan.json").read_text(encoding="utf-8"))
        # three grid points x 9 instances each, plus the summary flag
        assert doc["summary"]["total"] == 28

    def test_mg4_explicit_grid_list(self, tmp_path):
        code = _run(
            [
                "verify",
                "mg4-scan",
                "--grid",
                "0.1,0.3",
                "--restarts",
                "4",
                "--out-dir",
                str(tmp_path),
            ]
        )
        assert code == 0

    def test_usage_errors(self):
        assert _run(["verify", "nosuchclaim"]) == 64
        assert _run(["verify", "theorem1"]) == 64  # missing --n
        assert _run(["verify", "mg4-scan"]) == 64  # missing --grid
        assert _run(["verify", "mg4-scan", "--grid", "0:1"]) == 64
        assert _run(["verify", "pairwise", "--n", "9"]) == 64  # capacity
        assert _run([]) == 64  # no command


class TestOrbit:
    def test_complete4_orbit_and_witness(self, capsys):
        assert _run(["orbit", "--family", "complete", "--n", "4", "--witness", "0,1,2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["size"] == 5
        assert len(doc["witness"]["moves"]) == 1

    def test_already_disconnected_empty_witness(self, capsys):
        assert _run(["orbit", "--family", "path", "--n", "4", "--witness", "0,2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["witness"]["moves"] == []

    def test_no_witness_is_null(self, capsys):
        assert _run(["orbit", "--family", "cycle", "--n", "5", "--witness", "0,1,2,3"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["witness"] is None

    def test_capacity(self):
        assert _run(["orbit", "--family", "path", "--n", "11"]) == 64


class TestRecheck:
    def test_report_roundtrip(self, tmp_path, capsys):
        assert _run(["verify", "lemma1", "--restarts", "8", "--out-dir", str(tmp_path)]) == 0
        capsys.readouterr()
        assert _run(["recheck", str(tmp_path / "lemma1.json")]) == 0
        out = capsys.readouterr().out
        assert "0 failed" in out

    def test_tampered_report_fails(self, tmp_path, capsys):
        assert _run(["verify", "pairwise", "--n", "3", "--out-dir", str(tmp_path)]) == 0
        path = tmp_path / "pairwise.json"
        doc = json.loads(path.read_text(encoding="utf-8"))
        doc["instances"][0]["certificate"]["value"] += 0.25
        path.write_text(json.dumps(doc), encoding="utf-8")
        capsys.readouterr()
        assert _run(["recheck", str(path)]) == 1
        assert "RECHECK FAIL" in capsys.readouterr().out

    def test_single_certificate_document(self, tmp_path, capsys):
        assert _run(["verify", "pairwise", "--n", "3", "--out-dir", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "pairwise.json").read_text(encoding="utf-8"))
        cert = doc["instances"][0]["certificate"]
        single = tmp_path / "one_cert.json"
        single.write_text(json.dumps(cert), encoding="utf-8")
        capsys.readouterr()
        assert _run(["recheck", str(single)]) == 0

    def test_stdin_document(self, tmp_path, capsys):
        assert _run(["verify", "lc-classes", "--n", "4", "--out-dir", str(tmp_path)]) == 0
        text = (tmp_path / "lc-classes.json").read_text(encoding="utf-8")
        capsys.readouterr()
        assert _run(["recheck", "-"], stdin_text=text) == 0

    def test_missing_file_is_io_error(self):
        assert _run(["recheck", "/nonexistent/path.json"]) == 74


class TestConsoleScript:
    def test_installed_entry_point(self, tmp_path):
        import subprocess

        proc = subprocess.run(
            [sys.executable, "-m", "graphent.cli", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("graphent ")

    def test_edge_list_on_stdin(self):
        import subprocess

        proc = subprocess.run(
            [sys.executable, "-m", "graphent.cli", "build", "--edges", "-"],
            input="0 1\n1 2\n",
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["source"]["graph6"] is not None
        assert np.isclose(
            sum(abs(complex(re, im)) ** 2 for re, im in doc["state"]["amplitudes"]), 1.0
        )
