"""Command-line behavior: outputs, determinism, exit codes."""
from __future__ import annotations

import json

import pytest

from qwarm.cli import main

from .conftest import FIXTURES_DIR

FIX = ["--fixtures-dir", str(FIXTURES_DIR)]


def run_cli(capsys, *args) -> tuple[int, str, str]:
    code = main([*FIX, *args])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFci:
    def test_h2_energy(self, capsys, h2):
        code, out, _ = run_cli(capsys, "fci", "--molecule", "H2")
        assert code == 0
        energy = float(out.split("energy_ha=")[1].split()[0])
        assert energy == pytest.approx(h2.fci_energy_ha, abs=1e-9)

    def test_unknown_molecule_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "fci", "--molecule", "XYZ")
        assert code == 2
        assert "configuration error" in err

    def test_nonconvergence_exit_code(self, capsys):
        code, out, _ = run_cli(capsys, "fci", "--molecule", "H2", "--tol", "1e-30", "--max-iter", "1")
        assert code == 4
        assert "converged=False" in out


class TestVqeCommand:
    def test_describe(self, capsys):
        code, out, _ = run_cli(capsys, "vqe", "--molecule", "H4", "--describe")
        assert code == 0
        assert "params=26" in out and "singles=8 doubles=18" in out

    def test_csv_structure_and_summary(self, capsys, tmp_path):
        summary_path = tmp_path / "s.json"
        code, out, _ = run_cli(
            capsys, "vqe", "--molecule", "H2", "--max-iter", "30",
            "--summary-json", str(summary_path),
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "iteration,energy_ha,error_mha"
        assert len(lines) >= 2
        summary = json.loads(summary_path.read_text())
        assert summary["molecule"] == "H2:d0.74"
        assert summary["final_error_mha"] >= -1e-6

    def test_missing_checkpoint_config_error(self, capsys):
        code, _, err = run_cli(capsys, "vqe", "--molecule", "H2", "--init", "lstm-fc")
        assert code == 2
        assert "checkpoint" in err

    def test_byte_identical_rerun(self, capsys, tmp_path):
        args = [
            "vqe", "--molecule", "H2", "--init", "random", "--opt", "sgd",
            "--sched", "decay", "--max-iter", "40",
        ]
        outputs = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            code, _, _ = run_cli(capsys, *args, "--out-csv", str(path))
            assert code == 0
            outputs.append(path.read_bytes())
        assert outputs[0] == outputs[1]

    def test_seed_changes_random_trace(self, capsys, tmp_path):
        outputs = []
        for seed in ("0", "1"):
            path = tmp_path / f"{seed}.csv"
            code, _, _ = run_cli(
                capsys, "--seed", seed, "vqe", "--molecule", "H2", "--init", "random",
                "--max-iter", "20", "--out-csv", str(path),
            )
            assert code == 0
            outputs.append(path.read_bytes())
        assert outputs[0] != outputs[1]


@pytest.fixture(scope="module")
def checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("meta") / "model.json"
    code = main([
        *FIX, "meta-train", "--train", "H2", "--eval-heads", "H4",
        "--hidden-dim", "6", "--unroll", "3", "--epochs-max", "5",
        "--checkpoint", str(path),
    ])
    assert code == 0
    return path


class TestMetaCommands:
    def test_checkpoint_written(self, checkpoint):
        doc = json.loads(checkpoint.read_text())
        assert doc["mode"] == "fc"
        assert set(doc["heads"]) == {"H2:d0.74", "H4:d0.944"}

    def test_meta_eval(self, capsys, checkpoint):
        code, out, err = run_cli(
            capsys, "meta-eval", "--molecule", "H4", "--checkpoint", str(checkpoint)
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "step,energy_ha,error_mha"
        assert len(lines) == 4  # unroll_steps=3
        summary = json.loads(err.strip().split("\n")[-1])
        assert summary["molecule"] == "H4:d0.944"

    def test_vqe_with_lstm_fc_init(self, capsys, checkpoint):
        code, out, _ = run_cli(
            capsys, "vqe", "--molecule", "H4", "--init", "lstm-fc",
            "--checkpoint", str(checkpoint), "--max-iter", "10",
        )
        assert code == 0
        assert out.startswith("iteration,energy_ha")

    def test_mode_mismatch_rejected(self, capsys, checkpoint):
        code, _, err = run_cli(
            capsys, "vqe", "--molecule", "H4", "--init", "lstm",
            "--checkpoint", str(checkpoint), "--max-iter", "5",
        )
        assert code == 2
        assert "mode" in err

    def test_loss_csv_deterministic(self, capsys, tmp_path):
        csvs = []
        for name in ("l1.csv", "l2.csv"):
            ck = tmp_path / (name + ".ck")
            loss = tmp_path / name
            code = main([
                *FIX, "meta-train", "--train", "H2", "--hidden-dim", "5",
                "--unroll", "2", "--epochs-max", "4",
                "--checkpoint", str(ck), "--loss-csv", str(loss),
            ])
            assert code == 0
            csvs.append(loss.read_bytes())
        assert csvs[0] == csvs[1]


class TestBenchTable1:
    def test_partial_report_without_checkpoints(self, capsys, tmp_path):
        path = tmp_path / "bench.csv"
        code, _, _ = run_cli(
            capsys, "bench-table1", "--molecule", "H2", "--seeds", "1",
            "--max-iter", "15", "--out-csv", str(path),
        )
        assert code == 6  # LSTM rows unavailable -> partial report
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "init,optimizer,schedule,iterations,error_mha,available"
        assert len(lines) == 17  # 4 x 2 x 2 grid
        unavailable = [ln for ln in lines[1:] if ln.endswith(",no")]
        assert len(unavailable) == 8  # lstm and lstm-fc rows

    def test_zero_rows_seed_invariant(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for seed, path in (("0", a), ("7", b)):
            code, _, _ = run_cli(
                capsys, "--seed", seed, "bench-table1", "--molecule", "H2",
                "--seeds", "1", "--max-iter", "15", "--out-csv", str(path),
            )
            assert code == 6
        rows_a = [ln for ln in a.read_text().split("\n") if ln.startswith("zero,")]
        rows_b = [ln for ln in b.read_text().split("\n") if ln.startswith("zero,")]
        assert rows_a == rows_b  # deterministic init independent of seed


class TestScan:
    def test_small_scan_structure(self, capsys, tmp_path):
        path = tmp_path / "scan.csv"
        code, _, _ = run_cli(
            capsys, "scan", "--series", "H2", "--max-iter", "60",
            "--restarts", "0", "--out-csv", str(path),
        )
        assert code == 0
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "bond_length,e_vqe_ha,e_fci_ha,error_mha"
        assert len(lines) == 2

    def test_unknown_series_is_fixture_error(self, capsys):
        code, _, err = run_cli(capsys, "scan", "--series", "ZZ", "--max-iter", "5")
        assert code == 3
        assert "fixture error" in err
