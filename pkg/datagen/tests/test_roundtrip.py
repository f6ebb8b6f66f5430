"""Generated fixtures must pass the consumer package's strict validation.

The consumer is exercised only through its external interfaces: the JSON
fixture format and the qwarm command line.
"""
from __future__ import annotations

import json
import subprocess
import sys

import pytest

from qwarm_datagen.generate import GeneratorJob, default_jobs, generate


@pytest.fixture(scope="module")
def small_fixture_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fixtures")
    jobs = [job for job in default_jobs() if job.name in ("H2", "H3+")]
    for job in jobs:
        generate(job, out)
    return out


def run_qwarm(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "qwarm.cli", *args],
        capture_output=True,
        text=True,
        timeout=600,
    )


class TestRoundTrip:
    def test_strict_mode_load_and_fci_agreement(self, small_fixture_dir):
        proc = run_qwarm(
            "--fixtures-dir", str(small_fixture_dir), "--strict-fixtures",
            "fci", "--molecule", "H2",
        )
        assert proc.returncode == 0, proc.stderr
        energy = float(proc.stdout.split("energy_ha=")[1].split()[0])
        doc = json.loads((small_fixture_dir / "h2_d0.74.json").read_text())
        assert abs(energy - doc["fci_energy_ha"]) < 1e-6

    def test_charged_molecule_round_trip(self, small_fixture_dir):
        proc = run_qwarm(
            "--fixtures-dir", str(small_fixture_dir), "--strict-fixtures",
            "fci", "--molecule", "H3+",
        )
        assert proc.returncode == 0, proc.stderr

    def test_fixture_schema_fields(self, small_fixture_dir):
        doc = json.loads((small_fixture_dir / "h2_d0.74.json").read_text())
        for key in (
            "format_version", "name", "geometry_label", "n_qubits", "n_electrons",
            "hf_energy_ha", "fci_energy_ha", "features", "hamiltonian", "geometry",
        ):
            assert key in doc
        assert doc["format_version"] == 1
        assert doc["n_qubits"] == 4 and doc["n_electrons"] == 2
        assert doc["hf_energy_ha"] >= doc["fci_energy_ha"]
        assert all(set(t["paulis"]) <= set("IXYZ") for t in doc["hamiltonian"])

    def test_hf_consistency_guard_triggers(self, tmp_path):
        # corrupting the geometry label does not matter; corrupting the
        # consistency tolerance must
        job = GeneratorJob(
            name="H2", geometry_label="x", symbols=["H", "H"],
            coords_angstrom=[[0, 0, 0], [0, 0, 0.74]],
        )
        with pytest.raises(RuntimeError, match="disagrees"):
            generate(job, tmp_path, consistency_tol=0.0)

    def test_vqe_runs_on_generated_fixture(self, small_fixture_dir):
        proc = run_qwarm(
            "--fixtures-dir", str(small_fixture_dir),
            "vqe", "--molecule", "H2", "--max-iter", "60",
        )
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().split("\n")
        assert lines[0] == "iteration,energy_ha,error_mha"
