"""Fixture schema validation, strict mode, and series scanning."""
from __future__ import annotations

import json

import numpy as np
import pytest

from qwarm.dataset import load_fixtures_dir, load_molecule, scan_series
from qwarm.errors import FixtureError

from .conftest import FIXTURES_DIR


def write_fixture(tmp_path, **overrides):
    doc = {
        "format_version": 1,
        "name": "TOY",
        "geometry_label": "eq",
        "bond_length_angstrom": None,
        "n_qubits": 2,
        "n_electrons": 2,
        "hf_energy_ha": -1.0,
        "fci_energy_ha": None,
        "features": [0.1, 0.2],
        "hamiltonian": [{"coeff": -1.0, "paulis": "II"}, {"coeff": 0.1, "paulis": "ZZ"}],
    }
    doc.update(overrides)
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(doc))
    return path


class TestLoadMolecule:
    def test_h2_fixture_fields(self):
        rec = load_molecule(FIXTURES_DIR / "h2_d0.74.json")
        assert rec.n_qubits == 4 and rec.n_electrons == 2
        assert rec.bond_length_angstrom == pytest.approx(0.74)
        assert rec.fci_energy_ha < rec.hf_energy_ha

    def test_malformed_pauli_char_named(self, tmp_path):
        path = write_fixture(tmp_path, hamiltonian=[{"coeff": 1.0, "paulis": "QI"}])
        with pytest.raises(FixtureError, match="QI"):
            load_molecule(path)

    def test_wrong_string_length(self, tmp_path):
        path = write_fixture(tmp_path, hamiltonian=[{"coeff": 1.0, "paulis": "Z"}])
        with pytest.raises(FixtureError, match="span"):
            load_molecule(path)

    def test_complex_coefficient_rejected(self, tmp_path):
        path = write_fixture(tmp_path, hamiltonian=[{"coeff": "1+2j", "paulis": "ZZ"}])
        with pytest.raises(FixtureError, match="non-real"):
            load_molecule(path)

    def test_hf_below_fci_rejected(self, tmp_path):
        path = write_fixture(tmp_path, hf_energy_ha=-3.0, fci_energy_ha=-2.0)
        with pytest.raises(FixtureError, match="variational"):
            load_molecule(path)

    def test_missing_key(self, tmp_path):
        path = write_fixture(tmp_path)
        doc = json.loads(path.read_text())
        del doc["n_qubits"]
        path.write_text(json.dumps(doc))
        with pytest.raises(FixtureError, match="n_qubits"):
            load_molecule(path)

    def test_strict_mode_fci_cross_check(self, tmp_path):
        path = write_fixture(
            tmp_path,
            fci_energy_ha=-1.5,  # true ground state of -1*II + 0.1*ZZ is -1.1
        )
        with pytest.raises(FixtureError, match="differs"):
            load_molecule(path, strict=True)

    def test_strict_mode_passes_consistent_record(self, tmp_path):
        path = write_fixture(tmp_path, fci_energy_ha=-1.1)
        rec = load_molecule(path, strict=True)
        assert rec.fci_energy_ha == pytest.approx(-1.1)

    def test_features_deterministic_across_loads(self):
        a = load_molecule(FIXTURES_DIR / "h4_d0.944.json")
        b = load_molecule(FIXTURES_DIR / "h4_d0.944.json")
        np.testing.assert_array_equal(a.features, b.features)


class TestManifest:
    def test_all_shipped_fixtures_load(self, manifest):
        assert len(manifest.records) == 14
        assert set(manifest.names()) == {"H2", "H2O", "H3+", "H4", "OH-"}

    def test_resolve_canonical(self, manifest):
        assert manifest.resolve("H4").geometry_label == "d0.944"
        assert manifest.resolve("H2O").tag == "H2O:eq"
        assert manifest.resolve("H4:d2.500").bond_length_angstrom == pytest.approx(2.5)

    def test_resolve_unknown(self, manifest):
        with pytest.raises(KeyError):
            manifest.resolve("He")

    def test_scan_series_sorted(self, manifest):
        series = scan_series(manifest, "H4")
        lengths = [rec.bond_length_angstrom for rec in series]
        assert len(series) == 10
        assert lengths == sorted(lengths)
        assert lengths[0] == pytest.approx(0.5) and lengths[-1] == pytest.approx(2.5)

    def test_scan_series_singleton(self, manifest):
        series = scan_series(manifest, "H2")
        assert len(series) == 1

    def test_scan_series_without_bond_lengths(self, manifest):
        with pytest.raises(FixtureError):
            scan_series(manifest, "H2O")  # eq record has no bond length

    def test_empty_dir_rejected(self, tmp_path):
        with pytest.raises(FixtureError):
            load_fixtures_dir(tmp_path)
