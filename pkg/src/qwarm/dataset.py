"""Molecule fixture files: schema, validation, and series scanning.

One JSON document per (molecule, geometry), format_version 1:

    {
      "format_version": 1,
      "name": "H2",
      "geometry_label": "d0.74",
      "bond_length_angstrom": 0.74,        # optional, null for non-diatomic labels
      "n_qubits": 4,
      "n_electrons": 2,
      "hf_energy_ha": -1.116...,
      "fci_energy_ha": -1.137...,          # optional
      "features": [ ... ],                 # flattened integral descriptor
      "hamiltonian": [{"coeff": -0.81, "paulis": "IIII"}, ...]
    }

Pauli text convention: index 0 = qubit 0 = leftmost character. Coefficients
must be real (hermiticity). Strict mode re-solves the ground state and
rejects records whose fci_energy_ha is off by more than 1e-6 Ha.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eigensolver import ground_state
from .errors import FixtureError
from .pauli import QubitHamiltonian

FORMAT_VERSION = 1
STRICT_FCI_TOL = 1e-6

# geometry used when a molecule is addressed by bare name
CANONICAL_GEOMETRY = {
    "H2": "d0.74",
    "H3+": "eq",
    "H4": "d0.944",
    "OH-": "eq",
    "H2O": "eq",
}


@dataclass(frozen=True)
class MoleculeRecord:
    name: str
    geometry_label: str
    bond_length_angstrom: float | None
    n_qubits: int
    n_electrons: int
    hf_energy_ha: float
    fci_energy_ha: float | None
    features: np.ndarray
    hamiltonian: QubitHamiltonian

    @property
    def tag(self) -> str:
        return f"{self.name}:{self.geometry_label}"

    @property
    def correlation_energy_ha(self) -> float | None:
        if self.fci_energy_ha is None:
            return None
        return self.fci_energy_ha - self.hf_energy_ha


def _require(doc: dict, key: str, types, path: Path):
    if key not in doc:
        raise FixtureError(f"{path}: missing required key {key!r}")
    val = doc[key]
    if not isinstance(val, types):
        raise FixtureError(f"{path}: key {key!r} has type {type(val).__name__}")
    return val


def load_molecule(path: str | Path, strict: bool = False) -> MoleculeRecord:
    """Parse and validate one fixture file.

    Always checks schema, Pauli-string sanity, electron/qubit counts and
    HF >= FCI; strict mode additionally cross-checks fci_energy_ha against
    the Lanczos ground state (1e-6 Ha).
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"{path}: unreadable fixture ({exc})") from exc
    if not isinstance(doc, dict):
        raise FixtureError(f"{path}: top level must be an object")
    version = _require(doc, "format_version", int, path)
    if version != FORMAT_VERSION:
        raise FixtureError(f"{path}: format_version {version} unsupported (want {FORMAT_VERSION})")
    name = _require(doc, "name", str, path)
    label = _require(doc, "geometry_label", str, path)
    n_qubits = _require(doc, "n_qubits", int, path)
    n_electrons = _require(doc, "n_electrons", int, path)
    hf = float(_require(doc, "hf_energy_ha", (int, float), path))
    bond = doc.get("bond_length_angstrom")
    if bond is not None and not isinstance(bond, (int, float)):
        raise FixtureError(f"{path}: bond_length_angstrom must be numeric or null")
    fci = doc.get("fci_energy_ha")
    if fci is not None and not isinstance(fci, (int, float)):
        raise FixtureError(f"{path}: fci_energy_ha must be numeric or null")
    raw_features = _require(doc, "features", list, path)
    raw_terms = _require(doc, "hamiltonian", list, path)

    if n_qubits < 1:
        raise FixtureError(f"{path}: n_qubits must be >= 1")
    if not 0 < n_electrons <= n_qubits:
        raise FixtureError(f"{path}: n_electrons {n_electrons} invalid for {n_qubits} qubits")

    terms = []
    for pos, term in enumerate(raw_terms):
        if not isinstance(term, dict) or "coeff" not in term or "paulis" not in term:
            raise FixtureError(f"{path}: hamiltonian[{pos}] must have coeff and paulis")
        coeff, paulis = term["coeff"], term["paulis"]
        if not isinstance(coeff, (int, float)):
            raise FixtureError(
                f"{path}: hamiltonian[{pos}] ({paulis!r}) has non-real coefficient"
            )
        if not isinstance(paulis, str) or len(paulis) != n_qubits:
            raise FixtureError(
                f"{path}: hamiltonian[{pos}] string {paulis!r} does not span {n_qubits} qubits"
            )
        bad = set(paulis) - set("IXYZ")
        if bad:
            raise FixtureError(
                f"{path}: hamiltonian[{pos}] string {paulis!r} has invalid characters {sorted(bad)}"
            )
        terms.append((float(coeff), paulis))
    try:
        hamiltonian = QubitHamiltonian(n_qubits, terms)
    except ValueError as exc:
        raise FixtureError(f"{path}: {exc}") from exc

    features = np.asarray(raw_features, dtype=np.float64)
    if features.ndim != 1 or not np.all(np.isfinite(features)):
        raise FixtureError(f"{path}: features must be a flat list of finite reals")

    if fci is not None and hf < fci - 1e-9:
        raise FixtureError(
            f"{path}: hf_energy_ha {hf} below fci_energy_ha {fci} (variational violation)"
        )
    if strict and fci is not None:
        result = ground_state(hamiltonian, tol=1e-9)
        if not result.converged:
            raise FixtureError(f"{path}: strict check could not converge the ground state")
        if abs(result.energy - fci) > STRICT_FCI_TOL:
            raise FixtureError(
                f"{path}: fci_energy_ha {fci} differs from solved {result.energy}"
                f" by {abs(result.energy - fci):.3e} Ha"
            )
    return MoleculeRecord(
        name=name,
        geometry_label=label,
        bond_length_angstrom=None if bond is None else float(bond),
        n_qubits=n_qubits,
        n_electrons=n_electrons,
        hf_energy_ha=hf,
        fci_energy_ha=None if fci is None else float(fci),
        features=features,
        hamiltonian=hamiltonian,
    )


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple[MoleculeRecord, ...]
    format_version: int = FORMAT_VERSION

    def __post_init__(self) -> None:
        seen = set()
        for rec in self.records:
            key = (rec.name, rec.geometry_label)
            if key in seen:
                raise FixtureError(f"duplicate fixture key {key}")
            seen.add(key)

    def by_tag(self, tag: str) -> MoleculeRecord:
        for rec in self.records:
            if rec.tag == tag:
                return rec
        raise KeyError(f"no fixture tagged {tag!r}")

    def resolve(self, query: str) -> MoleculeRecord:
        """Accepts 'NAME' (canonical geometry) or 'NAME:geometry_label'."""
        if ":" in query:
            return self.by_tag(query)
        label = CANONICAL_GEOMETRY.get(query)
        if label is not None:
            try:
                return self.by_tag(f"{query}:{label}")
            except KeyError:
                pass
        candidates = [rec for rec in self.records if rec.name == query]
        if len(candidates) == 1:
            return candidates[0]
        if not candidates:
            raise KeyError(f"no fixture for molecule {query!r}")
        raise KeyError(
            f"molecule {query!r} is ambiguous; use NAME:geometry_label"
            f" (have {sorted(rec.geometry_label for rec in candidates)})"
        )

    def names(self) -> list[str]:
        return sorted({rec.name for rec in self.records})


def load_fixtures_dir(fixtures_dir: str | Path, strict: bool = False) -> DatasetManifest:
    """Load every *.json fixture under a directory (sorted for determinism)."""
    fixtures_dir = Path(fixtures_dir)
    paths = sorted(fixtures_dir.glob("*.json"))
    if not paths:
        raise FixtureError(f"no fixture files found in {fixtures_dir}")
    return DatasetManifest(tuple(load_molecule(p, strict=strict) for p in paths))


def scan_series(manifest: DatasetManifest, name: str) -> list[MoleculeRecord]:
    """Bond-length series for one molecule name, sorted ascending."""
    series = [
        rec
        for rec in manifest.records
        if rec.name == name and rec.bond_length_angstrom is not None
    ]
    if not series:
        raise FixtureError(f"no bond-length series for molecule {name!r}")
    return sorted(series, key=lambda rec: rec.bond_length_angstrom)
