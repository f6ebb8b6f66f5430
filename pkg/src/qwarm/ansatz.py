"""Ansatz circuit builders and excitation enumeration.

Spin-orbital indexing is interleaved: even indices are alpha spin, odd are
beta, and the Hartree-Fock reference occupies the lowest n_electrons spin
orbitals. Parameter counts are molecule-dependent: N = N_singles + N_doubles
for the unitary coupled-cluster circuit, 2*n*L for the hardware-efficient
layers, 3*n*L for the strongly entangling layers.

The coupled-cluster exponentials use a single Trotter step with a fixed
lexicographic gate order. Under Jordan-Wigner, the excitation generators
decompose as

  single i->a:            (i/2) * (-X_i Z.. Y_a + Y_i Z.. X_a)
  double (i,j)->(a,b):    (i/8) * sum of 8 strings over {X,Y} on (i,j,a,b)
                          with odd Y count, Z chains inside (i,j) and (a,b)

and exp((theta/2) * generator) is emitted as shared-parameter Pauli
rotations with per-gate scales of +-1/2 (singles) and +-1/8 (doubles).
"""
from __future__ import annotations

from dataclasses import dataclass

from .pauli import PauliString
from .statevector import Gate

# (labels on (i,j,a,b), sign s) with the double-excitation generator equal to
# (i/8) * sum_k s_k P_k; the emitted rotation scale is -s/8.
_DOUBLE_PATTERN = (
    ("XXXY", +1),
    ("XXYX", +1),
    ("XYXX", -1),
    ("XYYY", +1),
    ("YXXX", -1),
    ("YXYY", +1),
    ("YYXY", -1),
    ("YYYX", -1),
)


@dataclass(frozen=True)
class ExcitationSet:
    """Spin-conserving single and double excitations out of the HF reference."""

    n_electrons: int
    n_spin_orbitals: int
    singles: tuple[tuple[int, int], ...]
    doubles: tuple[tuple[int, int, int, int], ...]

    @property
    def n_singles(self) -> int:
        return len(self.singles)

    @property
    def n_doubles(self) -> int:
        return len(self.doubles)

    @property
    def n_params(self) -> int:
        return len(self.singles) + len(self.doubles)


@dataclass(frozen=True)
class AnsatzProgram:
    """Ordered gate sequence with the parameter-to-gate binding baked in."""

    molecule_tag: str
    kind: str
    n_qubits: int
    reference_occupation: str
    gates: tuple[Gate, ...]
    param_count: int
    param_split: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        bound: set[int] = set()
        for gate in self.gates:
            if gate.param_index is not None:
                if not 0 <= gate.param_index < self.param_count:
                    raise ValueError(
                        f"param_index {gate.param_index} outside [0, {self.param_count})"
                    )
                bound.add(gate.param_index)
        if self.param_count and bound != set(range(self.param_count)):
            raise ValueError("every parameter must be bound to at least one gate")

    def describe(self) -> str:
        parts = [
            f"kind={self.kind}",
            f"qubits={self.n_qubits}",
            f"params={self.param_count}",
            f"gates={len(self.gates)}",
        ]
        if self.param_split is not None:
            parts.insert(3, f"singles={self.param_split[0]} doubles={self.param_split[1]}")
        return " ".join(parts)


def hf_occupation(n_electrons: int, n_spin_orbitals: int) -> str:
    """Occupation string of the Hartree-Fock reference (lowest orbitals filled)."""
    return "1" * n_electrons + "0" * (n_spin_orbitals - n_electrons)


def enumerate_excitations(n_electrons: int, n_spin_orbitals: int) -> ExcitationSet:
    """All spin-conserving singles and doubles, in lexicographic order.

    Singles preserve the spin sector of the moved electron; doubles preserve
    total Sz. Occupied orbitals are 0..n_electrons-1, virtuals the rest.
    """
    if not 0 < n_electrons < n_spin_orbitals:
        raise ValueError(
            f"need 0 < n_electrons < n_spin_orbitals, got {n_electrons}/{n_spin_orbitals}"
        )
    occ = range(n_electrons)
    virt = range(n_electrons, n_spin_orbitals)
    singles = tuple((i, a) for i in occ for a in virt if (i - a) % 2 == 0)
    doubles = tuple(
        (i, j, a, b)
        for i in occ
        for j in occ
        if i < j
        for a in virt
        for b in virt
        if a < b and (i % 2 + j % 2) == (a % 2 + b % 2)
    )
    return ExcitationSet(n_electrons, n_spin_orbitals, singles, doubles)


def _chain_string(n_qubits: int, placed: dict[int, str], z_ranges: tuple[tuple[int, int], ...]) -> str:
    chars = ["I"] * n_qubits
    for lo, hi in z_ranges:
        for k in range(lo + 1, hi):
            chars[k] = "Z"
    for q, ch in placed.items():
        chars[q] = ch
    return "".join(chars)


def single_excitation_gates(i: int, a: int, n_qubits: int, param_index: int) -> list[Gate]:
    """Two shared-parameter rotations implementing exp((theta/2) * (single generator))."""
    gates = []
    for (ci, ca), scale in ((("X", "Y"), 0.5), (("Y", "X"), -0.5)):
        string = PauliString(_chain_string(n_qubits, {i: ci, a: ca}, ((i, a),)))
        gates.append(Gate("pauli_rot", (i, a), pauli=string, scale=scale, param_index=param_index))
    return gates


def double_excitation_gates(
    i: int, j: int, a: int, b: int, n_qubits: int, param_index: int
) -> list[Gate]:
    """Eight shared-parameter rotations implementing exp((theta/2) * (double generator))."""
    gates = []
    for label, sign in _DOUBLE_PATTERN:
        placed = {i: label[0], j: label[1], a: label[2], b: label[3]}
        string = PauliString(_chain_string(n_qubits, placed, ((i, j), (a, b))))
        gates.append(
            Gate(
                "pauli_rot",
                (i, j, a, b),
                pauli=string,
                scale=-sign / 8.0,
                param_index=param_index,
            )
        )
    return gates


def build_uccsd(
    excitations: ExcitationSet, n_qubits: int, molecule_tag: str = ""
) -> AnsatzProgram:
    """Single-Trotter-step UCCSD circuit from the HF reference.

    Parameters are ordered singles first then doubles, each in the
    enumeration order of the excitation set; theta = 0 gives the identity
    circuit and hence the HF state.
    """
    if n_qubits != excitations.n_spin_orbitals:
        raise ValueError(
            f"qubit count {n_qubits} != spin-orbital count {excitations.n_spin_orbitals}"
        )
    gates: list[Gate] = []
    k = 0
    for i, a in excitations.singles:
        gates.extend(single_excitation_gates(i, a, n_qubits, k))
        k += 1
    for i, j, a, b in excitations.doubles:
        gates.extend(double_excitation_gates(i, j, a, b, n_qubits, k))
        k += 1
    return AnsatzProgram(
        molecule_tag=molecule_tag,
        kind="uccsd",
        n_qubits=n_qubits,
        reference_occupation=hf_occupation(excitations.n_electrons, n_qubits),
        gates=tuple(gates),
        param_count=excitations.n_params,
        param_split=(excitations.n_singles, excitations.n_doubles),
    )


def build_hea(
    n_qubits: int, layers: int, n_electrons: int, molecule_tag: str = ""
) -> AnsatzProgram:
    """Hardware-efficient layers: RY then RZ on every qubit, then a CNOT chain."""
    if layers < 1:
        raise ValueError("layers must be >= 1")
    gates: list[Gate] = []
    k = 0
    for _layer in range(layers):
        for q in range(n_qubits):
            gates.append(Gate("ry", (q,), param_index=k))
            k += 1
        for q in range(n_qubits):
            gates.append(Gate("rz", (q,), param_index=k))
            k += 1
        for q in range(n_qubits - 1):
            gates.append(Gate("cnot", (q, q + 1)))
    return AnsatzProgram(
        molecule_tag=molecule_tag,
        kind="hea",
        n_qubits=n_qubits,
        reference_occupation=hf_occupation(n_electrons, n_qubits),
        gates=tuple(gates),
        param_count=k,
    )


def build_strongly_entangling(
    n_qubits: int, layers: int, n_electrons: int, molecule_tag: str = ""
) -> AnsatzProgram:
    """Strongly entangling layers: a ZYZ Euler rotation per qubit plus a CNOT ring.

    The three Euler angles are separate parameters. The ring range grows
    with depth: layer l entangles (q, (q + r) mod n) with r = l mod (n-1) + 1.
    """
    if n_qubits < 2:
        raise ValueError("strongly entangling layers need at least 2 qubits")
    if layers < 1:
        raise ValueError("layers must be >= 1")
    gates: list[Gate] = []
    k = 0
    for layer in range(layers):
        for q in range(n_qubits):
            gates.append(Gate("rz", (q,), param_index=k))
            gates.append(Gate("ry", (q,), param_index=k + 1))
            gates.append(Gate("rz", (q,), param_index=k + 2))
            k += 3
        r = layer % (n_qubits - 1) + 1
        for q in range(n_qubits):
            gates.append(Gate("cnot", (q, (q + r) % n_qubits)))
    return AnsatzProgram(
        molecule_tag=molecule_tag,
        kind="strongly_entangling",
        n_qubits=n_qubits,
        reference_occupation=hf_occupation(n_electrons, n_qubits),
        gates=tuple(gates),
        param_count=k,
    )
