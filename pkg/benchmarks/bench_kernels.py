#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the numpy fallback.

Times the raw kernels on registers up to water size (14 qubits) plus one
end-to-end VQE-iteration figure with whichever backend the package selected
at import. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--fixtures-dir fixtures]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from qwarm import backend_name
from qwarm._kernels import numpy_ref

try:
    from qwarm._kernels import _core
except ImportError:
    _core = None

from qwarm.dataset import load_fixtures_dir
from qwarm.experiments import build_program
from qwarm.gradients import adjoint_gradient
from qwarm.pauli import PauliString


def time_call(fn, *args, reps: int, warmup: int = 3) -> float:
    for _ in range(warmup):
        fn(*args)
    start = time.perf_counter()
    for _ in range(reps):
        fn(*args)
    return (time.perf_counter() - start) / reps


def random_state(n_qubits: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return amps / np.linalg.norm(amps)


def bench_kernels(n_qubits: int, reps: int) -> list[tuple[str, float, float | None]]:
    string = PauliString("XZY" + "I" * (n_qubits - 6) + "YZX")
    amps = random_state(n_qubits)
    out = np.empty_like(amps)
    weighted = random_state(n_qubits, seed=1)
    rows = []

    def rotation(impl):
        impl.apply_pauli_rotation(amps, string.x_mask, string.z_mask, string.n_y, 0.123)

    def pauli(impl):
        impl.apply_pauli(out, amps, string.x_mask, string.z_mask, string.n_y)

    def permuted(impl):
        impl.accumulate_permuted(out, weighted, string.x_mask)

    def cnot(impl):
        impl.apply_cnot(amps, 0, n_qubits - 1)

    for name, fn in (
        ("pauli_rotation", rotation),
        ("apply_pauli", pauli),
        ("accumulate_permuted", permuted),
        ("cnot", cnot),
    ):
        t_np = time_call(fn, numpy_ref, reps=reps)
        t_cy = time_call(fn, _core, reps=reps) if _core is not None else None
        rows.append((name, t_np, t_cy))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--fixtures-dir", default="fixtures")
    parser.add_argument("--reps", type=int, default=200)
    args = parser.parse_args()

    print(f"selected backend: {backend_name()}")
    print(f"compiled core available: {_core is not None}\n")

    for n_qubits in (8, 12, 14):
        print(f"register: {n_qubits} qubits ({1 << n_qubits} amplitudes)")
        print(f"  {'kernel':22s} {'numpy':>12s} {'cython':>12s} {'speedup':>9s}")
        for name, t_np, t_cy in bench_kernels(n_qubits, args.reps):
            cy = f"{t_cy * 1e6:10.1f}us" if t_cy else "         -"
            ratio = f"{t_np / t_cy:8.1f}x" if t_cy else "        -"
            print(f"  {name:22s} {t_np * 1e6:10.1f}us {cy} {ratio}")
        print()

    try:
        manifest = load_fixtures_dir(args.fixtures_dir)
    except Exception as exc:  # fixtures optional for the raw-kernel part
        print(f"skipping end-to-end timing ({exc})")
        return
    for name in ("H4", "H2O"):
        record = manifest.resolve(name)
        program = build_program(record, "uccsd")
        theta = np.full(program.param_count, 0.05)
        t = time_call(lambda: adjoint_gradient(record.hamiltonian, program, theta), reps=5, warmup=1)
        print(
            f"adjoint energy+gradient {name} ({record.n_qubits}q, "
            f"{len(program.gates)} gates, {program.param_count} params): {t * 1e3:.1f} ms"
        )


if __name__ == "__main__":
    main()
