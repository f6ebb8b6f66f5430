"""Batch experiment drivers behind the CLI subcommands.

Everything here is deterministic given the seeds it is handed; stochastic
cells are reported as medians over an odd number of seeds so orderings are
stable. Grid cells are independent and may be dispatched to a thread pool;
results are sorted before emission.
"""
from __future__ import annotations

import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .ansatz import AnsatzProgram, build_hea, build_strongly_entangling, build_uccsd, enumerate_excitations
from .dataset import DatasetManifest, MoleculeRecord, scan_series
from .eigensolver import ground_state
from .meta import MetaModel, TrainConfig, adapt_head, create_model, train
from .vqe import InitStrategy, OptimizerConfig, RunTrace, run_vqe

INIT_KINDS = ("random", "zero", "lstm", "lstm-fc")
CHEMICAL_ACCURACY_MHA = 1.6


def build_program(record: MoleculeRecord, kind: str = "uccsd", layers: int = 2) -> AnsatzProgram:
    """Ansatz program for a molecule fixture."""
    if kind == "uccsd":
        excitations = enumerate_excitations(record.n_electrons, record.n_qubits)
        return build_uccsd(excitations, record.n_qubits, molecule_tag=record.tag)
    if kind == "hea":
        return build_hea(record.n_qubits, layers, record.n_electrons, molecule_tag=record.tag)
    if kind == "strongly-entangling":
        return build_strongly_entangling(
            record.n_qubits, layers, record.n_electrons, molecule_tag=record.tag
        )
    raise ValueError(f"unknown ansatz kind {kind!r}")


def strategy_for(init_kind: str, model_fc: MetaModel | None, model_pad: MetaModel | None) -> InitStrategy:
    if init_kind == "lstm-fc":
        return InitStrategy("lstm-fc", model_fc)
    if init_kind == "lstm":
        return InitStrategy("lstm", model_pad)
    return InitStrategy(init_kind)


@dataclass(frozen=True)
class GridRow:
    molecule_tag: str
    init_kind: str
    optimizer: str
    schedule: str
    iterations: float
    error_mha: float
    available: bool = True


def _median_cell(
    record: MoleculeRecord,
    program: AnsatzProgram,
    strategy: InitStrategy,
    cfg: OptimizerConfig,
    seeds: list[int],
    grad_engine: str,
) -> tuple[float, float]:
    iters: list[float] = []
    errors: list[float] = []
    for seed in seeds:
        trace = run_vqe(record, program, strategy, replace(cfg, seed=seed), grad_engine)
        iters.append(float(trace.iterations_to_converge))
        errors.append(float(trace.final_error_mha))
    return statistics.median(iters), statistics.median(errors)


def bench_initializations(
    record: MoleculeRecord,
    program: AnsatzProgram,
    model_fc: MetaModel | None,
    model_pad: MetaModel | None,
    seeds: list[int],
    base_cfg: OptimizerConfig,
    grad_engine: str = "adjoint",
    threads: int = 1,
) -> list[GridRow]:
    """The init x optimizer x schedule grid, median over seeds."""
    cells = []
    for init_kind in INIT_KINDS:
        for opt in ("sgd", "adam"):
            for sched in ("const", "decay"):
                cells.append((init_kind, opt, sched))

    def run_cell(cell: tuple[str, str, str]) -> GridRow:
        init_kind, opt, sched = cell
        if (init_kind == "lstm-fc" and model_fc is None) or (
            init_kind == "lstm" and model_pad is None
        ):
            return GridRow(record.tag, init_kind, opt, sched, -1.0, float("nan"), available=False)
        cfg = replace(base_cfg, kind=opt, schedule=sched, lr0=None)
        strategy = strategy_for(init_kind, model_fc, model_pad)
        iters, err = _median_cell(record, program, strategy, cfg, seeds, grad_engine)
        return GridRow(record.tag, init_kind, opt, sched, iters, err)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    return sorted(rows, key=lambda r: (INIT_KINDS.index(r.init_kind), r.optimizer, r.schedule))


@dataclass(frozen=True)
class ScanPoint:
    bond_length: float
    e_vqe: float
    e_fci: float
    error_mha: float


def scan_potential_curve(
    manifest: DatasetManifest,
    name: str,
    init: InitStrategy,
    cfg: OptimizerConfig,
    grad_engine: str = "adjoint",
    chain: bool = True,
    restarts: int = 6,
) -> list[ScanPoint]:
    """VQE along a bond-length series, with the exact reference at each point.

    Stretched geometries have rough landscapes with spurious minima near the
    HF start, so each point is optimized from several starts and the best
    kept: the requested strategy, the previous geometry's solution (chain)
    and a deterministic set of random restarts seeded from cfg.seed.
    """
    points: list[ScanPoint] = []
    prev_best = None
    for pos, record in enumerate(scan_series(manifest, name)):
        program = build_program(record, "uccsd")
        starts: list[InitStrategy] = [init]
        if chain and prev_best is not None and len(prev_best) == program.param_count:
            starts.append(InitStrategy("fixed", theta=prev_best))
        for r in range(restarts):
            rng = np.random.default_rng([cfg.seed, pos, r])
            starts.append(
                InitStrategy("fixed", theta=rng.uniform(-1.5, 1.5, program.param_count))
            )
        e_best = None
        theta_best = None
        for strategy in starts:
            trace = run_vqe(record, program, strategy, cfg, grad_engine, record_thetas=True)
            idx = min(range(len(trace.energies)), key=trace.energies.__getitem__)
            if e_best is None or trace.energies[idx] < e_best:
                e_best = trace.energies[idx]
                theta_best = trace.thetas[idx]
        prev_best = theta_best
        if record.fci_energy_ha is not None:
            e_fci = record.fci_energy_ha
        else:
            e_fci = ground_state(record.hamiltonian).energy
        points.append(
            ScanPoint(
                bond_length=record.bond_length_angstrom,
                e_vqe=e_best,
                e_fci=e_fci,
                error_mha=(e_best - e_fci) * 1000.0,
            )
        )
    return points


def train_warmstart_model(
    manifest: DatasetManifest,
    training_molecules: list[str],
    eval_molecules: list[str],
    mode: str = "fc",
    hidden_dim: int = 40,
    cfg: TrainConfig | None = None,
) -> tuple[MetaModel, list[float]]:
    """Train a warm-start model on UCCSD trajectories.

    Phase 1 jointly trains the LSTM and the training molecules' heads;
    phase 2 adapts a projection head per held-out evaluation molecule with
    the LSTM frozen, so the shared latent dynamics reflect the training set
    only. In pad mode phase 2 is a no-op (no heads exist).
    """
    cfg = cfg or TrainConfig()
    model = create_model(mode, hidden_dim, unroll_steps=cfg.unroll_steps, seed=cfg.seed)
    train_pairs = [
        (rec, build_program(rec, "uccsd"))
        for rec in (manifest.resolve(q) for q in training_molecules)
    ]
    if mode == "pad":
        needed = max(p.param_count for _, p in train_pairs)
        for q in eval_molecules:
            rec = manifest.resolve(q)
            needed = max(needed, build_program(rec, "uccsd").param_count)
        if hidden_dim < needed:
            raise ValueError(
                f"pad mode needs hidden_dim >= largest parameter count ({needed})"
            )
    history = train(model, train_pairs, cfg)
    if mode == "fc":
        for q in eval_molecules:
            rec = manifest.resolve(q)
            adapt_head(model, rec, build_program(rec, "uccsd"), cfg)
    return model, history


@dataclass(frozen=True)
class TransferCurve:
    optimizer: str
    with_extra: bool
    errors_mha: list[float]  # median pointwise error per iteration


def transfer_study(
    manifest: DatasetManifest,
    base_training: list[str],
    extra_molecule: str,
    eval_molecule: str,
    seeds: list[int],
    vqe_cfg: OptimizerConfig,
    train_cfg: TrainConfig,
    hidden_dim: int = 40,
    grad_engine: str = "adjoint",
) -> list[TransferCurve]:
    """Convergence curves on the evaluation molecule for models trained
    with and without the extra molecule, under SGD and Adam."""
    record = manifest.resolve(eval_molecule)
    program = build_program(record, "uccsd")
    curves: list[TransferCurve] = []
    for with_extra in (True, False):
        training = base_training + [extra_molecule] if with_extra else list(base_training)
        per_seed_traces: dict[str, list[RunTrace]] = {"sgd": [], "adam": []}
        for seed in seeds:
            cfg_t = replace(train_cfg, seed=seed)
            model, _ = train_warmstart_model(
                manifest, training, [eval_molecule], "fc", hidden_dim, cfg_t
            )
            for opt in ("sgd", "adam"):
                cfg_v = replace(vqe_cfg, kind=opt, lr0=None, seed=seed)
                trace = run_vqe(record, program, InitStrategy("lstm-fc", model), cfg_v, grad_engine)
                per_seed_traces[opt].append(trace)
        for opt in ("sgd", "adam"):
            traces = per_seed_traces[opt]
            longest = max(len(t.energies) for t in traces)
            medians = []
            for i in range(longest):
                vals = [t.errors_mha()[min(i, len(t.energies) - 1)] for t in traces]
                medians.append(statistics.median(vals))
            curves.append(TransferCurve(opt, with_extra, medians))
    return sorted(curves, key=lambda c: (not c.with_extra, c.optimizer))


def iterations_to_threshold(errors_mha: list[float], threshold_mha: float) -> int | None:
    for i, err in enumerate(errors_mha, start=1):
        if err < threshold_mha:
            return i
    return None


@dataclass(frozen=True)
class SweepRow:
    hidden_dim: int
    optimizer: str
    iterations: float
    error_mha: float


def latent_size_sweep(
    manifest: DatasetManifest,
    molecule: str,
    training_molecules: list[str],
    sizes: list[int],
    seeds: list[int],
    vqe_cfg: OptimizerConfig,
    train_cfg: TrainConfig,
    grad_engine: str = "adjoint",
) -> list[SweepRow]:
    """Warm-started VQE quality as a function of the latent dimension."""
    record = manifest.resolve(molecule)
    program = build_program(record, "uccsd")
    rows: list[SweepRow] = []
    for m in sizes:
        per_opt: dict[str, tuple[list[float], list[float]]] = {
            "sgd": ([], []),
            "adam": ([], []),
        }
        for seed in seeds:
            cfg_t = replace(train_cfg, seed=seed)
            model, _ = train_warmstart_model(
                manifest, training_molecules, [molecule], "fc", m, cfg_t
            )
            for opt in ("sgd", "adam"):
                cfg_v = replace(vqe_cfg, kind=opt, lr0=None, seed=seed)
                trace = run_vqe(record, program, InitStrategy("lstm-fc", model), cfg_v, grad_engine)
                per_opt[opt][0].append(float(trace.iterations_to_converge))
                per_opt[opt][1].append(float(trace.final_error_mha))
        for opt in ("sgd", "adam"):
            iters, errs = per_opt[opt]
            rows.append(SweepRow(m, opt, statistics.median(iters), statistics.median(errs)))
    return rows
