"""Command-line front end.

Subcommands: fci, vqe, meta-train, meta-eval, scan, bench-table1,
bench-table2, transfer. All outputs are CSV (plus small JSON summaries) and
byte-stable for a fixed seed: floats are printed with shortest round-trip
formatting and rows are emitted in deterministic order.

Exit codes: 0 success, 2 configuration/usage error, 3 fixture error,
4 non-convergence, 5 training divergence, 6 partial report.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import _kernels
from .dataset import DatasetManifest, load_fixtures_dir
from .eigensolver import ground_state
from .errors import DivergenceError, FixtureError
from .experiments import (
    bench_initializations,
    build_program,
    iterations_to_threshold,
    latent_size_sweep,
    scan_potential_curve,
    strategy_for,
    transfer_study,
    train_warmstart_model,
)
from .meta import TrainConfig, load_checkpoint, save_checkpoint, unroll
from .vqe import InitStrategy, OptimizerConfig, run_vqe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FIXTURE = 3
EXIT_NONCONVERGED = 4
EXIT_DIVERGED = 5
EXIT_PARTIAL = 6


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path: str | None, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_manifest(args) -> DatasetManifest:
    return load_fixtures_dir(args.fixtures_dir, strict=args.strict_fixtures)


def _optimizer_config(args, seed: int | None = None) -> OptimizerConfig:
    return OptimizerConfig(
        kind=getattr(args, "opt", "adam"),
        lr0=getattr(args, "lr", None),
        schedule=getattr(args, "sched", "const"),
        max_iterations=getattr(args, "max_iter", 500),
        seed=args.seed if seed is None else seed,
    )


def _seed_list(base: int, count: int) -> list[int]:
    return [base + i for i in range(count)]


def _parse_names(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def cmd_fci(args) -> int:
    manifest = _load_manifest(args)
    record = manifest.resolve(args.molecule)
    result = ground_state(record.hamiltonian, tol=args.tol, max_iter=args.max_iter)
    print(
        f"molecule={record.tag} energy_ha={_fmt(result.energy)}"
        f" residual_norm={_fmt(result.residual_norm)}"
        f" iterations={result.iterations} converged={result.converged}"
    )
    return EXIT_OK if result.converged else EXIT_NONCONVERGED


def cmd_vqe(args) -> int:
    manifest = _load_manifest(args)
    record = manifest.resolve(args.molecule)
    program = build_program(record, args.ansatz, args.layers)
    if args.describe:
        print(f"molecule={record.tag} {program.describe()}")
        return EXIT_OK
    model = None
    if args.init in ("lstm", "lstm-fc"):
        if not args.checkpoint:
            raise ValueError(f"--init {args.init} requires --checkpoint")
        model = load_checkpoint(args.checkpoint)
        expected = "fc" if args.init == "lstm-fc" else "pad"
        if model.mode != expected:
            raise ValueError(
                f"checkpoint mode {model.mode!r} does not match --init {args.init}"
            )
    init = InitStrategy(args.init, model)
    cfg = _optimizer_config(args)
    trace = run_vqe(record, program, init, cfg, grad_engine=args.grad)
    rows = []
    for it, energy in enumerate(trace.energies, start=1):
        err = "" if trace.fci_energy_ha is None else (energy - trace.fci_energy_ha) * 1000.0
        rows.append((it, energy, err))
    _write_csv(args.out_csv, ["iteration", "energy_ha", "error_mha"], rows)
    summary = {
        "molecule": record.tag,
        "ansatz": args.ansatz,
        "init": args.init,
        "optimizer": cfg.kind,
        "schedule": cfg.schedule,
        "seed": cfg.seed,
        "evaluations": len(trace.energies),
        "iterations_to_converge": trace.iterations_to_converge,
        "best_energy_ha": min(trace.energies),
        "final_error_mha": trace.final_error_mha,
    }
    text = json.dumps(summary)
    if args.summary_json:
        Path(args.summary_json).write_text(text + "\n")
    else:
        print(text, file=sys.stderr)
    return EXIT_OK


def cmd_meta_train(args) -> int:
    manifest = _load_manifest(args)
    cfg = TrainConfig(
        unroll_steps=args.unroll,
        lstm_lr=args.lr,
        epochs_max=args.epochs_max,
        early_stop_rel_tol=args.early_stop,
        seed=args.seed,
        grad_engine=args.grad,
    )
    model, history = train_warmstart_model(
        manifest,
        _parse_names(args.train),
        _parse_names(args.eval_heads) if args.eval_heads else [],
        mode=args.mode,
        hidden_dim=args.hidden_dim,
        cfg=cfg,
    )
    save_checkpoint(model, args.checkpoint)
    if args.loss_csv:
        _write_csv(args.loss_csv, ["epoch", "loss"], list(enumerate(history, start=1)))
    stop = "early-stop" if len(history) < cfg.epochs_max else "epoch-cap"
    print(
        f"epochs={len(history)} stop={stop} loss_first={_fmt(history[0])}"
        f" loss_last={_fmt(history[-1])} heads={len(model.heads)}"
        f" checkpoint={args.checkpoint}"
    )
    return EXIT_OK


def cmd_meta_eval(args) -> int:
    manifest = _load_manifest(args)
    record = manifest.resolve(args.molecule)
    program = build_program(record, "uccsd")
    model = load_checkpoint(args.checkpoint)
    result, _ = unroll(model, record, program)
    fci = record.fci_energy_ha
    rows = []
    for t, energy in enumerate(result.energies, start=1):
        err = "" if fci is None else (energy - fci) * 1000.0
        rows.append((t, energy, err))
    _write_csv(args.out_csv, ["step", "energy_ha", "error_mha"], rows)
    summary = {
        "molecule": record.tag,
        "mode": model.mode,
        "hidden_dim": model.hidden_dim,
        "loss": result.loss,
        "init_energy_ha": result.energies[-1],
        "hf_energy_ha": record.hf_energy_ha,
        "init_error_mha": None if fci is None else (result.energies[-1] - fci) * 1000.0,
    }
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def cmd_scan(args) -> int:
    manifest = _load_manifest(args)
    model = load_checkpoint(args.checkpoint) if args.checkpoint else None
    if args.init in ("lstm", "lstm-fc"):
        if model is None:
            raise ValueError(f"--init {args.init} requires --checkpoint")
        expected = "fc" if args.init == "lstm-fc" else "pad"
        if model.mode != expected:
            raise ValueError(
                f"checkpoint mode {model.mode!r} does not match --init {args.init}"
            )
    init = strategy_for(args.init, model, model) if args.init != "zero" else InitStrategy("zero")
    # tight convergence: scan points are reported as converged minima
    cfg = OptimizerConfig(
        kind=args.opt,
        lr0=args.lr,
        schedule=args.sched,
        max_iterations=args.max_iter,
        conv_tol=1e-9,
        conv_window=10,
        seed=args.seed,
    )
    points = scan_potential_curve(
        manifest, args.series, init, cfg, grad_engine=args.grad,
        chain=not args.no_chain, restarts=args.restarts,
    )
    rows = [(p.bond_length, p.e_vqe, p.e_fci, p.error_mha) for p in points]
    _write_csv(args.out_csv, ["bond_length", "e_vqe_ha", "e_fci_ha", "error_mha"], rows)
    return EXIT_OK


def cmd_bench_table1(args) -> int:
    manifest = _load_manifest(args)
    record = manifest.resolve(args.molecule)
    program = build_program(record, "uccsd")
    model_fc = load_checkpoint(args.checkpoint_fc) if args.checkpoint_fc else None
    model_pad = load_checkpoint(args.checkpoint_pad) if args.checkpoint_pad else None
    rows = bench_initializations(
        record,
        program,
        model_fc,
        model_pad,
        _seed_list(args.seed, args.seeds),
        _optimizer_config(args),
        grad_engine=args.grad,
        threads=args.threads,
    )
    out = [
        (
            r.init_kind,
            r.optimizer,
            r.schedule,
            r.iterations if r.available else "",
            r.error_mha if r.available else "",
            "yes" if r.available else "no",
        )
        for r in rows
    ]
    _write_csv(
        args.out_csv,
        ["init", "optimizer", "schedule", "iterations", "error_mha", "available"],
        out,
    )
    return EXIT_OK if all(r.available for r in rows) else EXIT_PARTIAL


def cmd_bench_table2(args) -> int:
    manifest = _load_manifest(args)
    train_cfg = TrainConfig(
        unroll_steps=args.unroll,
        lstm_lr=args.train_lr,
        epochs_max=args.epochs_max,
        early_stop_rel_tol=args.early_stop,
        seed=args.seed,
        grad_engine=args.grad,
    )
    rows = latent_size_sweep(
        manifest,
        args.molecule,
        _parse_names(args.train),
        [int(s) for s in _parse_names(args.sizes)],
        _seed_list(args.seed, args.seeds),
        _optimizer_config(args),
        train_cfg,
        grad_engine=args.grad,
    )
    _write_csv(
        args.out_csv,
        ["param_num", "optimizer", "iterations", "error_mha"],
        [(r.hidden_dim, r.optimizer, r.iterations, r.error_mha) for r in rows],
    )
    return EXIT_OK


def cmd_transfer(args) -> int:
    manifest = _load_manifest(args)
    train_cfg = TrainConfig(
        unroll_steps=args.unroll,
        lstm_lr=args.train_lr,
        epochs_max=args.epochs_max,
        early_stop_rel_tol=args.early_stop,
        seed=args.seed,
        grad_engine=args.grad,
    )
    curves = transfer_study(
        manifest,
        _parse_names(args.train),
        args.extra,
        args.eval,
        _seed_list(args.seed, args.seeds),
        _optimizer_config(args),
        train_cfg,
        hidden_dim=args.hidden_dim,
        grad_engine=args.grad,
    )
    rows = []
    for curve in curves:
        label = "with-extra" if curve.with_extra else "base"
        for it, err in enumerate(curve.errors_mha, start=1):
            rows.append((curve.optimizer, label, it, err))
    _write_csv(args.out_csv, ["optimizer", "training_set", "iteration", "error_mha"], rows)
    summary = {}
    for curve in curves:
        label = "with-extra" if curve.with_extra else "base"
        hit = iterations_to_threshold(curve.errors_mha, args.threshold_mha)
        summary[f"{curve.optimizer}/{label}"] = {
            "iterations_to_threshold": hit,
            "final_error_mha": min(curve.errors_mha),
        }
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwarm",
        description="VQE experiments with learned warm starts"
        f" (kernel backend: {_kernels.backend_name()})",
    )
    parser.add_argument("--fixtures-dir", default="fixtures", help="molecule fixture directory")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed")
    parser.add_argument(
        "--strict-fixtures", action="store_true", help="re-solve FCI when loading fixtures"
    )
    parser.add_argument(
        "--grad", choices=["adjoint", "shift", "fd"], default="adjoint",
        help="gradient engine",
    )
    parser.add_argument("--threads", type=int, default=1, help="worker threads for grids")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fci", help="exact ground-state reference energy")
    p.add_argument("--molecule", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=100)
    p.set_defaults(func=cmd_fci)

    p = sub.add_parser("vqe", help="one VQE optimization run")
    p.add_argument("--molecule", required=True)
    p.add_argument(
        "--ansatz", choices=["uccsd", "hea", "strongly-entangling"], default="uccsd"
    )
    p.add_argument("--layers", type=int, default=2, help="layers for layered ansaetze")
    p.add_argument("--init", choices=["random", "zero", "lstm", "lstm-fc"], default="zero")
    p.add_argument("--opt", choices=["sgd", "adam"], default="adam")
    p.add_argument("--sched", choices=["const", "decay"], default="const")
    p.add_argument("--lr", type=float, default=None, help="override the per-optimizer default")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--checkpoint", help="meta-model checkpoint for lstm/lstm-fc init")
    p.add_argument("--describe", action="store_true", help="print the program summary and exit")
    p.add_argument("--out-csv", default=None, help="trace CSV destination (default stdout)")
    p.add_argument("--summary-json", default=None)
    p.set_defaults(func=cmd_vqe)

    p = sub.add_parser("meta-train", help="train a warm-start model")
    p.add_argument("--mode", choices=["fc", "pad"], default="fc")
    p.add_argument("--train", required=True, help="comma-separated training molecules")
    p.add_argument(
        "--eval-heads", default="",
        help="held-out molecules to adapt projection heads for (fc mode)",
    )
    p.add_argument("--hidden-dim", type=int, default=40)
    p.add_argument("--unroll", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.005)
    p.add_argument("--epochs-max", type=int, default=300)
    p.add_argument("--early-stop", type=float, default=1e-4)
    p.add_argument("--checkpoint", required=True, help="output checkpoint path")
    p.add_argument("--loss-csv", default=None)
    p.set_defaults(func=cmd_meta_train)

    p = sub.add_parser("meta-eval", help="unroll a trained model on a molecule")
    p.add_argument("--molecule", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_meta_eval)

    p = sub.add_parser("scan", help="potential-energy curve over a bond-length series")
    p.add_argument("--series", required=True, help="molecule name of the series")
    p.add_argument("--init", choices=["random", "zero", "lstm", "lstm-fc"], default="zero")
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--opt", choices=["sgd", "adam"], default="adam")
    p.add_argument("--sched", choices=["const", "decay"], default="const")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=1500)
    p.add_argument("--no-chain", action="store_true", help="disable warm-start chaining")
    p.add_argument("--restarts", type=int, default=6, help="random restarts per geometry")
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bench-table1", help="initialization-strategy grid on one molecule")
    p.add_argument("--molecule", required=True)
    p.add_argument("--checkpoint-fc", default=None)
    p.add_argument("--checkpoint-pad", default=None)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_bench_table1)

    p = sub.add_parser("bench-table2", help="latent-dimension sweep")
    p.add_argument("--molecule", required=True)
    p.add_argument("--train", required=True)
    p.add_argument("--sizes", default="10,15,20,25,30,35,40")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--unroll", type=int, default=10)
    p.add_argument("--train-lr", type=float, default=0.005)
    p.add_argument("--epochs-max", type=int, default=300)
    p.add_argument("--early-stop", type=float, default=1e-4)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_bench_table2)

    p = sub.add_parser("transfer", help="transfer study: train with/without an extra molecule")
    p.add_argument("--train", required=True, help="base training molecules")
    p.add_argument("--extra", required=True, help="molecule added in the with-extra variant")
    p.add_argument("--eval", required=True, help="held-out evaluation molecule")
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--hidden-dim", type=int, default=40)
    p.add_argument("--max-iter", type=int, default=150)
    p.add_argument("--unroll", type=int, default=10)
    p.add_argument("--train-lr", type=float, default=0.005)
    p.add_argument("--epochs-max", type=int, default=60)
    # tighter than the generic training default: the adaptation loss sits on
    # an absolute-energy scale where 1e-4 relative change is several mHa
    p.add_argument("--early-stop", type=float, default=1e-6)
    p.add_argument("--threshold-mha", type=float, default=50.0)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=cmd_transfer)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FixtureError as exc:
        print(f"fixture error: {exc}", file=sys.stderr)
        return EXIT_FIXTURE
    except DivergenceError as exc:
        print(f"training diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ValueError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
