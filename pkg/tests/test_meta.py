"""The warm-start model: cell math, projections, unrolling, BPTT, training."""
from __future__ import annotations

import numpy as np
import pytest

from qwarm.ansatz import build_uccsd, enumerate_excitations
from qwarm.errors import DivergenceError
from qwarm.lstm import LstmState, LstmWeights, lstm_backward, lstm_forward, lstm_step, zero_weight_grads
from qwarm.meta import (
    FcHead,
    TrainConfig,
    create_model,
    ensure_head,
    fc_project,
    infer_init,
    load_checkpoint,
    pad_or_truncate,
    save_checkpoint,
    train,
    truncate_output,
    unroll,
    _backpropagate,
)


def toy_weights(m: int, input_dim: int, seed: int = 0, scale: float = 0.4) -> LstmWeights:
    rng = np.random.default_rng(seed)
    cat = m + input_dim
    return LstmWeights(
        *(rng.uniform(-scale, scale, (m, cat)) for _ in range(4)),
        *(rng.uniform(-scale, scale, m) for _ in range(4)),
    )


class TestLstmCell:
    def test_zero_weights_zero_state(self):
        m, d = 3, 2
        w = LstmWeights(*(np.zeros((m, m + d)) for _ in range(4)), *(np.zeros(m) for _ in range(4)))
        state, phi = lstm_step(w, LstmState.zeros(m), np.array([1.0, -1.0]))
        np.testing.assert_array_equal(state.c, np.zeros(m))
        np.testing.assert_array_equal(phi, np.zeros(m))

    def test_saturated_forget_gate_retains_memory(self):
        m, d = 2, 1
        w = LstmWeights(*(np.zeros((m, m + d)) for _ in range(4)), *(np.zeros(m) for _ in range(4)))
        w.b_f[:] = 50.0   # forget gate ~ 1
        w.b_i[:] = -50.0  # input gate ~ 0
        prev = LstmState(np.zeros(m), np.array([0.7, -0.4]))
        state, _ = lstm_step(w, prev, np.array([0.9]))
        np.testing.assert_allclose(state.c, prev.c, atol=1e-15)

    def test_gate_ranges(self):
        w = toy_weights(4, 3, seed=1)
        state = LstmState.zeros(4)
        rng = np.random.default_rng(5)
        for _ in range(10):
            state, cache = lstm_forward(w, state, rng.uniform(-2, 2, 3))
            assert np.all((cache.f > 0) & (cache.f < 1))
            assert np.all((cache.i > 0) & (cache.i < 1))
            assert np.all((cache.o > 0) & (cache.o < 1))
            assert np.all(np.abs(state.h) < 1.0)

    def test_cell_backward_matches_finite_differences(self):
        m, d = 3, 2
        w = toy_weights(m, d, seed=2)
        x = np.array([0.3, -0.8])
        state0 = LstmState(np.array([0.1, -0.2, 0.05]), np.array([0.3, 0.0, -0.1]))
        target = np.array([0.5, -1.0, 0.25])

        def loss_for(weights: LstmWeights) -> float:
            state, _ = lstm_forward(weights, state0, x)
            return float(target @ state.h)

        state, cache = lstm_forward(w, state0, x)
        grads = zero_weight_grads(w)
        lstm_backward(w, cache, target.copy(), np.zeros(m), grads)
        eps = 1e-6
        for key in ("w_f", "w_i", "w_c", "w_o", "b_f", "b_i", "b_c", "b_o"):
            arr = getattr(w, key)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = arr[idx]
                arr[idx] = orig + eps
                up = loss_for(w)
                arr[idx] = orig - eps
                down = loss_for(w)
                arr[idx] = orig
                fd = (up - down) / (2 * eps)
                assert grads[key][idx] == pytest.approx(fd, rel=1e-5, abs=1e-8), key


class TestPadTruncate:
    def test_pad(self):
        np.testing.assert_array_equal(pad_or_truncate([1, 2, 3], 5), [1, 2, 3, 0, 0])

    def test_truncate(self):
        np.testing.assert_array_equal(pad_or_truncate([1, 2, 3], 2), [1, 2])

    def test_empty_input(self):
        np.testing.assert_array_equal(pad_or_truncate([], 3), [0, 0, 0])

    def test_truncate_output(self):
        np.testing.assert_array_equal(truncate_output([0.1, 0.2, 0.3], 2), [0.1, 0.2])
        np.testing.assert_array_equal(truncate_output([0.1, 0.2], 2), [0.1, 0.2])

    def test_truncate_wider_than_input_rejected(self):
        with pytest.raises(ValueError):
            truncate_output([1.0], 2)

    @pytest.mark.parametrize("n,m", [(1, 1), (2, 5), (4, 4), (3, 8)])
    def test_round_trip(self, n, m):
        rng = np.random.default_rng(n * 10 + m)
        x = rng.standard_normal(n)
        np.testing.assert_array_equal(truncate_output(pad_or_truncate(x, m), n), x)


class TestFcHead:
    def test_zero_head_gives_zero_theta(self):
        head = FcHead("toy", np.zeros((2, 4)), np.zeros(2), np.zeros((3, 4)), np.zeros(3))
        np.testing.assert_array_equal(fc_project(head, np.ones(4)), np.zeros(5))

    def test_linear_map_columns(self):
        w_s = np.arange(8.0).reshape(2, 4)
        head = FcHead("toy", w_s, np.zeros(2), np.zeros((1, 4)), np.zeros(1))
        phi = np.zeros(4)
        phi[1] = 1.0
        out = fc_project(head, phi)
        np.testing.assert_array_equal(out[:2], w_s[:, 1])

    def test_h4_head_dimensions(self, h4):
        model = create_model("fc", hidden_dim=8, seed=0)
        program = build_uccsd(enumerate_excitations(4, 8), 8, molecule_tag=h4.tag)
        head = ensure_head(model, program, seed=0)
        assert head.n_singles == 8 and head.n_doubles == 18
        theta = fc_project(head, np.zeros(8))
        assert theta.shape == (26,)

    def test_head_dimension_safety_across_fixtures(self, manifest):
        # a head created for a program always emits exactly param_count values
        model = create_model("fc", hidden_dim=5, seed=3)
        for rec in manifest.records:
            program = build_uccsd(
                enumerate_excitations(rec.n_electrons, rec.n_qubits),
                rec.n_qubits,
                molecule_tag=rec.tag,
            )
            head = ensure_head(model, program, seed=3)
            theta = fc_project(head, np.ones(5))
            assert theta.shape == (program.param_count,), rec.tag

    def test_mismatched_head_rejected_at_execution(self, h2):
        from qwarm.errors import DimensionError
        from qwarm.meta import unroll

        program = build_uccsd(enumerate_excitations(2, 4), 4, molecule_tag=h2.tag)
        model = create_model("fc", hidden_dim=4, unroll_steps=1, seed=4)
        model.heads[program.molecule_tag] = FcHead(
            program.molecule_tag, np.zeros((5, 4)), np.zeros(5), np.zeros((9, 4)), np.zeros(9)
        )
        with pytest.raises(DimensionError):
            unroll(model, h2, program)


def toy_molecule_and_program(h2):
    program = build_uccsd(enumerate_excitations(2, 4), 4, molecule_tag=h2.tag)
    return h2, program


class TestUnroll:
    def test_single_step_loss(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=3, unroll_steps=1, seed=1)
        ensure_head(model, program)
        result, _ = unroll(model, record, program)
        assert result.loss == pytest.approx(0.1 * result.energies[0])

    def test_constant_energy_weighting(self, h2):
        # all-zero heads emit theta = 0 every step: E_t = E_HF for all t and
        # the weighted loss collapses to 0.55 * E_HF at T = 10
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=3, unroll_steps=10, seed=1)
        tag = program.molecule_tag
        model.heads[tag] = FcHead(tag, np.zeros((2, 3)), np.zeros(2), np.zeros((1, 3)), np.zeros(1))
        result, _ = unroll(model, record, program)
        for energy in result.energies:
            assert energy == pytest.approx(record.hf_energy_ha, abs=1e-12)
        assert result.loss == pytest.approx(0.55 * record.hf_energy_ha)

    def test_pad_mode_truncates_latent(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("pad", hidden_dim=6, unroll_steps=2, seed=2)
        result, _ = unroll(model, record, program)
        assert all(t.shape == (3,) for t in result.thetas)

    def test_infer_init_shape_and_determinism(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, unroll_steps=3, seed=3)
        ensure_head(model, program)
        a = infer_init(model, record, program)
        b = infer_init(model, record, program)
        assert a.shape == (program.param_count,)
        np.testing.assert_array_equal(a, b)

    def test_missing_head_raises(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, seed=0)
        with pytest.raises(KeyError, match="projection head"):
            infer_init(model, record, program)


class TestBackpropagation:
    def test_full_model_gradient_vs_finite_differences(self, h2):
        # 2-qubit system is not available as a fixture; H2 (4 qubits) with
        # M = 3, T = 2 keeps the check fast while exercising every path
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=3, unroll_steps=2, seed=4)
        ensure_head(model, program, seed=4)

        _, caches = unroll(model, record, program, grad_engine="adjoint")
        grads = _backpropagate(model, record, program, caches)

        def loss_now() -> float:
            result, _ = unroll(model, record, program)
            return result.loss

        eps = 1e-6
        checked = 0
        rng = np.random.default_rng(0)
        for name, grad in grads.items():
            parts = name.split(".")
            if parts[0] == "lstm":
                arr = getattr(model.lstm, parts[1])
            else:
                arr = getattr(model.heads[".".join(parts[1:-1])], parts[-1])
            flat = arr.reshape(-1)
            gflat = grad.reshape(-1)
            # probe a sample of entries per tensor to keep runtime bounded
            idxs = rng.choice(flat.size, size=min(6, flat.size), replace=False)
            for idx in idxs:
                orig = flat[idx]
                flat[idx] = orig + eps
                up = loss_now()
                flat[idx] = orig - eps
                down = loss_now()
                flat[idx] = orig
                fd = (up - down) / (2 * eps)
                assert gflat[idx] == pytest.approx(fd, rel=1e-5, abs=1e-9), name
                checked += 1
        assert checked >= 40

    def test_loss_weights_linear_functional(self, h2):
        # permuting trajectory energies re-weights the loss exactly by 0.1*t/T
        energies = [(-1.0) ** t * (0.5 + 0.1 * t) for t in range(1, 11)]
        from qwarm.meta import _weighted_loss

        base = _weighted_loss(energies)
        swapped = energies.copy()
        swapped[0], swapped[9] = swapped[9], swapped[0]
        expected_delta = 0.1 * 1 / 10 * (swapped[0] - energies[0]) + (
            0.1 * 10 / 10 * (swapped[9] - energies[9])
        )
        assert _weighted_loss(swapped) - base == pytest.approx(expected_delta)


class TestTraining:
    def test_loss_decreases_on_h2(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=6, unroll_steps=4, seed=5)
        cfg = TrainConfig(unroll_steps=4, lstm_lr=0.01, epochs_max=10,
                          early_stop_rel_tol=1e-12, seed=5)
        history = train(model, [(record, program)], cfg)
        assert history[-1] < history[0]

    def test_early_stop_on_equal_losses(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, unroll_steps=2, seed=6)
        tag = program.molecule_tag
        model.heads[tag] = FcHead(tag, np.zeros((2, 4)), np.zeros(2), np.zeros((1, 4)), np.zeros(1))
        cfg = TrainConfig(unroll_steps=2, lstm_lr=0.0, epochs_max=50,
                          early_stop_rel_tol=1e-4, seed=6)
        history = train(model, [(record, program)], cfg)
        assert len(history) == 2  # zero lr -> identical losses -> stop after epoch 2

    def test_training_determinism(self, h2):
        record, program = toy_molecule_and_program(h2)
        histories = []
        for _ in range(2):
            model = create_model("fc", hidden_dim=5, unroll_steps=3, seed=7)
            cfg = TrainConfig(unroll_steps=3, lstm_lr=0.01, epochs_max=5,
                              early_stop_rel_tol=1e-12, seed=7)
            histories.append(train(model, [(record, program)], cfg))
        assert histories[0] == histories[1]

    def test_divergence_guard(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, unroll_steps=2, seed=8)
        ensure_head(model, program)
        model.lstm.w_f[:] = np.nan
        cfg = TrainConfig(unroll_steps=2, epochs_max=2, seed=8)
        with pytest.raises(DivergenceError):
            train(model, [(record, program)], cfg)

    def test_freeze_lstm_only_updates_head(self, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, unroll_steps=2, seed=9)
        ensure_head(model, program, seed=9)
        lstm_before = {k: getattr(model.lstm, k).copy() for k in ("w_f", "w_i", "w_c", "w_o")}
        head_before = model.heads[program.molecule_tag].w_s.copy()
        cfg = TrainConfig(unroll_steps=2, lstm_lr=0.01, epochs_max=3,
                          early_stop_rel_tol=1e-12, seed=9)
        train(model, [(record, program)], cfg, freeze_lstm=True)
        for k, arr in lstm_before.items():
            np.testing.assert_array_equal(getattr(model.lstm, k), arr)
        assert not np.array_equal(model.heads[program.molecule_tag].w_s, head_before)


class TestCheckpoint:
    def test_round_trip(self, tmp_path, h2):
        record, program = toy_molecule_and_program(h2)
        model = create_model("fc", hidden_dim=4, unroll_steps=3, seed=10)
        ensure_head(model, program, seed=10)
        path = tmp_path / "model.json"
        save_checkpoint(model, path)
        loaded = load_checkpoint(path)
        assert loaded.mode == "fc" and loaded.hidden_dim == 4
        np.testing.assert_array_equal(loaded.lstm.w_f, model.lstm.w_f)
        np.testing.assert_array_equal(
            loaded.heads[program.molecule_tag].w_d, model.heads[program.molecule_tag].w_d
        )
        a = infer_init(model, record, program)
        b = infer_init(loaded, record, program)
        np.testing.assert_array_equal(a, b)

    def test_version_check(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"format_version": 99}')
        with pytest.raises(ValueError, match="version"):
            load_checkpoint(path)
