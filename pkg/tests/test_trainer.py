import numpy as np
import pytest

from oracles import grid_min_hinge_2d, hinge_objective, logistic_objective_np
from simembed import (
    ConfigError,
    DEFAULT_C_GRID,
    DegenerateDataError,
    EmbeddedDataset,
    LandmarkPairSet,
    LossFunction,
    accuracy,
    eval_loss,
    hinge_loss,
    logistic_loss,
    loss_values,
    margin_indicator_loss,
    model_from_json,
    model_to_json,
    select_c,
    train,
    zero_one_loss,
)

PAIRS = LandmarkPairSet(((0, 1),))


def _embedded(matrix, labels):
    return EmbeddedDataset(matrix=np.asarray(matrix, dtype=np.float64),
                           labels=np.asarray(labels), pair_set=PAIRS,
                           transfer=None)


def _raw_weights(model):
    # stored weights are pre-scaled by d; recover the solver-space vector
    return model.weights / model.d


class TestLossFunction:
    def test_lipschitz_constants(self):
        assert hinge_loss(0.5).lipschitz_constant == 2.0
        assert logistic_loss().lipschitz_constant == 1.0
        assert zero_one_loss().lipschitz_constant == 0.0
        assert not margin_indicator_loss(0.3).is_lipschitz

    def test_values(self):
        assert loss_values(hinge_loss(), [0.0])[0] == 1.0
        assert loss_values(hinge_loss(), [2.0])[0] == 0.0
        assert loss_values(zero_one_loss(), [0.0])[0] == 1.0
        assert loss_values(zero_one_loss(), [0.1])[0] == 0.0
        assert loss_values(margin_indicator_loss(0.6), [0.5])[0] == 1.0
        assert loss_values(logistic_loss(), [0.0])[0] == pytest.approx(np.log(2))

    def test_invalid_kind(self):
        with pytest.raises(ConfigError):
            LossFunction("huber")


class TestHingeTraining:
    def test_one_dimensional_closed_form(self):
        emb = _embedded([[-1.0], [1.0]], [-1, 1])
        model = train(emb, hinge_loss(), 1.0, seed=0, fit_bias=False)
        w = _raw_weights(model)
        obj = hinge_objective([[-1.0], [1.0]], [-1, 1], w, 1.0)
        # analytic optimum w*=1 with objective 0.5
        assert obj == pytest.approx(0.5, abs=1e-2)
        assert w[0] == pytest.approx(1.0, abs=1e-2)

    def test_single_class_error(self):
        emb = _embedded([[1.0], [0.5]], [1, 1])
        with pytest.raises(DegenerateDataError):
            train(emb, hinge_loss(), 1.0, seed=0)

    def test_separable_blobs_zero_errors(self):
        rng = np.random.default_rng(0)
        pos = rng.normal(2.0, 0.3, (20, 2))
        neg = rng.normal(-2.0, 0.3, (20, 2))
        emb = _embedded(np.vstack([pos, neg]) / 4.0, [1] * 20 + [-1] * 20)
        model = train(emb, hinge_loss(), 10.0, seed=0)
        assert accuracy(model, emb) == 1.0

    def test_grid_oracle(self):
        rng = np.random.default_rng(1)
        for trial in range(5):
            n = int(rng.integers(4, 21))
            Z = rng.uniform(-1, 1, (n, 2))
            y = np.where(rng.random(n) < 0.5, 1, -1)
            if len(np.unique(y)) < 2:
                y[0] = -y[0]
            emb = _embedded(Z, y)
            model = train(emb, hinge_loss(), 1.0, seed=trial, fit_bias=False)
            got = hinge_objective(Z.tolist(), y.tolist(),
                                  _raw_weights(model), 1.0)
            best = grid_min_hinge_2d(Z, y, 1.0)
            assert got <= best + 1e-2

    def test_dual_monotone_and_kkt(self):
        rng = np.random.default_rng(2)
        Z = rng.uniform(-1, 1, (30, 4))
        y = np.where(rng.random(30) < 0.5, 1, -1)
        y[0], y[1] = 1, -1
        model = train(_embedded(Z, y), hinge_loss(), 10.0, seed=3)
        duals = np.asarray(model.dual_objectives)
        assert np.all(np.diff(duals) >= -1e-9)
        assert model.kkt_residual <= 1e-3

    def test_determinism_bit_exact(self):
        rng = np.random.default_rng(3)
        Z = rng.uniform(-1, 1, (25, 3))
        y = np.where(rng.random(25) < 0.5, 1, -1)
        y[0], y[1] = 1, -1
        a = train(_embedded(Z, y), hinge_loss(), 100.0, seed=7)
        b = train(_embedded(Z, y), hinge_loss(), 100.0, seed=7)
        assert np.array_equal(a.weights, b.weights)
        assert a.bias == b.bias

    def test_bad_penalty(self):
        emb = _embedded([[1.0], [-1.0]], [1, -1])
        with pytest.raises(ConfigError):
            train(emb, hinge_loss(), 0.0, seed=0)

    def test_unsupported_loss(self):
        emb = _embedded([[1.0], [-1.0]], [1, -1])
        with pytest.raises(ConfigError):
            train(emb, zero_one_loss(), 1.0, seed=0)


class TestLogisticTraining:
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(4)
        Z = rng.uniform(-1, 1, (15, 3))
        y = np.where(rng.random(15) < 0.5, 1.0, -1.0)
        C = 2.0

        def grad(w):
            margins = y * (Z @ w)
            sig = 1.0 / (1.0 + np.exp(margins))
            return w - C * Z.T @ (y * sig)

        h = 1e-6
        for _ in range(100):
            w = rng.standard_normal(3)
            g = grad(w)
            fd = np.empty(3)
            for j in range(3):
                e = np.zeros(3)
                e[j] = h
                fd[j] = (logistic_objective_np(Z, y, w + e, C)
                         - logistic_objective_np(Z, y, w - e, C)) / (2 * h)
            assert np.linalg.norm(g - fd) / max(np.linalg.norm(g), 1e-12) <= 1e-5

    def test_training_reaches_stationarity(self):
        rng = np.random.default_rng(5)
        pos = rng.normal(1.0, 0.5, (15, 2))
        neg = rng.normal(-1.0, 0.5, (15, 2))
        emb = _embedded(np.vstack([pos, neg]) / 3.0, [1] * 15 + [-1] * 15)
        model = train(emb, logistic_loss(), 1.0, seed=0, fit_bias=False)
        w = _raw_weights(model)
        margins = emb.labels * (emb.matrix @ w)
        sig = 1.0 / (1.0 + np.exp(margins))
        grad = w - 1.0 * emb.matrix.T @ (emb.labels * sig)
        assert np.linalg.norm(grad) <= 1e-4
        assert accuracy(model, emb) >= 0.9


class TestSelectC:
    def test_default_grid(self):
        assert DEFAULT_C_GRID == (1.0, 10.0, 100.0, 1000.0)

    def test_singleton_grid(self):
        emb = _embedded([[-1.0], [1.0]], [-1, 1])
        _, c = select_c(emb, emb, hinge_loss(), grid=(37.0,), seed=0)
        assert c == 37.0

    def test_tie_goes_to_smallest_c(self):
        emb = _embedded([[-1.0], [1.0]], [-1, 1])  # all C values reach 100%
        _, c = select_c(emb, emb, hinge_loss(), seed=0)
        assert c == 1.0

    def test_empty_grid(self):
        emb = _embedded([[-1.0], [1.0]], [-1, 1])
        with pytest.raises(ConfigError):
            select_c(emb, emb, hinge_loss(), grid=(), seed=0)


class TestEvalLoss:
    def test_perfect_zero_one(self):
        emb = _embedded([[-1.0], [1.0]], [-1, 1])
        model = train(emb, hinge_loss(), 100.0, seed=0, fit_bias=False)
        assert eval_loss(model, emb, zero_one_loss()) == 0.0

    def test_zero_decision_hinge(self):
        from simembed import LinearModel
        model = LinearModel(weights=np.zeros(1), bias=0.0,
                            loss_kind="hinge", c_penalty=1.0)
        emb = _embedded([[0.5], [-0.5]], [1, -1])
        assert eval_loss(model, emb, hinge_loss()) == 1.0

    def test_margin_indicator(self):
        from simembed import LinearModel
        model = LinearModel(weights=np.array([1.0]), bias=0.0,
                            loss_kind="hinge", c_penalty=1.0)
        emb = _embedded([[0.5]], [1])
        assert eval_loss(model, emb, margin_indicator_loss(0.6)) == 1.0
        assert eval_loss(model, emb, margin_indicator_loss(0.4)) == 0.0


class TestAccuracy:
    def test_extremes(self):
        from simembed import LinearModel
        model = LinearModel(weights=np.array([1.0]), bias=0.0,
                            loss_kind="hinge", c_penalty=1.0)
        assert accuracy(model, _embedded([[1.0], [-1.0]], [1, -1])) == 1.0
        assert accuracy(model, _embedded([[1.0], [-1.0]], [-1, 1])) == 0.0
        assert accuracy(model, _embedded([[1.0], [-1.0]], [1, 1])) == 0.5


def test_model_json_roundtrip():
    rng = np.random.default_rng(6)
    Z = rng.uniform(-1, 1, (10, 2))
    y = np.where(rng.random(10) < 0.5, 1, -1)
    y[0], y[1] = 1, -1
    model = train(_embedded(Z, y), hinge_loss(), 10.0, seed=1)
    back = model_from_json(model_to_json(model))
    assert np.array_equal(back.weights, model.weights)
    assert back.bias == model.bias
    assert back.c_penalty == model.c_penalty
