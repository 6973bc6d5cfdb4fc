# -*- coding: utf-8 -*-
import numpy as np
import pytest

from core.nn import (
    Dense, Flatten, LossKind, LossMode, LossSpec, MaxPool2x2, Model, ReLU, TrainConfig,
    accuracy, build_model, forward, input_gradient, loss_from_logits, param_gradients, raw_margin, softmax, train,
)
from core.nn.losses import loss_gradient_from_logits, runner_up
from core.nn.model import loss_and_param_gradients
from tests.conftest import linear_model, small_conv_model

H = 1e-5


# ----------------------------------------------------------------------
# naive oracles
# ----------------------------------------------------------------------

def naive_forward(model: Model, x: np.ndarray) -> np.ndarray:
    """Straight-loop forward pass for a single input"""
    out = np.array(x, dtype=np.float64)
    for layer in model.layers:
        if layer.kind == "dense":
            result = np.zeros(layer.out_features)
            for o in range(layer.out_features):
                total = layer.bias[o]
                for i in range(layer.in_features):
                    total += layer.weight[o, i] * out[i]
                result[o] = total
            out = result
        elif layer.kind == "conv2d":
            oc, ic, kh, kw = layer.weight.shape
            p = layer.padding
            c, h, w = out.shape
            padded = np.zeros((c, h + 2 * p, w + 2 * p))
            padded[:, p:p + h, p:p + w] = out
            ho, wo = h + 2 * p - kh + 1, w + 2 * p - kw + 1
            result = np.zeros((oc, ho, wo))
            for o in range(oc):
                for i in range(ho):
                    for j in range(wo):
                        total = layer.bias[o]
                        for ch in range(ic):
                            for a in range(kh):
                                for b in range(kw):
                                    total += layer.weight[o, ch, a, b] * padded[ch, i + a, j + b]
                        result[o, i, j] = total
            out = result
        elif layer.kind == "relu":
            out = np.array([v if v > 0 else 0.0 for v in out.ravel()]).reshape(out.shape)
        elif layer.kind == "flatten":
            out = out.ravel()
        else:
            c, h, w = out.shape
            result = np.zeros((c, h // 2, w // 2))
            for ch in range(c):
                for i in range(h // 2):
                    for j in range(w // 2):
                        result[ch, i, j] = max(out[ch, 2 * i + a, 2 * j + b] for a in range(2) for b in range(2))
            out = result
    return out


def _activation_pattern(model: Model, caches, sample: int, logits: np.ndarray, spec: LossSpec) -> tuple:
    """Which piece of the piecewise-linear function a sample sits on"""
    parts = []
    for layer, cache in zip(model.layers, caches):
        if isinstance(layer, ReLU):
            parts.append(cache[sample].tobytes())
        elif isinstance(layer, MaxPool2x2):
            parts.append(cache[1][sample].tobytes())
    if spec.kind is LossKind.MARGIN:
        parts.append((runner_up(logits, spec.target_index), raw_margin(logits, spec) < -spec.kappa))
    return tuple(parts)


def finite_difference_check(model: Model, x: np.ndarray, spec: LossSpec, coords) -> tuple:
    """(analytic, central-difference) gradients on the coordinates away from kinks

    The difference is taken on the logits and chained through the loss gradient at x,
    so a saturated cross-entropy does not drown the check in roundoff.
    """
    analytic = input_gradient(model, x, spec)
    batch = np.repeat(x[None], 2 * len(coords) + 1, axis=0)
    for k, idx in enumerate(coords):
        batch[(2 * k, *idx)] += H
        batch[(2 * k + 1, *idx)] -= H
    logits, caches = model.forward_with_caches(batch)
    base = _activation_pattern(model, caches, len(batch) - 1, logits[-1], spec)
    grad_logits = loss_gradient_from_logits(logits[-1], spec)

    kept_analytic, kept_fd = [], []
    for k, idx in enumerate(coords):
        plus = _activation_pattern(model, caches, 2 * k, logits[2 * k], spec)
        minus = _activation_pattern(model, caches, 2 * k + 1, logits[2 * k + 1], spec)
        if plus != base or minus != base:
            continue
        fd = float(grad_logits @ (logits[2 * k] - logits[2 * k + 1])) / (2 * H)
        kept_analytic.append(analytic[idx])
        kept_fd.append(fd)
    return np.array(kept_analytic), np.array(kept_fd)


def relative_error(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    return 0.0 if scale < 1e-12 else float(np.linalg.norm(a - b) / scale)


# ----------------------------------------------------------------------
# layers and forward
# ----------------------------------------------------------------------

def test_identity_dense_returns_flattened_input(rng):
    model = Model([Flatten(), Dense(np.eye(4), np.zeros(4))], (1, 2, 2), 4)
    x = rng.random((1, 2, 2))
    assert np.array_equal(forward(model, x), x.ravel())


def test_relu_example():
    out, _ = ReLU().forward(np.array([[-1.0, 2.0]]))
    assert np.array_equal(out, [[0.0, 2.0]])


def test_maxpool_ties_route_gradient_to_first_maximum():
    pool = MaxPool2x2()
    x = np.ones((1, 1, 2, 2))
    out, cache = pool.forward(x)
    grad_in, _ = pool.backward(np.ones_like(out), cache)
    assert np.array_equal(grad_in[0, 0], [[1.0, 0.0], [0.0, 0.0]])


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_forward_matches_naive_loops(seed):
    model = small_conv_model(seed)
    x = np.random.default_rng(seed + 100).random(model.input_shape)
    assert np.allclose(forward(model, x), naive_forward(model, x), rtol=0, atol=1e-12)


def test_model_rejects_inconsistent_stack():
    with pytest.raises(ValueError):
        Model([Flatten(), Dense(np.zeros((3, 5)), np.zeros(3))], (1, 2, 2), 3)
    with pytest.raises(ValueError):
        Model([Flatten(), Dense(np.zeros((3, 4)), np.zeros(3))], (1, 2, 2), 2)


def test_mnist_architecture_shapes():
    model = build_model("mnist", (1, 28, 28), 10, seed=0)
    assert model.layer_shapes[-1] == (10,)
    assert forward(model, np.zeros((1, 28, 28))).shape == (10,)
    with pytest.raises(ValueError):
        build_model("resnet", (1, 28, 28), 10)


# ----------------------------------------------------------------------
# losses
# ----------------------------------------------------------------------

def test_softmax_examples():
    assert np.array_equal(softmax([0.0, 0.0]), [0.5, 0.5])
    big = softmax([1000.0, 0.0])
    assert np.all(np.isfinite(big))
    assert big[0] == pytest.approx(1.0) and big[1] == pytest.approx(0.0, abs=1e-300)
    assert np.allclose(softmax([1.0, 2.0, 3.0]), [0.09003, 0.24473, 0.66524], atol=1e-5)


def test_margin_loss_examples():
    logits = np.array([1.0, 3.0, 2.0])
    assert loss_from_logits(logits, LossSpec(LossKind.MARGIN, 2, 0.0, LossMode.TARGETED)) == 1.0
    assert loss_from_logits(logits, LossSpec(LossKind.MARGIN, 2, 5.0, LossMode.TARGETED)) == 1.0
    clamped = LossSpec(LossKind.MARGIN, 0, 3.0, LossMode.TARGETED)
    assert loss_from_logits(np.array([0.0, -10.0]), clamped) == -3.0


def test_nontargeted_margin_and_tie_breaking():
    spec = LossSpec(LossKind.MARGIN, 0, 0.0, LossMode.NONTARGETED)
    assert raw_margin(np.array([4.0, 1.0, 3.0]), spec) == 1.0
    # equal runners-up: the lowest index is used
    assert runner_up(np.array([0.0, 2.0, 2.0]), 0) == 1


def test_loss_spec_validation():
    with pytest.raises(ValueError):
        LossSpec(LossKind.MARGIN, -1)
    with pytest.raises(ValueError):
        LossSpec(LossKind.MARGIN, 0, kappa=-1.0)
    with pytest.raises(ValueError):
        loss_from_logits(np.zeros(3), LossSpec(LossKind.CROSS_ENTROPY, 3))


def test_margin_gradient_is_zero_inside_clamp():
    spec = LossSpec(LossKind.MARGIN, 0, 3.0, LossMode.TARGETED)
    assert np.array_equal(loss_gradient_from_logits(np.array([0.0, -10.0]), spec), [0.0, 0.0])
    model = linear_model([[1.0, 0.0], [-1.0, 0.0]], [5.0, -5.0])
    assert np.array_equal(input_gradient(model, np.array([[[0.5, 0.5]]]), spec), np.zeros((1, 1, 2)))


@pytest.mark.parametrize("seed", range(5))
def test_logit_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    logits = rng.normal(scale=2.0, size=6)
    specs = [LossSpec(LossKind.CROSS_ENTROPY, seed % 6),
             LossSpec(LossKind.MARGIN, int(np.argmax(logits)), 0.0, LossMode.NONTARGETED),
             LossSpec(LossKind.MARGIN, int(np.argmin(logits)), 0.0, LossMode.TARGETED)]
    for spec in specs:
        fd = np.zeros_like(logits)
        for j in range(len(logits)):
            step = np.zeros_like(logits)
            step[j] = H
            fd[j] = (loss_from_logits(logits + step, spec) - loss_from_logits(logits - step, spec)) / (2 * H)
        assert relative_error(loss_gradient_from_logits(logits, spec), fd) < 1e-6


def test_softmax_sums_to_one_and_ignores_constant_shift(rng):
    for _ in range(50):
        logits = rng.normal(scale=rng.uniform(0.1, 100.0), size=int(rng.integers(2, 12)))
        probs = softmax(logits)
        assert abs(probs.sum() - 1.0) <= 1e-12
        assert np.allclose(softmax(logits + rng.uniform(-500.0, 500.0)), probs, rtol=1e-9, atol=1e-15)


def test_forward_is_bit_identical_across_calls(conv_model, rng):
    x = rng.random(conv_model.input_shape)
    first = forward(conv_model, x)
    for _ in range(3):
        assert np.array_equal(forward(conv_model, x), first)
    assert np.array_equal(forward(conv_model, x.copy()), first)


def test_constant_model_has_zero_input_gradient():
    model = linear_model(np.zeros((3, 2)), np.zeros(3))
    grad = input_gradient(model, np.array([[[0.2, 0.7]]]), LossSpec(LossKind.CROSS_ENTROPY, 1))
    assert np.array_equal(grad, np.zeros((1, 1, 2)))


# ----------------------------------------------------------------------
# gradients against finite differences
# ----------------------------------------------------------------------

def _models_for_seed(seed):
    return [
        build_model("mnist", (1, 28, 28), 10, seed=seed),
        small_conv_model(seed),
        build_model("mlp", (1, 8, 8), 10, seed=seed),
    ]


def _loss_specs(model: Model, x: np.ndarray, seed: int):
    logits = forward(model, x)
    yield LossSpec(LossKind.CROSS_ENTROPY, seed % model.num_classes)
    yield LossSpec(LossKind.MARGIN, int(np.argmax(logits)), 0.0, LossMode.NONTARGETED)
    yield LossSpec(LossKind.MARGIN, int(np.argmin(logits)), 0.0, LossMode.TARGETED)


@pytest.mark.parametrize("seed", range(20))
def test_input_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    for model in _models_for_seed(seed):
        x = rng.random(model.input_shape)
        coords = [tuple(int(rng.integers(0, d)) for d in model.input_shape) for _ in range(12)]
        for spec in _loss_specs(model, x, seed):
            analytic, fd = finite_difference_check(model, x, spec, coords)
            assert len(fd) >= 6
            assert relative_error(analytic, fd) < 1e-6


def test_param_gradients_match_finite_differences(rng):
    model = Model([Flatten(), Dense(rng.normal(size=(5, 4)), rng.normal(size=5)),
                   Dense(rng.normal(size=(3, 5)), rng.normal(size=3))], (1, 2, 2), 3)
    x, label = rng.random((1, 1, 2, 2)), np.array([2])
    grads = param_gradients(model, x, label)

    for layer_index in (1, 2):
        for name, tensor in model.parameters()[layer_index].items():
            analytic, fd = [], []
            for idx in np.ndindex(tensor.shape):
                params = [dict(p) for p in model.parameters()]
                losses = []
                for sign in (1.0, -1.0):
                    shifted = tensor.copy()
                    shifted[idx] += sign * H
                    params[layer_index] = {**params[layer_index], name: shifted}
                    losses.append(loss_and_param_gradients(model.with_parameters(params), x, label)[0])
                analytic.append(grads[layer_index][name][idx])
                fd.append((losses[0] - losses[1]) / (2 * H))
            assert relative_error(np.array(analytic), np.array(fd)) < 1e-6


def test_duplicated_sample_gives_same_param_gradients(mlp_model, rng):
    x = rng.random((1, 1, 8, 8))
    single = param_gradients(mlp_model, x, np.array([1]))
    double = param_gradients(mlp_model, np.concatenate([x, x]), np.array([1, 1]))
    for a, b in zip(single, double):
        assert a.keys() == b.keys()
        for name in a:
            assert np.allclose(a[name], b[name], rtol=1e-12, atol=1e-15)


def test_zero_weight_bias_gradient_is_softmax_minus_onehot():
    model = linear_model(np.zeros((3, 2)), np.zeros(3))
    grads = param_gradients(model, np.array([[[[0.4, 0.9]]]]), np.array([1]))
    assert np.allclose(grads[1]["bias"], [1 / 3, 1 / 3 - 1, 1 / 3], atol=1e-15)
    assert grads[0] == {}


def test_param_gradients_rejects_bad_batches(mlp_model):
    with pytest.raises(ValueError):
        param_gradients(mlp_model, np.zeros((0, 1, 8, 8)), np.zeros(0, dtype=int))
    with pytest.raises(ValueError):
        param_gradients(mlp_model, np.zeros((2, 1, 8, 8)), np.array([0]))


# ----------------------------------------------------------------------
# training
# ----------------------------------------------------------------------

def test_trainer_learns_separable_toy_set(toy_train, toy_model):
    assert accuracy(toy_model, toy_train.images, toy_train.labels) >= 0.99


def test_trainer_zero_epochs_leaves_weights_unchanged(toy_train):
    model = build_model("mlp", toy_train.image_shape, 2, seed=3)
    before = [{k: v.copy() for k, v in p.items()} for p in model.parameters()]
    trained = train(model, toy_train, TrainConfig(epochs=0))
    for old, new in zip(before, trained.parameters()):
        for name in old:
            assert np.array_equal(old[name], new[name])


def test_trainer_does_not_mutate_input_model(toy_train):
    model = build_model("mlp", toy_train.image_shape, 2, seed=3)
    before = model.parameters()[1]["weight"].copy()
    trained = train(model, toy_train, TrainConfig(lr=0.01, batch_size=32, epochs=1))
    assert np.array_equal(model.parameters()[1]["weight"], before)
    assert not np.array_equal(trained.parameters()[1]["weight"], before)


def test_train_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(optimizer="sgd")
    with pytest.raises(ValueError):
        TrainConfig(lr=0.0)
