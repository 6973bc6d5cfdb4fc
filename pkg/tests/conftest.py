# -*- coding: utf-8 -*-
"""
Shared fixtures: small random models, toy datasets and the slow-test switch
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.data import make_toy_dataset  # noqa: E402
from core.nn import Conv2D, Dense, Flatten, MaxPool2x2, Model, ReLU, TrainConfig, build_model, train  # noqa: E402

MNIST_DIR_ENV = "SQUEEZE_MNIST_DIR"


def pytest_collection_modifyitems(config, items):
    if os.environ.get(MNIST_DIR_ENV):
        return
    skip_slow = pytest.mark.skip(reason=f"set {MNIST_DIR_ENV} to run desk-scale MNIST checks")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def small_conv_model(seed: int = 0, input_shape=(2, 6, 6), num_classes: int = 4) -> Model:
    """conv(pad 1)-relu-pool-conv-relu-flatten-dense; exercises every layer kind"""
    rng = np.random.default_rng(seed)
    c, h, w = input_shape
    layers = [
        Conv2D(rng.normal(0, 0.5, (3, c, 3, 3)), rng.normal(0, 0.1, 3), padding=1), ReLU(), MaxPool2x2(),
        Conv2D(rng.normal(0, 0.5, (4, 3, 2, 2)), rng.normal(0, 0.1, 4)), ReLU(),
        Flatten(),
    ]
    flat = 4 * (h // 2 - 1) * (w // 2 - 1)
    layers.append(Dense(rng.normal(0, 0.5, (num_classes, flat)), rng.normal(0, 0.1, num_classes)))
    return Model(layers, input_shape, num_classes)


def linear_model(weight, bias, input_shape=(1, 1, 2)) -> Model:
    """Flatten followed by a single dense layer: logits are affine in the pixels"""
    weight = np.asarray(weight, dtype=np.float64)
    return Model([Flatten(), Dense(weight, np.asarray(bias, dtype=np.float64))], input_shape, weight.shape[0])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def conv_model():
    return small_conv_model()


@pytest.fixture
def mlp_model():
    return build_model("mlp", (1, 8, 8), 3, seed=7)


@pytest.fixture(scope="session")
def toy_train():
    return make_toy_dataset(n=200, num_classes=2, seed=0, split="train")


@pytest.fixture(scope="session")
def toy_test():
    return make_toy_dataset(n=100, num_classes=2, seed=1, split="test")


@pytest.fixture(scope="session")
def toy_model(toy_train):
    """mlp trained to (near) perfect accuracy on the toy task"""
    model = build_model("mlp", toy_train.image_shape, toy_train.num_classes, seed=3)
    return train(model, toy_train, TrainConfig(lr=0.01, batch_size=16, epochs=5, seed=5))
