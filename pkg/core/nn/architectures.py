# -*- coding: utf-8 -*-
"""
Architectures - Stand-in classifiers built from the layer set
"""
import logging
from typing import Callable, Dict, List, Tuple

import numpy as np

from .layers import Conv2D, Dense, Flatten, Layer, MaxPool2x2, ReLU
from .model import Model

logger = logging.getLogger(__name__)


def _he(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int) -> np.ndarray:
    return rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)


def _conv(rng, in_ch: int, out_ch: int, size: int = 3, padding: int = 0) -> Conv2D:
    weight = _he(rng, (out_ch, in_ch, size, size), in_ch * size * size)
    return Conv2D(weight, np.zeros(out_ch), padding)


def _dense(rng, in_features: int, out_features: int) -> Dense:
    return Dense(_he(rng, (out_features, in_features), in_features), np.zeros(out_features))


def _flat_size(layers: List[Layer], input_shape: Tuple[int, int, int]) -> int:
    shape = input_shape
    for layer in layers:
        shape = layer.output_shape(shape)
    return int(np.prod(shape))


def _mnist_layers(rng, input_shape, num_classes) -> List[Layer]:
    # conv(32,3x3)-relu-pool-conv(64,3x3)-relu-pool-flatten-dense(128)-relu-dense(K)
    features = [
        _conv(rng, input_shape[0], 32), ReLU(), MaxPool2x2(),
        _conv(rng, 32, 64), ReLU(), MaxPool2x2(),
        Flatten(),
    ]
    flat = _flat_size(features, input_shape)
    return features + [_dense(rng, flat, 128), ReLU(), _dense(rng, 128, num_classes)]


def _cifar10_layers(rng, input_shape, num_classes) -> List[Layer]:
    features = [
        _conv(rng, input_shape[0], 64), ReLU(), _conv(rng, 64, 64), ReLU(), MaxPool2x2(),
        _conv(rng, 64, 128), ReLU(), _conv(rng, 128, 128), ReLU(), MaxPool2x2(),
        Flatten(),
    ]
    flat = _flat_size(features, input_shape)
    return features + [
        _dense(rng, flat, 256), ReLU(),
        _dense(rng, 256, 256), ReLU(),
        _dense(rng, 256, num_classes),
    ]


def _mlp_layers(rng, input_shape, num_classes) -> List[Layer]:
    flat = int(np.prod(input_shape))
    return [Flatten(), _dense(rng, flat, 64), ReLU(), _dense(rng, 64, num_classes)]


ARCHITECTURES: Dict[str, Callable[..., List[Layer]]] = {
    "mnist": _mnist_layers,
    "cifar10": _cifar10_layers,
    "mlp": _mlp_layers,
}


def build_model(arch: str, input_shape: Tuple[int, int, int], num_classes: int, seed: int = 0) -> Model:
    """Freshly initialized model (He-normal weights, zero biases)"""
    if arch not in ARCHITECTURES:
        raise ValueError(f"Unknown architecture {arch!r}; choose from {sorted(ARCHITECTURES)}")
    rng = np.random.default_rng(seed)
    model = Model(ARCHITECTURES[arch](rng, tuple(input_shape), num_classes), tuple(input_shape), num_classes)
    logger.debug(f"Built {arch} model with {len(model.layers)} layers, seed {seed}")
    return model
