# -*- coding: utf-8 -*-
"""
Trainer - Minibatch Adam on mean cross-entropy for the stand-in classifiers
Single-threaded and deterministic given the seed
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.optim import AdamState, adam_step
from .model import Model, loss_and_param_gradients, predict_labels

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    optimizer: str = "adam"
    lr: float = 1e-3
    batch_size: int = 64
    epochs: int = 5
    seed: int = 1234

    def __post_init__(self):
        if self.optimizer != "adam":
            raise ValueError(f"Only the adam optimizer is supported, got {self.optimizer!r}")
        if self.lr <= 0 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError(
                f"Invalid training config: lr={self.lr}, batch_size={self.batch_size}, epochs={self.epochs}")


def accuracy(model: Model, images: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of images whose argmax prediction equals the label"""
    if len(labels) == 0:
        return 0.0
    return float(np.mean(predict_labels(model, images) == np.asarray(labels)))


def train(model: Model, train_set, config: TrainConfig = TrainConfig(), test_set=None) -> Model:
    """Train on a dataset exposing stacked `images` (N, C, H, W) and `labels` (N,)

    Returns a new Model; the input model is left untouched.
    """
    images, labels = np.asarray(train_set.images), np.asarray(train_set.labels)
    if len(labels) == 0:
        raise ValueError("train_set is empty")
    if config.epochs == 0:
        logger.info("epochs=0, returning the model unchanged")
        return model

    rng = np.random.default_rng(config.seed)
    params: List[Dict[str, np.ndarray]] = [dict(p) for p in model.parameters()]
    states: Dict[Tuple[int, str], AdamState] = {
        (i, name): AdamState.initial(tensor, config.lr)
        for i, layer_params in enumerate(params) for name, tensor in layer_params.items()
    }

    current = model
    n = len(labels)
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        losses = []
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            loss, grads = loss_and_param_gradients(current, images[batch], labels[batch])
            for (i, name), state in states.items():
                states[(i, name)], params[i][name] = adam_step(state, params[i][name], grads[i][name])
            current = current.with_parameters(params)
            losses.append(loss)
        logger.info(f"Epoch {epoch + 1}/{config.epochs}: mean loss {np.mean(losses):.4f}")

    train_acc = accuracy(current, images, labels)
    message = f"Training finished: train accuracy {train_acc:.4f}"
    if test_set is not None:
        message += f", test accuracy {accuracy(current, test_set.images, test_set.labels):.4f}"
    logger.info(message)
    return current
