# -*- coding: utf-8 -*-
"""
Model - Ordered layer stack with forward pass, input gradients and parameter gradients
A Model is treated as immutable once built: training returns a new Model
"""
import hashlib
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from core.tensor import ShapeMismatchError
from .layers import Layer
from .losses import LossSpec, batch_cross_entropy, loss_from_logits, loss_gradient_from_logits, softmax

logger = logging.getLogger(__name__)


@dataclass
class Model:
    """Classifier mapping a (C, H, W) image to num_classes logits"""
    layers: List[Layer]
    input_shape: Tuple[int, int, int]
    num_classes: int
    layer_shapes: List[Tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        self.input_shape = tuple(int(d) for d in self.input_shape)
        if len(self.input_shape) != 3 or min(self.input_shape) < 1:
            raise ValueError(f"input_shape must be (C, H, W) with positive extents, got {self.input_shape}")
        if self.num_classes < 1:
            raise ValueError(f"num_classes must be positive, got {self.num_classes}")

        shapes = [self.input_shape]
        for layer in self.layers:
            shapes.append(tuple(layer.output_shape(shapes[-1])))
        if shapes[-1] != (self.num_classes,):
            raise ValueError(f"Layer stack produces {shapes[-1]}, expected ({self.num_classes},)")
        self.layer_shapes = shapes

    # ------------------------------------------------------------------
    # forward / backward
    # ------------------------------------------------------------------

    def _as_batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.shape[1:] != self.input_shape:
            raise ShapeMismatchError(xs.shape[1:], self.input_shape, "model input")
        return xs

    def forward_with_caches(self, xs: np.ndarray) -> Tuple[np.ndarray, List[Any]]:
        """Batched forward pass keeping per-layer caches for backprop"""
        out = self._as_batch(xs)
        caches = []
        for layer in self.layers:
            out, cache = layer.forward(out)
            caches.append(cache)
        return out, caches

    def backward(self, grad_logits: np.ndarray, caches: List[Any],
                 need_params: bool = True) -> Tuple[np.ndarray, List[Dict[str, np.ndarray]]]:
        """Backpropagate a logit gradient; returns (input gradient, per-layer param grads)"""
        grad = grad_logits
        param_grads: List[Dict[str, np.ndarray]] = [{} for _ in self.layers]
        for index in range(len(self.layers) - 1, -1, -1):
            grad, param_grads[index] = self.layers[index].backward(grad, caches[index], need_params)
        return grad, param_grads

    def logits_batch(self, xs: np.ndarray) -> np.ndarray:
        return self.forward_with_caches(xs)[0]

    def logits(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != self.input_shape:
            raise ShapeMismatchError(x.shape, self.input_shape, "model input")
        return self.logits_batch(x[None])[0]

    def predict(self, x: np.ndarray) -> int:
        return int(np.argmax(self.logits(x)))

    # ------------------------------------------------------------------
    # parameters
    # ------------------------------------------------------------------

    def parameters(self) -> List[Dict[str, np.ndarray]]:
        return [layer.params() for layer in self.layers]

    def with_parameters(self, params: Sequence[Dict[str, np.ndarray]]) -> 'Model':
        layers = [layer.with_params(p) if p else layer for layer, p in zip(self.layers, params)]
        return Model(layers, self.input_shape, self.num_classes)

    @cached_property
    def fingerprint(self) -> str:
        """SHA-256 of the serialized model, used to bind detectors to models"""
        from .serialization import model_to_bytes
        return hashlib.sha256(model_to_bytes(self)).hexdigest()


# Convenience functions

def forward(model: Model, x: np.ndarray) -> np.ndarray:
    """Logits for a single (C, H, W) input"""
    return model.logits(x)


def predict_probs(model: Model, x: np.ndarray) -> np.ndarray:
    return softmax(model.logits(x))


def predict_labels(model: Model, images: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Argmax predictions for a stacked (N, C, H, W) image array"""
    labels = [np.argmax(model.logits_batch(images[start:start + batch_size]), axis=1)
              for start in range(0, len(images), batch_size)]
    return np.concatenate(labels) if labels else np.zeros(0, dtype=np.int64)


def loss_value(model: Model, x: np.ndarray, spec: LossSpec) -> float:
    return loss_from_logits(model.logits(x), spec)


def loss_and_input_gradient(model: Model, x: np.ndarray, spec: LossSpec) -> Tuple[float, np.ndarray, np.ndarray]:
    """Loss, gradient w.r.t. x and the logits at x, from one forward/backward pass"""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.input_shape:
        raise ShapeMismatchError(x.shape, model.input_shape, "model input")
    logits, caches = model.forward_with_caches(x[None])
    logits = logits[0]
    grad_logits = loss_gradient_from_logits(logits, spec)
    grad_x, _ = model.backward(grad_logits[None], caches, need_params=False)
    return loss_from_logits(logits, spec), grad_x[0], logits


def input_gradient(model: Model, x: np.ndarray, spec: LossSpec) -> np.ndarray:
    """Gradient of loss_value w.r.t. the input"""
    return loss_and_input_gradient(model, x, spec)[1]


def loss_and_param_gradients(model: Model, xs: np.ndarray,
                             labels: np.ndarray) -> Tuple[float, List[Dict[str, np.ndarray]]]:
    """Mean cross-entropy over the batch and its gradient w.r.t. every weight tensor"""
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) == 0:
        raise ValueError("param_gradients needs a nonempty batch")
    if len(labels) != len(xs):
        raise ValueError(f"Batch has {len(xs)} inputs but {len(labels)} labels")
    logits, caches = model.forward_with_caches(xs)
    loss, grad_logits = batch_cross_entropy(logits, labels)
    _, grads = model.backward(grad_logits, caches, need_params=True)
    return loss, grads


def param_gradients(model: Model, xs: np.ndarray, labels: np.ndarray) -> List[Dict[str, np.ndarray]]:
    """Per-layer gradients of the batch-mean cross-entropy (empty dicts for weightless layers)"""
    return loss_and_param_gradients(model, xs, labels)[1]
