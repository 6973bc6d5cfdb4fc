# -*- coding: utf-8 -*-
"""
Losses - Softmax, cross-entropy and the confidence-clamped logit margin loss
Each loss has a value and an exact (sub)gradient with respect to the logits
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np


class LossKind(Enum):
    """Loss families"""
    CROSS_ENTROPY = "cross_entropy"
    MARGIN = "margin"


class LossMode(Enum):
    """Targeted losses push towards target_index, nontargeted away from it"""
    TARGETED = "targeted"
    NONTARGETED = "nontargeted"


@dataclass(frozen=True)
class LossSpec:
    """What to differentiate: the class index is the target (targeted) or the true label (nontargeted)"""
    kind: LossKind
    target_index: int
    kappa: float = 0.0
    mode: LossMode = LossMode.TARGETED

    def __post_init__(self):
        if self.target_index < 0:
            raise ValueError(f"target_index must be >= 0, got {self.target_index}")
        if self.kappa < 0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")

    def validate_for(self, num_classes: int) -> None:
        if not 0 <= self.target_index < num_classes:
            raise ValueError(f"target_index {self.target_index} outside [0, {num_classes})")


def softmax(logits: np.ndarray) -> np.ndarray:
    """Numerically stable softmax over the last axis"""
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def runner_up(logits: np.ndarray, excluded: int) -> int:
    """Index of the largest logit other than `excluded`; ties go to the lowest index"""
    masked = np.array(logits, dtype=np.float64)
    masked[excluded] = -np.inf
    return int(np.argmax(masked))


def raw_margin(logits: np.ndarray, spec: LossSpec) -> float:
    """The unclamped margin term of the margin loss

    targeted:    max_{j != t} z_j - z_t
    nontargeted: z_true - max_{j != true} z_j
    A value <= -kappa means the confidence requirement is met.
    """
    t = spec.target_index
    other = runner_up(logits, t)
    if spec.mode is LossMode.TARGETED:
        return float(logits[other] - logits[t])
    return float(logits[t] - logits[other])


def loss_from_logits(logits: np.ndarray, spec: LossSpec) -> float:
    """Scalar loss for a single logit vector"""
    logits = np.asarray(logits, dtype=np.float64)
    spec.validate_for(logits.shape[-1])
    if spec.kind is LossKind.CROSS_ENTROPY:
        return float(-log_softmax(logits)[spec.target_index])
    return max(raw_margin(logits, spec), -spec.kappa)


def loss_gradient_from_logits(logits: np.ndarray, spec: LossSpec) -> np.ndarray:
    """Gradient of loss_from_logits w.r.t. the logits

    At the clamp (margin == -kappa) the margin branch is taken.
    """
    logits = np.asarray(logits, dtype=np.float64)
    spec.validate_for(logits.shape[-1])
    t = spec.target_index
    if spec.kind is LossKind.CROSS_ENTROPY:
        grad = softmax(logits)
        grad[t] -= 1.0
        return grad

    grad = np.zeros_like(logits)
    if raw_margin(logits, spec) < -spec.kappa:
        return grad
    other = runner_up(logits, t)
    sign = 1.0 if spec.mode is LossMode.TARGETED else -1.0
    grad[other] += sign
    grad[t] -= sign
    return grad


def batch_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy of a (N, K) logit batch and its gradient w.r.t. the logits"""
    n = logits.shape[0]
    rows = np.arange(n)
    loss = float(-log_softmax(logits)[rows, labels].mean())
    grad = softmax(logits)
    grad[rows, labels] -= 1.0
    return loss, grad / n
