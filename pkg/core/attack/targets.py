# -*- coding: utf-8 -*-
"""
Targets - Target-class selection and the success test for each target mode
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from core.nn import LossKind, LossMode, LossSpec


class TargetMode(Enum):
    NONTARGETED = "nontargeted"
    NEXT = "next"                  # (label + 1) mod num_classes
    LEAST_LIKELY = "least_likely"  # argmin of the clean softmax


@dataclass(frozen=True)
class TargetSpec:
    mode: TargetMode
    true_label: int
    num_classes: int
    resolved_target: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.true_label < self.num_classes:
            raise ValueError(f"true_label {self.true_label} outside [0, {self.num_classes})")
        if (self.mode is TargetMode.NONTARGETED) != (self.resolved_target is None):
            raise ValueError(f"{self.mode.value} spec has inconsistent resolved_target {self.resolved_target}")

    @property
    def targeted(self) -> bool:
        return self.mode is not TargetMode.NONTARGETED

    @property
    def loss_index(self) -> int:
        """Class the losses are taken against: the target, or the true label when nontargeted"""
        return self.resolved_target if self.targeted else self.true_label

    def margin_loss(self, kappa: float) -> LossSpec:
        mode = LossMode.TARGETED if self.targeted else LossMode.NONTARGETED
        return LossSpec(LossKind.MARGIN, self.loss_index, kappa, mode)

    def cross_entropy_loss(self) -> LossSpec:
        return LossSpec(LossKind.CROSS_ENTROPY, self.loss_index)


def select_target(probs_clean: np.ndarray, true_label: int, mode) -> TargetSpec:
    """Resolve the target class for an attack on a clean input"""
    probs_clean = np.asarray(probs_clean, dtype=np.float64)
    mode = TargetMode(mode)
    num_classes = probs_clean.shape[-1]
    if isinstance(true_label, bool) or not 0 <= int(true_label) < num_classes:
        raise ValueError(f"Invalid true label {true_label} for {num_classes} classes")
    true_label = int(true_label)
    if mode is TargetMode.NONTARGETED:
        return TargetSpec(mode, true_label, num_classes)
    if mode is TargetMode.NEXT:
        return TargetSpec(mode, true_label, num_classes, (true_label + 1) % num_classes)
    return TargetSpec(mode, true_label, num_classes, int(np.argmin(probs_clean)))


def is_satisfied(spec: TargetSpec, logits: np.ndarray) -> bool:
    """Whether the predicted class meets the attack goal"""
    predicted = int(np.argmax(logits))
    if spec.targeted:
        return predicted == spec.resolved_target
    return predicted != spec.true_label
