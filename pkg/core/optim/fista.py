# -*- coding: utf-8 -*-
"""
FISTA - Projected accelerated proximal gradient with L1 soft-thresholding around an anchor

Each step minimizes smooth(x) + beta * ||x - x0||_1 over the [0,1] box:
    x_next = clip(x0 + S(y - alpha_k * grad(y) - x0, alpha_k * beta), 0, 1)
    y_next = x_next + k / (k + 3) * (x_next - x_current)
"""
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from core.tensor import ShapeMismatchError, clip_box


class LrSchedule(Enum):
    """Step-size decay rules"""
    INVERSE_SQRT = "inverse_sqrt"          # alpha0 / sqrt(k + 1)
    POLYNOMIAL_SQRT = "polynomial_sqrt"    # alpha0 * (1 - k / I) ** 0.5
    CONSTANT = "constant"


@dataclass(frozen=True)
class FistaState:
    x_current: np.ndarray
    x_previous: np.ndarray
    y: np.ndarray
    k: int = 0
    alpha0: float = 0.01
    total_iterations: int = 1000
    lr_schedule: LrSchedule = LrSchedule.INVERSE_SQRT
    use_momentum: bool = True

    def __post_init__(self):
        if self.alpha0 <= 0:
            raise ValueError(f"alpha0 must be > 0, got {self.alpha0}")
        if self.total_iterations < 1:
            raise ValueError(f"total_iterations must be >= 1, got {self.total_iterations}")
        for name in ("x_previous", "y"):
            other = getattr(self, name)
            if other.shape != self.x_current.shape:
                raise ShapeMismatchError(other.shape, self.x_current.shape, f"FistaState.{name}")

    @classmethod
    def initial(cls, x0: np.ndarray, alpha0: float = 0.01, total_iterations: int = 1000,
                lr_schedule: LrSchedule = LrSchedule.INVERSE_SQRT, use_momentum: bool = True) -> 'FistaState':
        """Start with every point at the anchor"""
        x0 = np.asarray(x0, dtype=np.float64)
        return cls(x0.copy(), x0.copy(), x0.copy(), 0, alpha0, total_iterations, LrSchedule(lr_schedule), use_momentum)

    def learning_rate(self) -> float:
        if self.lr_schedule is LrSchedule.INVERSE_SQRT:
            return self.alpha0 / np.sqrt(self.k + 1)
        if self.lr_schedule is LrSchedule.POLYNOMIAL_SQRT:
            return self.alpha0 * np.sqrt(max(1.0 - self.k / self.total_iterations, 0.0))
        return self.alpha0

    def momentum(self) -> float:
        return self.k / (self.k + 3.0) if self.use_momentum else 0.0


def soft_threshold(z: np.ndarray, beta: float) -> np.ndarray:
    """Proximal operator of beta * ||.||_1: shrink toward zero by beta, zeroing |z| <= beta"""
    if beta < 0:
        raise ValueError(f"soft_threshold beta must be >= 0, got {beta}")
    z = np.asarray(z, dtype=np.float64)
    return np.sign(z) * np.maximum(np.abs(z) - beta, 0.0)


def fista_step(state: FistaState, grad_at_y: np.ndarray, x0: np.ndarray, beta: float) -> FistaState:
    """One projected FISTA iteration; grad_at_y is the smooth-part gradient at state.y"""
    grad_at_y = np.asarray(grad_at_y, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    if grad_at_y.shape != state.y.shape:
        raise ShapeMismatchError(grad_at_y.shape, state.y.shape, "fista_step gradient")
    if x0.shape != state.y.shape:
        raise ShapeMismatchError(x0.shape, state.y.shape, "fista_step anchor")

    alpha = state.learning_rate()
    moved = state.y - alpha * grad_at_y
    if beta > 0:
        moved = x0 + soft_threshold(moved - x0, alpha * beta)
    elif beta < 0:
        raise ValueError(f"beta must be >= 0, got {beta}")
    x_next = clip_box(moved, 0.0, 1.0)
    y_next = x_next + state.momentum() * (x_next - state.x_current)
    return replace(state, x_current=x_next, x_previous=state.x_current, y=y_next, k=state.k + 1)
