# -*- coding: utf-8 -*-
"""
Adam - Bias-corrected adaptive moment estimation as a pure state transition
"""
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from core.tensor import ShapeMismatchError

BETA1 = 0.9
BETA2 = 0.999
EPS_HAT = 1e-8


@dataclass(frozen=True)
class AdamState:
    """Optimizer state for one iterate; moments are shaped like the iterate"""
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0
    lr: float = 1e-3
    beta1: float = BETA1
    beta2: float = BETA2
    eps_hat: float = EPS_HAT

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError(f"Adam lr must be > 0, got {self.lr}")
        if self.step_count < 0:
            raise ValueError(f"step_count must be >= 0, got {self.step_count}")
        if self.first_moment.shape != self.second_moment.shape:
            raise ShapeMismatchError(self.first_moment.shape, self.second_moment.shape, "Adam moments")

    @classmethod
    def initial(cls, like: np.ndarray, lr: float) -> 'AdamState':
        """Fresh state with zero moments for an iterate shaped like `like`"""
        zeros = np.zeros(np.shape(like), dtype=np.float64)
        return cls(first_moment=zeros, second_moment=zeros.copy(), lr=lr)


def adam_step(state: AdamState, iterate: np.ndarray, grad: np.ndarray) -> Tuple[AdamState, np.ndarray]:
    """One Adam update; returns (new state, new iterate) and leaves the inputs untouched"""
    iterate = np.asarray(iterate, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if grad.shape != iterate.shape:
        raise ShapeMismatchError(grad.shape, iterate.shape, "adam_step gradient vs iterate")
    if state.first_moment.shape != iterate.shape:
        raise ShapeMismatchError(state.first_moment.shape, iterate.shape, "adam_step state vs iterate")

    t = state.step_count + 1
    m = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad
    v = state.beta2 * state.second_moment + (1.0 - state.beta2) * (grad * grad)
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_iterate = iterate - state.lr * m_hat / (np.sqrt(v_hat) + state.eps_hat)
    return replace(state, first_moment=m, second_moment=v, step_count=t), new_iterate
