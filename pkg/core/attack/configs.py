# -*- coding: utf-8 -*-
"""
Attack Configs - Parameters for the gradient-sign and elastic-net attack families
"""
from dataclasses import dataclass
from typing import Any, Dict

from config import CW_EAD_DEFAULTS, IFGSM_DEFAULTS
from core.optim import LrSchedule


@dataclass(frozen=True)
class FgsmConfig:
    """epsilon is the L-infinity budget; steps=1 is plain FGSM"""
    epsilon: float
    steps: int = IFGSM_DEFAULTS["steps"]

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")

    @property
    def step_size(self) -> float:
        return self.epsilon / self.steps


@dataclass(frozen=True)
class CwEadConfig:
    """beta = 0 is the C&W L2 attack (Adam), beta > 0 the elastic-net attack (FISTA)"""
    kappa: float
    beta: float = 0.0
    c_initial: float = CW_EAD_DEFAULTS["c_initial"]
    binary_search_steps: int = CW_EAD_DEFAULTS["binary_search_steps"]
    iterations: int = CW_EAD_DEFAULTS["iterations"]
    alpha0: float = CW_EAD_DEFAULTS["alpha0"]
    c_upper_bound: float = CW_EAD_DEFAULTS["c_upper_bound"]
    lr_schedule: LrSchedule = LrSchedule(CW_EAD_DEFAULTS["lr_schedule"])
    use_momentum: bool = True
    abort_early: bool = CW_EAD_DEFAULTS["abort_early"]

    def __post_init__(self):
        if not isinstance(self.lr_schedule, LrSchedule):
            object.__setattr__(self, 'lr_schedule', LrSchedule(self.lr_schedule))
        if self.kappa < 0 or self.beta < 0:
            raise ValueError(f"kappa and beta must be >= 0, got kappa={self.kappa}, beta={self.beta}")
        if self.c_initial <= 0 or self.alpha0 <= 0:
            raise ValueError(f"c_initial and alpha0 must be > 0, got {self.c_initial}, {self.alpha0}")
        if self.binary_search_steps < 1 or self.iterations < 1:
            raise ValueError(
                f"binary_search_steps and iterations must be >= 1, got "
                f"{self.binary_search_steps}, {self.iterations}")

    @classmethod
    def cw(cls, kappa: float, **overrides: Any) -> 'CwEadConfig':
        return cls(kappa=kappa, beta=0.0, **overrides)

    @classmethod
    def ead(cls, kappa: float, beta: float, **overrides: Any) -> 'CwEadConfig':
        if beta <= 0:
            raise ValueError(f"EAD needs beta > 0, got {beta}")
        return cls(kappa=kappa, beta=beta, **overrides)

    @property
    def is_elastic_net(self) -> bool:
        return self.beta > 0

    def describe(self) -> Dict[str, Any]:
        return {
            'kappa': self.kappa, 'beta': self.beta, 'c_initial': self.c_initial,
            'binary_search_steps': self.binary_search_steps, 'iterations': self.iterations,
            'alpha0': self.alpha0, 'lr_schedule': self.lr_schedule.value,
        }
