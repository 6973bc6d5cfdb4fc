# -*- coding: utf-8 -*-
"""
Elastic-Net Attack - C&W L2 (beta = 0, Adam) and EAD (beta > 0, projected FISTA)

Minimizes c * f(x) + beta * ||x - x0||_1 + ||x - x0||_2^2 over x in [0, 1]^p,
with f the confidence-clamped margin loss, and binary-searches c.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.nn import LossSpec, Model, loss_and_input_gradient, loss_from_logits, loss_value, raw_margin
from core.optim import AdamState, FistaState, adam_step, fista_step
from core.tensor import clip_box
from .configs import CwEadConfig
from .outcome import AttackOutcome
from .targets import TargetSpec, is_satisfied

logger = logging.getLogger(__name__)

ABORT_IMPROVEMENT = 0.9999


def elastic_distance(d: np.ndarray, beta: float) -> float:
    """beta * L1 + squared L2 of a perturbation"""
    return float(beta * np.abs(d).sum() + np.dot(d.ravel(), d.ravel()))


def elastic_net_objective(model: Model, x: np.ndarray, x0: np.ndarray, c: float,
                          loss: LossSpec, beta: float) -> float:
    d = np.asarray(x, dtype=np.float64) - x0
    l1 = float(np.abs(d).sum())
    l2_squared = float(np.dot(d.ravel(), d.ravel()))
    return c * loss_value(model, x, loss) + beta * l1 + l2_squared


def cw_objective(model: Model, x: np.ndarray, x0: np.ndarray, c: float, loss: LossSpec) -> float:
    d = np.asarray(x, dtype=np.float64) - x0
    l2_squared = float(np.dot(d.ravel(), d.ravel()))
    return c * loss_value(model, x, loss) + l2_squared


@dataclass
class _Best:
    distance: float = np.inf
    adversarial: Optional[np.ndarray] = None
    logits: Optional[np.ndarray] = None
    c: Optional[float] = None


class _CandidateTracker:
    """Keeps the closest iterate that satisfies the margin and the target"""

    def __init__(self, x0: np.ndarray, loss: LossSpec, target: TargetSpec, beta: float):
        self.x0 = x0
        self.loss = loss
        self.target = target
        self.beta = beta
        self.best = _Best()

    def offer(self, x: np.ndarray, logits: np.ndarray, c: float) -> bool:
        if raw_margin(logits, self.loss) > -self.loss.kappa or not is_satisfied(self.target, logits):
            return False
        distance = elastic_distance(x - self.x0, self.beta)
        if distance < self.best.distance:
            self.best = _Best(distance, x.copy(), logits.copy(), c)
        return True


def _objective_from_logits(logits, x, x0, c, loss, beta) -> float:
    return c * loss_from_logits(logits, loss) + elastic_distance(x - x0, beta)


def _run_adam(model, x0, loss, c, cfg: CwEadConfig, tracker: _CandidateTracker) -> bool:
    state = AdamState.initial(x0, cfg.alpha0)
    x = x0.copy()
    found = False
    check_every = max(cfg.iterations // 10, 1)
    previous = np.inf
    for iteration in range(cfg.iterations):
        _, grad_f, logits = loss_and_input_gradient(model, x, loss)
        found |= tracker.offer(x, logits, c)
        if cfg.abort_early and iteration % check_every == 0:
            objective = _objective_from_logits(logits, x, x0, c, loss, 0.0)
            if objective > previous * ABORT_IMPROVEMENT:
                break
            previous = objective
        state, x = adam_step(state, x, c * grad_f + 2.0 * (x - x0))
        x = clip_box(x, 0.0, 1.0)
    else:
        found |= tracker.offer(x, model.logits(x), c)
    return found


def _run_fista(model, x0, loss, c, cfg: CwEadConfig, tracker: _CandidateTracker) -> bool:
    state = FistaState.initial(x0, cfg.alpha0, cfg.iterations, cfg.lr_schedule, cfg.use_momentum)
    found = False
    check_every = max(cfg.iterations // 10, 1)
    previous = np.inf
    for iteration in range(cfg.iterations):
        _, grad_f, _ = loss_and_input_gradient(model, state.y, loss)
        state = fista_step(state, c * grad_f + 2.0 * (state.y - x0), x0, cfg.beta)
        logits = model.logits(state.x_current)
        found |= tracker.offer(state.x_current, logits, c)
        if cfg.abort_early and iteration % check_every == 0:
            objective = _objective_from_logits(logits, state.x_current, x0, c, loss, cfg.beta)
            if objective > previous * ABORT_IMPROVEMENT:
                break
            previous = objective
    return found


def cw_ead_attack(model: Model, x0: np.ndarray, spec: TargetSpec, cfg: CwEadConfig) -> AttackOutcome:
    """Binary search over c; returns the closest successful iterate across all c

    Never raises on failure: model_fooled is False and the adversarial is x0.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    loss = spec.margin_loss(cfg.kappa)
    tracker = _CandidateTracker(x0, loss, spec, cfg.beta)
    run_inner = _run_fista if cfg.is_elastic_net else _run_adam

    c, c_low, c_high = cfg.c_initial, 0.0, None
    for step in range(cfg.binary_search_steps):
        succeeded = run_inner(model, x0, loss, c, cfg, tracker)
        logger.debug(f"binary search step {step + 1}/{cfg.binary_search_steps}: c={c:.6g}, "
                     f"success={succeeded}, best distance={tracker.best.distance:.6g}")
        if succeeded:
            c_high = c
        else:
            c_low = c
        if c_high is not None:
            c = (c_low + c_high) / 2.0
        else:
            c = min(c * 10.0, cfg.c_upper_bound)

    best = tracker.best
    if best.adversarial is None:
        return AttackOutcome.from_adversarial(x0.copy(), x0, model.logits(x0), False, c_low)
    return AttackOutcome.from_adversarial(best.adversarial, x0, best.logits, True, best.c)
