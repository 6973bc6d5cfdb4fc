# -*- coding: utf-8 -*-
"""
Gradient Sign Attacks - FGSM and iterative FGSM with L-infinity ball clipping
Both use the cross-entropy gradient: targeted attacks descend it toward the
target class, nontargeted attacks ascend it away from the true label.
"""
import logging

import numpy as np

from core.nn import Model, input_gradient
from core.tensor import clip_box, clip_linf_ball
from .configs import FgsmConfig
from .outcome import AttackOutcome
from .targets import TargetSpec, is_satisfied

logger = logging.getLogger(__name__)


def _sign_step(model: Model, x: np.ndarray, spec: TargetSpec, step_size: float) -> np.ndarray:
    grad = input_gradient(model, x, spec.cross_entropy_loss())
    direction = -1.0 if spec.targeted else 1.0
    return x + direction * step_size * np.sign(grad)


def _finish(model: Model, x: np.ndarray, x0: np.ndarray, spec: TargetSpec) -> AttackOutcome:
    logits = model.logits(x)
    return AttackOutcome.from_adversarial(x, x0, logits, is_satisfied(spec, logits))


def fgsm(model: Model, x0: np.ndarray, spec: TargetSpec, cfg: FgsmConfig) -> AttackOutcome:
    """Single sign step of size epsilon, then the [0, 1] box"""
    x0 = np.asarray(x0, dtype=np.float64)
    x = clip_box(_sign_step(model, x0, spec, cfg.epsilon), 0.0, 1.0)
    return _finish(model, x, x0, spec)


def ifgsm(model: Model, x0: np.ndarray, spec: TargetSpec, cfg: FgsmConfig) -> AttackOutcome:
    """cfg.steps sign steps of size epsilon / steps, each followed by ball and box clipping"""
    x0 = np.asarray(x0, dtype=np.float64)
    x = x0.copy()
    for _ in range(cfg.steps):
        x = _sign_step(model, x, spec, cfg.step_size)
        x = clip_box(clip_linf_ball(x, x0, cfg.epsilon), 0.0, 1.0)
    outcome = _finish(model, x, x0, spec)
    logger.debug(f"I-FGSM eps={cfg.epsilon} steps={cfg.steps}: fooled={outcome.model_fooled}")
    return outcome
