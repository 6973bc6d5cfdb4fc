# -*- coding: utf-8 -*-
"""
Attack Outcome - Result of one attack on one image
"""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.tensor import norms


@dataclass
class AttackOutcome:
    adversarial: np.ndarray
    model_fooled: bool
    distortion: Tuple[float, float, float]
    predicted_label: int
    final_c: Optional[float] = None
    detector_bypassed: Optional[bool] = None  # filled in by the harness
    detector_score: Optional[float] = None

    @classmethod
    def from_adversarial(cls, adversarial: np.ndarray, x0: np.ndarray, logits: np.ndarray,
                         model_fooled: bool, final_c: Optional[float] = None) -> 'AttackOutcome':
        return cls(adversarial, bool(model_fooled), norms(adversarial - x0), int(np.argmax(logits)), final_c)

    @property
    def success(self) -> bool:
        """Fooled the model and evaded the detector"""
        return self.model_fooled and bool(self.detector_bypassed)
