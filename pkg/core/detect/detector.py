# -*- coding: utf-8 -*-
"""
Joint Detector - Feature-squeezing detection by L1 prediction distance

A sample is flagged when the largest L1 distance between the softmax output on
the original input and on any squeezed version exceeds a threshold calibrated
on legitimate samples.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from dataclasses_json import dataclass_json

from core.nn import Model, softmax
from core.squeeze import Squeezer, apply_squeezer

logger = logging.getLogger(__name__)


class DetectorFormatError(ValueError):
    """Detector document is malformed"""


class DetectorModelMismatchError(DetectorFormatError):
    """Detector was calibrated against a different model"""


def _probs_batch(model: Model, images: np.ndarray, batch_size: int = 256) -> np.ndarray:
    chunks = [softmax(model.logits_batch(images[start:start + batch_size]))
              for start in range(0, len(images), batch_size)]
    return np.concatenate(chunks) if chunks else np.zeros((0, model.num_classes))


def squeezer_score(model: Model, x: np.ndarray, s: Squeezer) -> float:
    """L1 distance between predictions on x and on its squeezed version, in [0, 2]"""
    original = softmax(model.logits(x))
    squeezed = softmax(model.logits(apply_squeezer(s, x)))
    return float(np.abs(original - squeezed).sum())


def joint_score(model: Model, x: np.ndarray, squeezers: Sequence[Squeezer]) -> float:
    """Maximum squeezer_score over the squeezers"""
    if not squeezers:
        raise ValueError("joint_score needs at least one squeezer")
    original = softmax(model.logits(x))
    return max(float(np.abs(original - softmax(model.logits(apply_squeezer(s, x)))).sum())
               for s in squeezers)


def joint_scores(model: Model, images: np.ndarray, squeezers: Sequence[Squeezer]) -> np.ndarray:
    """joint_score for every image of a stacked (N, C, H, W) array, with batched forward passes"""
    if not squeezers:
        raise ValueError("joint_scores needs at least one squeezer")
    images = np.asarray(images, dtype=np.float64)
    original = _probs_batch(model, images)
    scores = np.zeros(len(images))
    for s in squeezers:
        squeezed = np.stack([apply_squeezer(s, x) for x in images]) if len(images) else images
        scores = np.maximum(scores, np.abs(original - _probs_batch(model, squeezed)).sum(axis=1))
    return scores


def calibrate_threshold(scores: Sequence[float], target_fpr: float = 0.05) -> float:
    """The ceil((1 - target_fpr) * n)-th smallest score (1-indexed)

    At most target_fpr of the calibration scores lie strictly above it.
    """
    scores = np.asarray(scores, dtype=np.float64).ravel()
    if scores.size == 0:
        raise ValueError("calibrate_threshold needs at least one score")
    if not 0.0 < target_fpr < 1.0:
        raise ValueError(f"target_fpr must lie in (0, 1), got {target_fpr}")
    n = scores.size
    # round away representation noise such as 0.95 * 20 = 19.000000000000004
    rank = max(1, math.ceil(round((1.0 - target_fpr) * n, 9)))
    threshold = float(np.sort(scores)[rank - 1])
    fpr = float(np.mean(scores > threshold))
    if fpr > target_fpr + 1e-12:
        raise ValueError(f"Calibration FPR {fpr} exceeds target {target_fpr} at threshold {threshold}")
    logger.info(f"Calibrated threshold {threshold:.6f} on {n} scores (FPR {fpr:.4f})")
    return threshold


@dataclass_json
@dataclass
class JointDetector:
    squeezers: List[Squeezer]
    threshold: float
    model_fingerprint: Optional[str] = None
    target_fpr: float = 0.05
    calibration_size: int = 0
    dataset: Optional[str] = field(default=None)

    def __post_init__(self):
        if not self.squeezers:
            raise ValueError("JointDetector needs at least one squeezer")
        if not self.threshold >= 0:
            raise ValueError(f"Detector threshold must be >= 0, got {self.threshold}")

    def check_model(self, model: Model) -> None:
        """Raise if the detector was calibrated for another model"""
        if self.model_fingerprint and self.model_fingerprint != model.fingerprint:
            raise DetectorModelMismatchError(
                f"Detector calibrated for model {self.model_fingerprint[:12]}..., "
                f"got model {model.fingerprint[:12]}...")


def calibrate_detector(model: Model, images: np.ndarray, squeezers: Sequence[Squeezer],
                       target_fpr: float = 0.05, dataset: Optional[str] = None) -> JointDetector:
    """Calibrate a detector on legitimate images"""
    scores = joint_scores(model, images, squeezers)
    threshold = calibrate_threshold(scores, target_fpr)
    return JointDetector(list(squeezers), threshold, model.fingerprint, target_fpr, len(scores), dataset)


def is_adversarial(det: JointDetector, model: Model, x: np.ndarray) -> Tuple[bool, float]:
    """(joint_score > threshold, joint_score)"""
    score = joint_score(model, x, det.squeezers)
    return score > det.threshold, score


def save_detector(det: JointDetector, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(det.to_json(indent=2) + "\n", encoding='utf-8')
    logger.info(f"Saved detector ({', '.join(s.name for s in det.squeezers)}) to {path}")
    return path


def load_detector(path: Union[str, Path], model: Optional[Model] = None) -> JointDetector:
    """Read a detector document; with a model, also check it was calibrated for that model"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Detector file not found: {path}")
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
        det = JointDetector.from_dict(document)
        det.threshold = float(det.threshold)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DetectorFormatError(f"Malformed detector document {path}: {e}") from e
    if model is not None:
        det.check_model(model)
    return det


def false_positive_rate(det: JointDetector, model: Model, images: np.ndarray) -> float:
    """Fraction of legitimate images the detector flags"""
    if len(images) == 0:
        raise ValueError("false_positive_rate needs at least one image")
    return float(np.mean(joint_scores(model, images, det.squeezers) > det.threshold))
