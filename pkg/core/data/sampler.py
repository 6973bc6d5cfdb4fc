# -*- coding: utf-8 -*-
"""
Sampler - Seeded samples of correctly classified images
"""
import logging

import numpy as np

from core.nn import Model, predict_labels
from .dataset import Dataset

logger = logging.getLogger(__name__)


def _sample_correct(dataset: Dataset, model: Model, n: int, seed: int) -> Dataset:
    if n < 1:
        raise ValueError(f"Sample size must be >= 1, got {n}")
    correct = np.flatnonzero(predict_labels(model, dataset.images) == dataset.labels)
    if len(correct) < n:
        raise ValueError(
            f"Only {len(correct)} correctly classified {dataset.split} images, need {n}")
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(correct, size=n, replace=False))
    logger.info(f"Sampled {n} of {len(correct)} correctly classified {dataset.split} images (seed {seed})")
    return dataset.subset(chosen)


def sample_eval_set(dataset: Dataset, model: Model, n: int = 100, seed: int = 2018) -> Dataset:
    """Uniform sample without replacement of correctly classified test images"""
    return _sample_correct(dataset, model, n, seed)


def sample_calibration_set(dataset: Dataset, model: Model, n: int = 1000, seed: int = 2018) -> Dataset:
    """Legitimate images for threshold calibration, drawn from the training split"""
    if dataset.split != "train":
        raise ValueError(f"Calibration images must come from the train split, got {dataset.split!r}")
    return _sample_correct(dataset, model, n, seed)
