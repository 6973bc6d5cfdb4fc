# -*- coding: utf-8 -*-
"""
Toy Data - Small synthetic datasets for smoke runs and tests
Each class is a fixed random bright/dark pattern plus Gaussian noise, so classes
are linearly separable for modest noise.
"""
from typing import Tuple

import numpy as np

from .dataset import Dataset


def make_toy_dataset(n: int = 200, num_classes: int = 2, image_shape: Tuple[int, int, int] = (1, 8, 8),
                     noise: float = 0.1, seed: int = 0, split: str = "train") -> Dataset:
    """n images with balanced labels, pixel values quantized to the 8-bit grid"""
    rng = np.random.default_rng(seed)
    # patterns depend only on the class count and shape, so train and test splits share them
    pattern_rng = np.random.default_rng([num_classes, *image_shape])
    prototypes = np.where(pattern_rng.random((num_classes, *image_shape)) < 0.5, 0.85, 0.15)
    labels = np.arange(n) % num_classes
    rng.shuffle(labels)
    images = prototypes[labels] + rng.normal(0.0, noise, size=(n, *image_shape))
    images = np.rint(np.clip(images, 0.0, 1.0) * 255.0) / 255.0
    return Dataset(images, labels, split, num_classes)
