# -*- coding: utf-8 -*-
"""
Dataset - Stacked images in [0, 1] with integer labels, plus the dataset format errors
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class DatasetFormatError(ValueError):
    """Base class for malformed dataset files"""


class IdxMagicError(DatasetFormatError):
    pass


class IdxDimensionError(DatasetFormatError):
    pass


class IdxTruncatedError(DatasetFormatError):
    pass


class CifarLengthError(DatasetFormatError):
    pass


class CifarLabelError(DatasetFormatError):
    pass


@dataclass
class Dataset:
    """images: (N, C, H, W) float64 in [0, 1]; labels: (N,) int64"""
    images: np.ndarray
    labels: np.ndarray
    split: str = "test"
    num_classes: int = 10
    source_indices: Optional[np.ndarray] = None

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.ndim != 4:
            raise ValueError(f"Dataset images must be (N, C, H, W), got {self.images.shape}")
        if len(self.images) != len(self.labels):
            raise ValueError(f"Dataset has {len(self.images)} images but {len(self.labels)} labels")
        if self.split not in ("train", "test"):
            raise ValueError(f"Dataset split must be 'train' or 'test', got {self.split!r}")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.num_classes):
            raise ValueError(f"Labels must lie in [0, {self.num_classes})")
        if self.source_indices is None:
            self.source_indices = np.arange(len(self.labels))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def image_shape(self) -> tuple:
        return tuple(self.images.shape[1:])

    def subset(self, indices: Sequence[int]) -> 'Dataset':
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.images[indices], self.labels[indices], self.split,
                       self.num_classes, self.source_indices[indices])
