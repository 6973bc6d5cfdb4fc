# -*- coding: utf-8 -*-
"""
CIFAR-10 Reader - Binary batches of 3073-byte records (label byte + R, G, B planes)
"""
import logging
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .dataset import CifarLabelError, CifarLengthError, Dataset

logger = logging.getLogger(__name__)

RECORD_BYTES = 3073
IMAGE_SHAPE = (3, 32, 32)
CIFAR_CLASSES = 10


def _load_batch(path: Path) -> tuple:
    if not path.exists():
        raise FileNotFoundError(f"CIFAR-10 batch not found: {path}")
    data = path.read_bytes()
    if len(data) % RECORD_BYTES:
        raise CifarLengthError(f"{path}: {len(data)} bytes is not a multiple of {RECORD_BYTES}")
    records = np.frombuffer(data, dtype=np.uint8).reshape(-1, RECORD_BYTES)
    labels = records[:, 0]
    if len(labels) and labels.max() >= CIFAR_CLASSES:
        bad = int(np.argmax(labels >= CIFAR_CLASSES))
        raise CifarLabelError(f"{path}: record {bad} has label {labels[bad]} > {CIFAR_CLASSES - 1}")
    return records[:, 1:].reshape(-1, *IMAGE_SHAPE), labels


def load_cifar10_bin(batch_paths: Sequence[Union[str, Path]], split: str = "test") -> Dataset:
    """Concatenate one or more binary batches into a dataset of (3, 32, 32) images"""
    if not batch_paths:
        raise ValueError("load_cifar10_bin needs at least one batch file")
    pixels, labels = zip(*(_load_batch(Path(p)) for p in batch_paths))
    images = np.concatenate(pixels).astype(np.float64) / 255.0
    dataset = Dataset(images, np.concatenate(labels).astype(np.int64), split, CIFAR_CLASSES)
    logger.info(f"Loaded {len(dataset)} {split} CIFAR-10 records from {len(batch_paths)} batch file(s)")
    return dataset
