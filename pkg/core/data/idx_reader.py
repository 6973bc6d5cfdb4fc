# -*- coding: utf-8 -*-
"""
IDX Reader - MNIST IDX image/label files (big-endian headers, unsigned byte payload)
Files ending in .gz are decompressed transparently
"""
import gzip
import logging
import struct
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from .dataset import Dataset, IdxDimensionError, IdxMagicError, IdxTruncatedError

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801
MNIST_CLASSES = 10

PathLike = Union[str, Path]


def _read_bytes(path: PathLike) -> bytes:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"IDX file not found: {path}")
    data = path.read_bytes()
    return gzip.decompress(data) if path.suffix == ".gz" else data


def _parse_idx(data: bytes, expected_magic: int, path: PathLike) -> Tuple[Tuple[int, ...], np.ndarray]:
    if len(data) < 4:
        raise IdxTruncatedError(f"{path}: file too short for an IDX header")
    (magic,) = struct.unpack(">I", data[:4])
    if magic != expected_magic:
        raise IdxMagicError(f"{path}: magic 0x{magic:08x}, expected 0x{expected_magic:08x}")
    ndim = expected_magic & 0xFF
    header_end = 4 + 4 * ndim
    if len(data) < header_end:
        raise IdxTruncatedError(f"{path}: header truncated")
    dims = struct.unpack(f">{ndim}I", data[4:header_end])
    expected = int(np.prod(dims))
    payload = len(data) - header_end
    if payload < expected:
        raise IdxTruncatedError(f"{path}: {payload} payload bytes, dimensions {dims} need {expected}")
    if payload > expected:
        raise IdxDimensionError(f"{path}: {payload - expected} bytes beyond dimensions {dims}")
    return dims, np.frombuffer(data, dtype=np.uint8, offset=header_end).reshape(dims)


def load_mnist_idx(images_path: PathLike, labels_path: PathLike, split: str = "test") -> Dataset:
    """Parse an IDX image/label file pair into (N, 1, rows, cols) images scaled by 1/255"""
    (count, rows, cols), pixels = _parse_idx(_read_bytes(images_path), IMAGES_MAGIC, images_path)
    (label_count,), labels = _parse_idx(_read_bytes(labels_path), LABELS_MAGIC, labels_path)
    if count != label_count:
        raise IdxDimensionError(f"{count} images in {images_path} but {label_count} labels in {labels_path}")
    if label_count and labels.max() >= MNIST_CLASSES:
        raise IdxDimensionError(f"{labels_path}: label {labels.max()} outside [0, {MNIST_CLASSES})")

    images = pixels.reshape(count, 1, rows, cols).astype(np.float64) / 255.0
    logger.info(f"Loaded {count} {split} images of {rows}x{cols} from {images_path}")
    return Dataset(images, labels.astype(np.int64), split, MNIST_CLASSES)


def to_bytes(images: np.ndarray) -> np.ndarray:
    """Inverse of the 1/255 pixel scaling"""
    return np.rint(np.asarray(images) * 255.0).astype(np.uint8)


def write_mnist_idx(dataset: Dataset, images_path: PathLike, labels_path: PathLike) -> None:
    """Write single-channel images and labels as an IDX file pair"""
    n, channels, rows, cols = dataset.images.shape
    if channels != 1:
        raise ValueError(f"IDX images must be single-channel, got {channels} channels")
    for path, magic, dims, payload in (
        (images_path, IMAGES_MAGIC, (n, rows, cols), to_bytes(dataset.images)),
        (labels_path, LABELS_MAGIC, (n,), dataset.labels.astype(np.uint8)),
    ):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = struct.pack(f">I{len(dims)}I", magic, *dims)
        data = header + payload.tobytes()
        path.write_bytes(gzip.compress(data) if path.suffix == ".gz" else data)
    logger.info(f"Wrote {n} images to {images_path}")
