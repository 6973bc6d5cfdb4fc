# -*- coding: utf-8 -*-
"""
Squeeze Filters - Color bit-depth reduction, local median smoothing and non-local means
Image inputs are (C, H, W) float arrays with values in [0, 1]
"""
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

logger = logging.getLogger(__name__)

INTENSITY_SCALE = 255.0


def _as_image(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3 or min(x.shape) < 1:
        raise ValueError(f"Expected a (C, H, W) image, got shape {x.shape}")
    return x


def bit_depth_reduce(x: np.ndarray, bits: int) -> np.ndarray:
    """Quantize to 2**bits levels; ties round half up (half away from zero on [0, 1])"""
    if isinstance(bits, bool) or int(bits) != bits or not 1 <= bits <= 7:
        raise ValueError(f"bits must be an integer in [1, 7], got {bits}")
    levels = 2 ** int(bits) - 1
    x = np.asarray(x, dtype=np.float64)
    return np.floor(x * levels + 0.5) / levels


def median_smooth(x: np.ndarray, window: int = 2) -> np.ndarray:
    """Per-channel rank filter over a window x window neighbourhood

    For even windows the neighbourhood of (i, j) covers rows i..i+window-1 shifted
    up by (window-1)//2, so the 2x2 window is anchored at the top-left pixel.
    The element of rank window**2 // 2 (0-indexed, upper median) is returned and
    the image is reflect-padded at the edges.
    """
    if window < 2:
        raise ValueError(f"median window must be >= 2, got {window}")
    x = _as_image(x)
    before = (window - 1) // 2
    after = window - 1 - before
    padded = np.pad(x, ((0, 0), (before, after), (before, after)), mode='reflect')
    windows = sliding_window_view(padded, (window, window), axis=(1, 2))
    flat = windows.reshape(*x.shape, window * window)
    rank = (window * window) // 2
    return np.partition(flat, rank, axis=-1)[..., rank]


def nlm_denoise(x: np.ndarray, search: int = 13, patch: int = 3, bandwidth: float = 2.0) -> np.ndarray:
    """Non-local means with Gaussian patch weights on a 0-255 intensity scale

    out(p) = sum_q w(p, q) x(q) / sum_q w(p, q), q over in-image pixels of the
    search window centred at p, w = exp(-D2 / bandwidth**2) where D2 is the mean
    squared difference of the reflect-padded patches at p and q, averaged over channels.
    """
    if search % 2 == 0 or patch % 2 == 0 or patch > search:
        raise ValueError(f"search and patch must be odd with patch <= search, got {search}, {patch}")
    if bandwidth <= 0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth}")
    x = _as_image(x)
    _, height, width = x.shape
    half_search, half_patch = search // 2, patch // 2
    h2 = float(bandwidth) ** 2

    scaled = x * INTENSITY_SCALE
    padded = np.pad(scaled, ((0, 0), (half_patch, half_patch), (half_patch, half_patch)), mode='reflect')
    patches = sliding_window_view(padded, (patch, patch), axis=(1, 2))  # (C, H, W, patch, patch)

    numerator = np.zeros_like(x)
    denominator = np.zeros((height, width), dtype=np.float64)
    for dy in range(-half_search, half_search + 1):
        rows = slice(max(0, -dy), min(height, height - dy))
        q_rows = slice(max(0, dy), min(height, height + dy))
        if rows.start >= rows.stop:
            continue
        for dx in range(-half_search, half_search + 1):
            cols = slice(max(0, -dx), min(width, width - dx))
            q_cols = slice(max(0, dx), min(width, width + dx))
            if cols.start >= cols.stop:
                continue
            diff = patches[:, rows, cols] - patches[:, q_rows, q_cols]
            d2 = np.mean(diff * diff, axis=(0, 3, 4))
            weight = np.exp(-d2 / h2)
            numerator[:, rows, cols] += weight * x[:, q_rows, q_cols]
            denominator[rows, cols] += weight
    return numerator / denominator
