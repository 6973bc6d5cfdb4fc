# -*- coding: utf-8 -*-
"""
Tensor Ops - Elementwise arithmetic, norms and box / L-infinity clipping
Tensors are C-contiguous float64 numpy arrays; every op returns a new array
"""
from typing import Literal, Tuple

import numpy as np
import numpy.typing as npt

Tensor = npt.NDArray[np.float64]


class ShapeMismatchError(ValueError):
    """Two tensors that must share a shape do not"""

    def __init__(self, shape_a: Tuple[int, ...], shape_b: Tuple[int, ...], context: str = ""):
        prefix = f"{context}: " if context else ""
        super().__init__(f"{prefix}shape mismatch {tuple(shape_a)} vs {tuple(shape_b)}")
        self.shape_a = tuple(shape_a)
        self.shape_b = tuple(shape_b)


def as_tensor(values) -> Tensor:
    """Copy values into a fresh row-major float64 array"""
    return np.array(values, dtype=np.float64, order='C', copy=True)


def _check_same_shape(a: np.ndarray, b: np.ndarray, context: str) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(a.shape, b.shape, context)


_ELEMENTWISE_OPS = {
    'add': np.add,
    'sub': np.subtract,
    'mul': np.multiply,
}


def elementwise(a: Tensor, b: Tensor, op: Literal['add', 'sub', 'mul']) -> Tensor:
    """Apply op componentwise to two equal-shape tensors"""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_same_shape(a, b, f"elementwise {op}")
    try:
        ufunc = _ELEMENTWISE_OPS[op]
    except KeyError:
        raise ValueError(f"Unknown elementwise op: {op!r}") from None
    return ufunc(a, b)


def add(a: Tensor, b: Tensor) -> Tensor:
    return elementwise(a, b, 'add')


def sub(a: Tensor, b: Tensor) -> Tensor:
    return elementwise(a, b, 'sub')


def mul(a: Tensor, b: Tensor) -> Tensor:
    return elementwise(a, b, 'mul')


def norms(d: Tensor) -> Tuple[float, float, float]:
    """Return (L1, L2, Linf) of a tensor; all zero for an empty tensor"""
    flat = np.abs(np.asarray(d, dtype=np.float64)).ravel()
    if flat.size == 0:
        return 0.0, 0.0, 0.0
    return float(flat.sum()), float(np.sqrt(np.dot(flat, flat))), float(flat.max())


def clip_box(x: Tensor, lo: float, hi: float) -> Tensor:
    """Clip every value into [lo, hi]"""
    if lo > hi:
        raise ValueError(f"clip_box bounds inverted: lo={lo} > hi={hi}")
    return np.clip(np.asarray(x, dtype=np.float64), lo, hi)


def clip_linf_ball(x: Tensor, center: Tensor, eps: float) -> Tensor:
    """Project x into the L-infinity ball of radius eps around center"""
    x = np.asarray(x, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    _check_same_shape(x, center, "clip_linf_ball")
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    return np.minimum(center + eps, np.maximum(center - eps, x))
