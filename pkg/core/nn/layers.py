# -*- coding: utf-8 -*-
"""
Layers - Dense, Conv2D, ReLU, Flatten and 2x2 max pooling with exact backprop
All layers work on batches: dense inputs are (N, D), image inputs (N, C, H, W)
"""
from abc import ABC, abstractmethod
from typing import Any, Dict, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

Shape = Tuple[int, ...]
ParamGrads = Dict[str, np.ndarray]


class Layer(ABC):
    """Base class: a pure function of its input plus (optional) weights"""

    kind: str = ""

    @abstractmethod
    def output_shape(self, input_shape: Shape) -> Shape:
        """Per-sample output shape for a per-sample input shape"""

    @abstractmethod
    def forward(self, x: np.ndarray) -> Tuple[np.ndarray, Any]:
        """Return (output, cache needed by backward)"""

    @abstractmethod
    def backward(self, grad_out: np.ndarray, cache: Any, need_params: bool = True) -> Tuple[np.ndarray, ParamGrads]:
        """Return (gradient w.r.t. input, gradients w.r.t. params)"""

    def params(self) -> Dict[str, np.ndarray]:
        """Named weight tensors in serialization order"""
        return {}

    def with_params(self, params: Dict[str, np.ndarray]) -> 'Layer':
        """Copy of the layer carrying new weights"""
        return self


class Dense(Layer):
    """Affine map y = x W^T + b with W of shape (out, in)"""

    kind = "dense"

    def __init__(self, weight: np.ndarray, bias: np.ndarray):
        self.weight = np.ascontiguousarray(weight, dtype=np.float64)
        self.bias = np.ascontiguousarray(bias, dtype=np.float64)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ValueError(f"Dense weight {self.weight.shape} and bias {self.bias.shape} are inconsistent")

    @property
    def in_features(self) -> int:
        return self.weight.shape[1]

    @property
    def out_features(self) -> int:
        return self.weight.shape[0]

    def output_shape(self, input_shape: Shape) -> Shape:
        if tuple(input_shape) != (self.in_features,):
            raise ValueError(f"Dense expects input ({self.in_features},), got {tuple(input_shape)}")
        return (self.out_features,)

    def forward(self, x):
        return x @ self.weight.T + self.bias, x

    def backward(self, grad_out, cache, need_params=True):
        grad_in = grad_out @ self.weight
        if not need_params:
            return grad_in, {}
        return grad_in, {"weight": grad_out.T @ cache, "bias": grad_out.sum(axis=0)}

    def params(self):
        return {"weight": self.weight, "bias": self.bias}

    def with_params(self, params):
        return Dense(params["weight"], params["bias"])


class Conv2D(Layer):
    """Stride-1 cross-correlation with symmetric zero padding"""

    kind = "conv2d"

    def __init__(self, weight: np.ndarray, bias: np.ndarray, padding: int = 0):
        self.weight = np.ascontiguousarray(weight, dtype=np.float64)
        self.bias = np.ascontiguousarray(bias, dtype=np.float64)
        self.padding = int(padding)
        if self.weight.ndim != 4 or self.bias.shape != (self.weight.shape[0],):
            raise ValueError(f"Conv2D weight {self.weight.shape} and bias {self.bias.shape} are inconsistent")
        if self.padding < 0:
            raise ValueError(f"Conv2D padding must be >= 0, got {self.padding}")

    def output_shape(self, input_shape: Shape) -> Shape:
        out_ch, in_ch, kh, kw = self.weight.shape
        if len(input_shape) != 3 or input_shape[0] != in_ch:
            raise ValueError(f"Conv2D expects ({in_ch}, H, W) input, got {tuple(input_shape)}")
        h = input_shape[1] + 2 * self.padding - kh + 1
        w = input_shape[2] + 2 * self.padding - kw + 1
        if h < 1 or w < 1:
            raise ValueError(f"Conv2D kernel {kh}x{kw} does not fit input {tuple(input_shape)}")
        return (out_ch, h, w)

    def _pad(self, x: np.ndarray) -> np.ndarray:
        if self.padding == 0:
            return x
        p = self.padding
        return np.pad(x, ((0, 0), (0, 0), (p, p), (p, p)))

    def forward(self, x):
        kh, kw = self.weight.shape[2:]
        windows = sliding_window_view(self._pad(x), (kh, kw), axis=(2, 3))  # (N, C, Ho, Wo, kh, kw)
        out = np.tensordot(windows, self.weight, axes=([1, 4, 5], [1, 2, 3]))  # (N, Ho, Wo, O)
        out = out.transpose(0, 3, 1, 2) + self.bias[None, :, None, None]
        return np.ascontiguousarray(out), (x.shape, windows)

    def backward(self, grad_out, cache, need_params=True):
        input_shape, windows = cache
        kh, kw = self.weight.shape[2:]
        padded = np.pad(grad_out, ((0, 0), (0, 0), (kh - 1, kh - 1), (kw - 1, kw - 1)))
        grad_windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))  # (N, O, Hp, Wp, kh, kw)
        flipped = self.weight[:, :, ::-1, ::-1]
        grad_padded = np.tensordot(grad_windows, flipped, axes=([1, 4, 5], [0, 2, 3])).transpose(0, 3, 1, 2)
        p = self.padding
        grad_in = np.ascontiguousarray(grad_padded[:, :, p:p + input_shape[2], p:p + input_shape[3]])
        if not need_params:
            return grad_in, {}
        grad_weight = np.tensordot(grad_out, windows, axes=([0, 2, 3], [0, 2, 3]))  # (O, C, kh, kw)
        return grad_in, {"weight": grad_weight, "bias": grad_out.sum(axis=(0, 2, 3))}

    def params(self):
        return {"weight": self.weight, "bias": self.bias}

    def with_params(self, params):
        return Conv2D(params["weight"], params["bias"], self.padding)


class ReLU(Layer):
    """max(x, 0) with derivative 0 at the kink"""

    kind = "relu"

    def output_shape(self, input_shape):
        return tuple(input_shape)

    def forward(self, x):
        mask = x > 0
        return np.where(mask, x, 0.0), mask

    def backward(self, grad_out, cache, need_params=True):
        return np.where(cache, grad_out, 0.0), {}


class Flatten(Layer):
    kind = "flatten"

    def output_shape(self, input_shape):
        return (int(np.prod(input_shape)),)

    def forward(self, x):
        return x.reshape(x.shape[0], -1), x.shape

    def backward(self, grad_out, cache, need_params=True):
        return grad_out.reshape(cache), {}


class MaxPool2x2(Layer):
    """Non-overlapping 2x2 max pooling; odd trailing rows/cols are dropped"""

    kind = "maxpool2x2"

    def output_shape(self, input_shape):
        if len(input_shape) != 3 or input_shape[1] < 2 or input_shape[2] < 2:
            raise ValueError(f"MaxPool2x2 needs (C, H>=2, W>=2) input, got {tuple(input_shape)}")
        return (input_shape[0], input_shape[1] // 2, input_shape[2] // 2)

    def forward(self, x):
        n, c, h, w = x.shape
        ho, wo = h // 2, w // 2
        blocks = (x[:, :, :2 * ho, :2 * wo]
                  .reshape(n, c, ho, 2, wo, 2)
                  .transpose(0, 1, 2, 4, 3, 5)
                  .reshape(n, c, ho, wo, 4))
        # argmax returns the first maximum, which fixes the subgradient at ties
        winners = blocks.argmax(axis=-1)
        out = np.take_along_axis(blocks, winners[..., None], axis=-1)[..., 0]
        return out, (x.shape, winners)

    def backward(self, grad_out, cache, need_params=True):
        input_shape, winners = cache
        n, c, h, w = input_shape
        ho, wo = h // 2, w // 2
        blocks = np.zeros((n, c, ho, wo, 4), dtype=np.float64)
        np.put_along_axis(blocks, winners[..., None], grad_out[..., None], axis=-1)
        grad_in = np.zeros(input_shape, dtype=np.float64)
        grad_in[:, :, :2 * ho, :2 * wo] = (blocks.reshape(n, c, ho, wo, 2, 2)
                                           .transpose(0, 1, 2, 4, 3, 5)
                                           .reshape(n, c, 2 * ho, 2 * wo))
        return grad_in, {}


LAYER_KINDS = {
    Dense.kind: Dense,
    Conv2D.kind: Conv2D,
    ReLU.kind: ReLU,
    Flatten.kind: Flatten,
    MaxPool2x2.kind: MaxPool2x2,
}
