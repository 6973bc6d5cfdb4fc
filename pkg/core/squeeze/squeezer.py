# -*- coding: utf-8 -*-
"""
Squeezer - Validated squeezer configurations and dispatch to the filters
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from dataclasses_json import dataclass_json

from .filters import bit_depth_reduce, median_smooth, nlm_denoise


class SqueezerKind(Enum):
    BIT_DEPTH = "bit_depth"
    MEDIAN = "median"
    NLM = "nlm"


@dataclass_json
@dataclass(frozen=True)
class Squeezer:
    """One input transformation; only the fields of its kind are set"""
    kind: SqueezerKind
    bits: Optional[int] = None
    window: Optional[int] = None
    search: Optional[int] = None
    patch: Optional[int] = None
    bandwidth: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.kind, SqueezerKind):
            object.__setattr__(self, 'kind', SqueezerKind(self.kind))
        if self.kind is SqueezerKind.BIT_DEPTH:
            if self.bits is None or not 1 <= self.bits <= 7:
                raise ValueError(f"bit_depth squeezer needs bits in [1, 7], got {self.bits}")
        elif self.kind is SqueezerKind.MEDIAN:
            if self.window is None or self.window < 2:
                raise ValueError(f"median squeezer needs window >= 2, got {self.window}")
        else:
            if self.search is None or self.patch is None or self.bandwidth is None:
                raise ValueError("nlm squeezer needs search, patch and bandwidth")
            if self.search % 2 == 0 or self.patch % 2 == 0 or self.patch > self.search:
                raise ValueError(
                    f"nlm search and patch must be odd with patch <= search, got {self.search}, {self.patch}")
            if self.bandwidth <= 0:
                raise ValueError(f"nlm bandwidth must be > 0, got {self.bandwidth}")

    @classmethod
    def bit_depth(cls, bits: int) -> 'Squeezer':
        return cls(SqueezerKind.BIT_DEPTH, bits=bits)

    @classmethod
    def median(cls, window: int = 2) -> 'Squeezer':
        return cls(SqueezerKind.MEDIAN, window=window)

    @classmethod
    def nlm(cls, search: int = 13, patch: int = 3, bandwidth: float = 2.0) -> 'Squeezer':
        return cls(SqueezerKind.NLM, search=search, patch=patch, bandwidth=float(bandwidth))

    @classmethod
    def from_preset(cls, entry: dict) -> 'Squeezer':
        """Build from a config entry such as {"kind": "median", "window": 2}"""
        params = dict(entry)
        kind = SqueezerKind(params.pop("kind"))
        return cls(kind, **params)

    @property
    def name(self) -> str:
        if self.kind is SqueezerKind.BIT_DEPTH:
            return f"bit_depth_{self.bits}"
        if self.kind is SqueezerKind.MEDIAN:
            return f"median_{self.window}x{self.window}"
        return f"nlm_{self.search}_{self.patch}_{self.bandwidth:g}"


def apply_squeezer(s: Squeezer, x: np.ndarray) -> np.ndarray:
    if s.kind is SqueezerKind.BIT_DEPTH:
        return bit_depth_reduce(x, s.bits)
    if s.kind is SqueezerKind.MEDIAN:
        return median_smooth(x, s.window)
    return nlm_denoise(x, s.search, s.patch, s.bandwidth)
