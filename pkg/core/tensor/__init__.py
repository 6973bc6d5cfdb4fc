# -*- coding: utf-8 -*-
"""
Tensor Module - Dense float64 arrays and the elementwise, norm and clipping ops
"""

from .ops import (
    Tensor,
    ShapeMismatchError,
    as_tensor,
    elementwise,
    add,
    sub,
    mul,
    norms,
    clip_box,
    clip_linf_ball,
)

__all__ = [
    'Tensor', 'ShapeMismatchError', 'as_tensor',
    'elementwise', 'add', 'sub', 'mul',
    'norms', 'clip_box', 'clip_linf_ball',
]
