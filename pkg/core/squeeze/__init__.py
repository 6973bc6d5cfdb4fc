# -*- coding: utf-8 -*-
"""
Squeeze Module - Input transformations used by the joint detector
"""
from .filters import bit_depth_reduce, median_smooth, nlm_denoise
from .squeezer import Squeezer, SqueezerKind, apply_squeezer

__all__ = ['bit_depth_reduce', 'median_smooth', 'nlm_denoise', 'Squeezer', 'SqueezerKind', 'apply_squeezer']
