# -*- coding: utf-8 -*-
"""
Data Module - MNIST IDX and CIFAR-10 binary loaders, samplers and toy data
"""
from .cifar_reader import load_cifar10_bin
from .dataset import (
    CifarLabelError, CifarLengthError, Dataset, DatasetFormatError,
    IdxDimensionError, IdxMagicError, IdxTruncatedError,
)
from .idx_reader import load_mnist_idx, to_bytes, write_mnist_idx
from .sampler import sample_calibration_set, sample_eval_set
from .toy import make_toy_dataset

__all__ = [
    'Dataset', 'DatasetFormatError', 'IdxMagicError', 'IdxDimensionError', 'IdxTruncatedError',
    'CifarLengthError', 'CifarLabelError',
    'load_mnist_idx', 'write_mnist_idx', 'to_bytes', 'load_cifar10_bin',
    'sample_eval_set', 'sample_calibration_set', 'make_toy_dataset',
]
