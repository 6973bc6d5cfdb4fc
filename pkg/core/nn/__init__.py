# -*- coding: utf-8 -*-
"""
Neural Network Module - Layers, losses, models, training and model files
"""
from .layers import Conv2D, Dense, Flatten, Layer, MaxPool2x2, ReLU
from .losses import LossKind, LossMode, LossSpec, loss_from_logits, raw_margin, softmax
from .model import (
    Model, forward, input_gradient, loss_and_input_gradient, loss_value,
    param_gradients, predict_labels, predict_probs,
)
from .serialization import (
    BadMagicError, ModelFormatError, ShapeInconsistencyError, TruncatedModelError,
    load_model, model_from_bytes, model_to_bytes, save_model,
)
from .architectures import ARCHITECTURES, build_model
from .trainer import TrainConfig, accuracy, train

__all__ = [
    'Layer', 'Dense', 'Conv2D', 'ReLU', 'Flatten', 'MaxPool2x2',
    'LossKind', 'LossMode', 'LossSpec', 'loss_from_logits', 'raw_margin', 'softmax',
    'Model', 'forward', 'input_gradient', 'loss_and_input_gradient', 'loss_value',
    'param_gradients', 'predict_labels', 'predict_probs',
    'ModelFormatError', 'BadMagicError', 'TruncatedModelError', 'ShapeInconsistencyError',
    'save_model', 'load_model', 'model_to_bytes', 'model_from_bytes',
    'ARCHITECTURES', 'build_model',
    'TrainConfig', 'accuracy', 'train',
]
