# -*- coding: utf-8 -*-
"""
Model Serialization - Bit-exact binary model files

Layout (all integers unsigned 32-bit little-endian):
    b"NNM1"
    header_length                     byte length of the header block
    header: C, H, W, num_classes, num_layers,
            then per layer: kind_code, field_count, fields...
              dense   (0): out_features, in_features
              conv2d  (1): out_ch, in_ch, kh, kw, padding
              relu    (2), flatten (3), maxpool2x2 (4): no fields
    weights: little-endian float64, row-major, weight then bias per weighted layer
"""
import logging
import struct
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from .layers import Conv2D, Dense, Flatten, Layer, MaxPool2x2, ReLU
from .model import Model

logger = logging.getLogger(__name__)

MAGIC = b"NNM1"

KIND_CODES = {"dense": 0, "conv2d": 1, "relu": 2, "flatten": 3, "maxpool2x2": 4}
CODE_KINDS = {code: kind for kind, code in KIND_CODES.items()}


class ModelFormatError(ValueError):
    """Base class for malformed model files"""


class BadMagicError(ModelFormatError):
    pass


class TruncatedModelError(ModelFormatError):
    pass


class ShapeInconsistencyError(ModelFormatError):
    pass


def _layer_fields(layer: Layer) -> List[int]:
    if isinstance(layer, Dense):
        return [layer.out_features, layer.in_features]
    if isinstance(layer, Conv2D):
        return [*layer.weight.shape, layer.padding]
    return []


def model_to_bytes(model: Model) -> bytes:
    header = [*model.input_shape, model.num_classes, len(model.layers)]
    for layer in model.layers:
        fields = _layer_fields(layer)
        header.extend([KIND_CODES[layer.kind], len(fields), *fields])
    header_bytes = struct.pack(f"<{len(header)}I", *header)

    chunks = [MAGIC, struct.pack("<I", len(header_bytes)), header_bytes]
    for layer in model.layers:
        for tensor in layer.params().values():
            chunks.append(np.ascontiguousarray(tensor, dtype='<f8').tobytes())
    return b"".join(chunks)


class _Reader:
    """Sequential reader that reports truncation instead of short reads"""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, count: int, what: str) -> bytes:
        end = self.offset + count
        if end > len(self.data):
            raise TruncatedModelError(
                f"Model file truncated while reading {what}: need {count} bytes at offset "
                f"{self.offset}, only {len(self.data) - self.offset} left")
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def floats(self, shape: Tuple[int, ...], what: str) -> np.ndarray:
        count = int(np.prod(shape))
        raw = self.take(8 * count, what)
        return np.frombuffer(raw, dtype='<f8').astype(np.float64).reshape(shape)


def _parse_header(header: Tuple[int, ...]) -> Tuple[Tuple[int, int, int], int, List[Tuple[str, List[int]]]]:
    if len(header) < 5:
        raise ShapeInconsistencyError(f"Header too short: {len(header)} fields")
    input_shape = tuple(header[:3])
    num_classes, num_layers = header[3], header[4]
    specs = []
    pos = 5
    for index in range(num_layers):
        if pos + 2 > len(header):
            raise ShapeInconsistencyError(f"Header ends inside layer {index}")
        code, count = header[pos], header[pos + 1]
        if code not in CODE_KINDS:
            raise ShapeInconsistencyError(f"Unknown layer kind code {code} at layer {index}")
        fields = list(header[pos + 2:pos + 2 + count])
        if len(fields) != count:
            raise ShapeInconsistencyError(f"Header ends inside layer {index} fields")
        expected = {"dense": 2, "conv2d": 5}.get(CODE_KINDS[code], 0)
        if count != expected:
            raise ShapeInconsistencyError(
                f"Layer {index} ({CODE_KINDS[code]}) has {count} header fields, expected {expected}")
        specs.append((CODE_KINDS[code], fields))
        pos += 2 + count
    if pos != len(header):
        raise ShapeInconsistencyError(f"Header has {len(header) - pos} unused trailing fields")
    return input_shape, num_classes, specs


def model_from_bytes(data: bytes) -> Model:
    if data[:4] != MAGIC:
        raise BadMagicError(f"Bad model magic {data[:4]!r}, expected {MAGIC!r}")
    reader = _Reader(data)
    reader.take(4, "magic")
    (header_length,) = struct.unpack("<I", reader.take(4, "header length"))
    if header_length % 4:
        raise ShapeInconsistencyError(f"Header length {header_length} is not a multiple of 4")
    header_raw = reader.take(header_length, "header")
    header = struct.unpack(f"<{header_length // 4}I", header_raw)
    input_shape, num_classes, specs = _parse_header(header)

    layers: List[Layer] = []
    for kind, fields in specs:
        if kind == "dense":
            out_f, in_f = fields
            weight = reader.floats((out_f, in_f), "dense weight")
            layers.append(Dense(weight, reader.floats((out_f,), "dense bias")))
        elif kind == "conv2d":
            out_ch, in_ch, kh, kw, padding = fields
            weight = reader.floats((out_ch, in_ch, kh, kw), "conv2d kernel")
            layers.append(Conv2D(weight, reader.floats((out_ch,), "conv2d bias"), padding))
        elif kind == "relu":
            layers.append(ReLU())
        elif kind == "flatten":
            layers.append(Flatten())
        else:
            layers.append(MaxPool2x2())

    if reader.offset != len(data):
        raise ShapeInconsistencyError(
            f"{len(data) - reader.offset} unexpected bytes after the weight section")
    try:
        return Model(layers, input_shape, num_classes)
    except ValueError as e:
        raise ShapeInconsistencyError(f"Layer shapes in model file do not compose: {e}") from e


def save_model(model: Model, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(model_to_bytes(model))
    logger.info(f"Saved model ({len(model.layers)} layers) to {path}")
    return path


def load_model(path: Union[str, Path]) -> Model:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model file not found: {path}")
    model = model_from_bytes(path.read_bytes())
    logger.info(f"Loaded model from {path}: input {model.input_shape}, {model.num_classes} classes")
    return model
