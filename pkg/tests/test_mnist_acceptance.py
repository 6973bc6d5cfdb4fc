# -*- coding: utf-8 -*-
"""
Desk-scale MNIST checks; run with SQUEEZE_MNIST_DIR pointing at the four IDX files
(train-images-idx3-ubyte[.gz], train-labels-idx1-ubyte[.gz], t10k-images-idx3-ubyte[.gz],
t10k-labels-idx1-ubyte[.gz]). A trained mnist.nnm in the same directory is reused.
"""
import os
from pathlib import Path

import numpy as np
import pytest

from controller import ExperimentConfig, ExperimentController
from controller.experiment_controller import preset_squeezers
from core.data import load_mnist_idx, sample_calibration_set
from core.detect import calibrate_detector, false_positive_rate
from core.nn import TrainConfig, accuracy, build_model, load_model, predict_labels, save_model, train
from tests.conftest import MNIST_DIR_ENV

pytestmark = pytest.mark.slow

KAPPAS = [10.0, 20.0, 30.0, 40.0]
EPSILONS = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


def _idx(directory: Path, stem: str) -> Path:
    plain = directory / stem
    return plain if plain.exists() else directory / f"{stem}.gz"


@pytest.fixture(scope="module")
def mnist():
    directory = Path(os.environ[MNIST_DIR_ENV])
    train_set = load_mnist_idx(_idx(directory, "train-images-idx3-ubyte"),
                               _idx(directory, "train-labels-idx1-ubyte"), "train")
    test_set = load_mnist_idx(_idx(directory, "t10k-images-idx3-ubyte"),
                              _idx(directory, "t10k-labels-idx1-ubyte"), "test")
    cached = directory / "mnist.nnm"
    if cached.exists():
        model = load_model(cached)
    else:
        model = train(build_model("mnist", train_set.image_shape, 10, seed=1234), train_set,
                      TrainConfig(), test_set)
        save_model(model, cached)
    return model, train_set, test_set


@pytest.fixture(scope="module")
def detector(mnist):
    model, train_set, _ = mnist
    calibration = sample_calibration_set(train_set, model, 1000, seed=2018)
    return calibrate_detector(model, calibration.images, preset_squeezers("mnist"), 0.05, "mnist")


def _sweep(tmp_path, mnist, detector, name, **overrides):
    model, _, test_set = mnist
    config = ExperimentConfig(dataset="mnist", output_path=str(tmp_path / name), sample_size=100, **overrides)
    return ExperimentController(config, model=model, test_set=test_set, detector=detector).run_experiment()


def _non_decreasing(values, tolerance):
    return all(b >= a - tolerance for a, b in zip(values, values[1:]))


def test_stand_in_model_accuracy(mnist):
    model, _, test_set = mnist
    assert accuracy(model, test_set.images, test_set.labels) >= 0.97


def test_detector_false_positive_rates(mnist, detector):
    model, train_set, test_set = mnist
    calibration = sample_calibration_set(train_set, model, 1000, seed=2018)
    assert false_positive_rate(detector, model, calibration.images) <= 0.05

    correct = np.flatnonzero(predict_labels(model, test_set.images) == test_set.labels)
    held_out = test_set.images[np.random.default_rng(7).choice(correct, 1000, replace=False)]
    assert false_positive_rate(detector, model, held_out) <= 0.10


@pytest.fixture(scope="module")
def ead_rows(tmp_path_factory, mnist, detector):
    directory = tmp_path_factory.mktemp("ead")
    rows = _sweep(directory, mnist, detector, "ead.csv", attack="ead", strength_grid=KAPPAS)
    return directory, rows


def test_ead_confidence_trend(ead_rows):
    _, rows = ead_rows
    asr = [r.asr for r in rows]
    assert _non_decreasing(asr, 5.0)
    assert asr[0] <= 60.0 and asr[-1] >= 85.0
    for name in ("mean_l1", "mean_l2", "mean_linf"):
        means = [getattr(r, name) for r in rows if getattr(r, name) is not None]
        assert all(b >= 0.95 * a for a, b in zip(means, means[1:]))


def test_ead_sweep_is_reproducible(tmp_path, ead_rows, mnist, detector):
    directory, _ = ead_rows
    _sweep(tmp_path, mnist, detector, "ead.csv", attack="ead", strength_grid=KAPPAS)
    assert (tmp_path / "ead.csv").read_bytes() == (directory / "ead.csv").read_bytes()


def test_ead_not_worse_than_cw(tmp_path, ead_rows, mnist, detector):
    _, ead = ead_rows
    cw = _sweep(tmp_path, mnist, detector, "cw.csv", attack="cw", strength_grid=KAPPAS)
    for ead_row, cw_row in zip(ead, cw):
        assert ead_row.asr >= cw_row.asr - 5.0


def test_ifgsm_strength_trend(tmp_path, mnist, detector):
    rows = _sweep(tmp_path, mnist, detector, "ifgsm.csv", attack="ifgsm", strength_grid=EPSILONS)
    asr = [r.asr for r in rows]
    assert _non_decreasing(asr, 5.0)
    assert asr[EPSILONS.index(0.9)] >= 90.0
