# -*- coding: utf-8 -*-
import logging
import re

import numpy as np
import pytest

from controller import ConfigurationError, ExperimentConfig, ExperimentController
from controller.experiment_config import config_from_mapping, load_experiment_config
from controller.experiment_controller import preset_squeezers, run_experiment
from core.data_transform import outcomes_path_for, read_csv, read_outcomes, recount_rows
from core.detect import calibrate_detector
from core.nn import build_model
from tests.conftest import small_conv_model


@pytest.fixture(scope="module")
def toy_detector(toy_model, toy_train):
    return calibrate_detector(toy_model, toy_train.images[:100], preset_squeezers("mnist"), 0.05, "mnist")


def make_config(tmp_path, name="sweep.csv", **overrides):
    values = dict(dataset="mnist", attack="ifgsm", strength_grid=[0.0, 0.6], sample_size=6,
                  output_path=str(tmp_path / name), max_workers=1, ifgsm_steps=5)
    values.update(overrides)
    return ExperimentConfig(**values)


# ----------------------------------------------------------------------
# configuration
# ----------------------------------------------------------------------

def test_config_from_mapping_parses_values():
    config = config_from_mapping({
        "DATASET": "mnist", "ATTACK": "ead", "TARGET_MODE": "least_likely",
        "STRENGTH_GRID": "10, 20,40", "SAMPLE_SIZE": "25", "ABORT_EARLY": "yes", "BETA": "",
    })
    assert config.strength_grid == [10.0, 20.0, 40.0]
    assert config.sample_size == 25 and config.abort_early
    assert config.beta == 0.01
    assert config.strength_name == "kappa"
    assert config.output_path.endswith("mnist_ead_least_likely.csv")


def test_config_defaults_follow_dataset_and_attack():
    assert ExperimentConfig("mnist", attack="ifgsm").strength_grid[0] == 0.3
    assert ExperimentConfig("mnist", attack="ead").strength_grid == [10.0, 20.0, 30.0, 40.0]
    assert ExperimentConfig("cifar10", attack="ead").beta == 0.001
    assert ExperimentConfig("mnist", attack="cw").beta == 0.0
    assert ExperimentConfig("mnist", attack="fgsm").strength_name == "epsilon"


@pytest.mark.parametrize("values, message", [
    ({"ATTACK": "ead"}, "DATASET is required"),
    ({"DATASET": "svhn"}, "DATASET"),
    ({"DATASET": "mnist", "ATTACK": "deepfool"}, "ATTACK"),
    ({"DATASET": "mnist", "TARGET_MODE": "random"}, "TARGET_MODE"),
    ({"DATASET": "mnist", "STRENGTH_GRID": "20,10"}, "strictly increasing"),
    ({"DATASET": "mnist", "STRENGTH_GRID": "10,10"}, "strictly increasing"),
    ({"DATASET": "mnist", "STRENGTH_GRID": "-1,10"}, ">= 0"),
    ({"DATASET": "mnist", "ATTACK": "ead", "BETA": "0"}, "BETA"),
    ({"DATASET": "mnist", "ATTACK": "cw", "BETA": "0.01"}, "BETA"),
    ({"DATASET": "mnist", "SAMPLE_SIZE": "many"}, "SAMPLE_SIZE"),
    ({"DATASET": "mnist", "SAMPLE_SIZE": "0"}, "SAMPLE_SIZE"),
    ({"DATASET": "mnist", "TARGET_FPR": "1.5"}, "TARGET_FPR"),
    ({"DATASET": "mnist", "LR_SCHEDULE": "cosine"}, "LR_SCHEDULE"),
    ({"DATASET": "mnist", "ABORT_EARLY": "maybe"}, "ABORT_EARLY"),
    ({"DATASET": "mnist", "EPSILON": "0.3"}, "Unknown config keys: EPSILON"),
])
def test_config_errors(values, message):
    with pytest.raises(ConfigurationError, match=message):
        config_from_mapping(values)


def test_load_experiment_config_resolves_relative_paths(tmp_path):
    path = tmp_path / "experiments" / "ead.cfg"
    path.parent.mkdir()
    path.write_text(
        "# desk-scale sweep\n"
        "DATASET=mnist\n"
        "ATTACK=ead\n"
        "STRENGTH_GRID=10,40\n"
        "MODEL_PATH=models/mnist.nnm\n"
        "TEST_IMAGES=data/t10k-images-idx3-ubyte.gz\n"
    )
    config = load_experiment_config(path)
    assert config.strength_grid == [10.0, 40.0]
    assert config.model_path == str(path.parent / "models" / "mnist.nnm")
    assert config.test_images == str(path.parent / "data" / "t10k-images-idx3-ubyte.gz")

    with pytest.raises(FileNotFoundError, match="config not found"):
        load_experiment_config(tmp_path / "absent.cfg")


def test_require_data_paths(tmp_path):
    config = ExperimentConfig("mnist")
    with pytest.raises(ConfigurationError, match="TEST_IMAGES and TEST_LABELS"):
        config.require_data_paths("test")
    config = ExperimentConfig("mnist", train_images=str(tmp_path / "x"), train_labels=str(tmp_path / "y"))
    with pytest.raises(ConfigurationError, match="not found"):
        config.require_data_paths("train")
    with pytest.raises(ConfigurationError, match="CIFAR_TEST_BATCH"):
        ExperimentConfig("cifar10").require_data_paths("test")


# ----------------------------------------------------------------------
# prepare
# ----------------------------------------------------------------------

def test_prepare_rejects_missing_model(tmp_path):
    config = make_config(tmp_path, model_path=str(tmp_path / "absent.nnm"))
    with pytest.raises(ConfigurationError, match="MODEL_PATH"):
        ExperimentController(config).prepare()


def test_prepare_rejects_shape_mismatch(tmp_path, toy_test):
    controller = ExperimentController(make_config(tmp_path), model=small_conv_model(), test_set=toy_test)
    with pytest.raises(ConfigurationError, match="inputs"):
        controller.prepare()


def test_prepare_rejects_detector_of_another_model(tmp_path, toy_test, toy_detector):
    other = build_model("mlp", toy_test.image_shape, toy_test.num_classes, seed=99)
    controller = ExperimentController(make_config(tmp_path), model=other, test_set=toy_test, detector=toy_detector)
    with pytest.raises(ConfigurationError, match="Detector calibrated"):
        controller.prepare()


def test_prepare_rejects_oversized_sample(tmp_path, toy_model, toy_test, toy_detector):
    config = make_config(tmp_path, sample_size=len(toy_test) + 1)
    controller = ExperimentController(config, model=toy_model, test_set=toy_test, detector=toy_detector)
    with pytest.raises(ConfigurationError, match="correctly classified"):
        controller.prepare()


def test_prepare_calibrates_when_no_detector_is_given(tmp_path, toy_model, toy_train, toy_test):
    config = make_config(tmp_path, calibration_size=50)
    controller = ExperimentController(config, model=toy_model, test_set=toy_test, train_set=toy_train)
    controller.prepare()
    assert controller.detector.calibration_size == 50
    assert [s.name for s in controller.detector.squeezers] == ["bit_depth_1", "median_2x2"]
    assert len(controller.eval_set) == 6


# ----------------------------------------------------------------------
# sweeps
# ----------------------------------------------------------------------

def test_unreachable_confidence_gives_zero_asr(tmp_path, toy_model, toy_test, toy_detector):
    config = make_config(tmp_path, attack="ead", strength_grid=[1e6], iterations=5, binary_search_steps=1,
                         sample_size=3)
    rows = run_experiment(config, model=toy_model, test_set=toy_test, detector=toy_detector)
    assert len(rows) == 1
    row = rows[0]
    assert row.asr == 0.0 and row.n_success == 0 and row.n_total == 3
    assert row.mean_l1 is None and row.mean_l2 is None and row.mean_linf is None
    assert read_csv(config.output_path) == rows


def test_zero_epsilon_never_fools_correct_samples(tmp_path, toy_model, toy_test, toy_detector):
    config = make_config(tmp_path, attack="fgsm", strength_grid=[0.0])
    controller = ExperimentController(config, model=toy_model, test_set=toy_test, detector=toy_detector)
    rows = controller.run_experiment()
    assert rows[0].asr == 0.0
    assert all(not r.model_fooled and r.l1 == 0.0 for r in controller.records)


def test_sweep_is_deterministic_across_worker_counts(tmp_path, toy_model, toy_test, toy_detector):
    serial = make_config(tmp_path, name="serial.csv", max_workers=1)
    parallel = make_config(tmp_path, name="parallel.csv", max_workers=3)
    again = make_config(tmp_path, name="again.csv", max_workers=1)
    for config in (serial, parallel, again):
        run_experiment(config, model=toy_model, test_set=toy_test, detector=toy_detector)

    expected = (tmp_path / "serial.csv").read_bytes()
    assert (tmp_path / "parallel.csv").read_bytes() == expected
    assert (tmp_path / "again.csv").read_bytes() == expected
    assert outcomes_path_for(tmp_path / "parallel.csv").read_bytes() == \
        outcomes_path_for(tmp_path / "serial.csv").read_bytes()


def test_asr_matches_recount_of_stored_outcomes(tmp_path, toy_model, toy_test, toy_detector):
    config = make_config(tmp_path, strength_grid=[0.1, 0.3, 0.6], target_mode="next")
    controller = ExperimentController(config, model=toy_model, test_set=toy_test, detector=toy_detector)
    rows = controller.run_experiment()

    stored = read_outcomes(outcomes_path_for(config.output_path))
    assert len(stored) == 3 * config.sample_size
    recount = recount_rows(stored)
    assert [(r.strength, r.asr, r.n_success) for r in recount] == [(r.strength, r.asr, r.n_success) for r in rows]
    for row in rows:
        points = [r for r in stored if r.strength == row.strength]
        assert row.asr == 100.0 * sum(r.model_fooled and r.detector_bypassed for r in points) / len(points)
        assert all(r.linf <= row.strength + 1e-12 for r in points)
        assert all(r.target == (r.true_label + 1) % 2 for r in points)


@pytest.mark.parametrize("attack", ["fgsm", "ifgsm"])
def test_stored_gradient_sign_outcomes_stay_in_epsilon_ball(tmp_path, toy_model, toy_test, toy_detector, attack):
    config = make_config(tmp_path, attack=attack, strength_grid=[0.05, 0.2, 0.6])
    run_experiment(config, model=toy_model, test_set=toy_test, detector=toy_detector)
    stored = read_outcomes(outcomes_path_for(config.output_path))
    assert len(stored) == 3 * config.sample_size
    assert {r.attack for r in stored} == {attack}
    for record in stored:
        assert 0.0 <= record.linf <= record.strength + 1e-12
        assert record.final_c is None


def test_progress_summary_after_sweep(tmp_path, toy_model, toy_test, toy_detector, caplog):
    controller = ExperimentController(make_config(tmp_path), model=toy_model, test_set=toy_test,
                                      detector=toy_detector)
    with caplog.at_level(logging.INFO, logger="controller.experiment_controller"):
        controller.run_experiment()
    assert re.search(r"ifgsm_epsilon=0.6: ASR [0-9.]+% \(\d+/6\) in [0-9.]+s", caplog.text)
    summary = controller.get_progress_summary()
    assert summary["total_tasks"] == 2 and summary["completed"] == 2
    assert summary["overall_progress"] == pytest.approx(100.0)
    assert not summary["pipeline_running"]


def test_sampled_images_are_correctly_classified(tmp_path, toy_model, toy_test, toy_detector):
    controller = ExperimentController(make_config(tmp_path), model=toy_model, test_set=toy_test,
                                      detector=toy_detector)
    controller.prepare()
    predicted = np.argmax(toy_model.logits_batch(controller.eval_set.images), axis=1)
    assert np.array_equal(predicted, controller.eval_set.labels)
