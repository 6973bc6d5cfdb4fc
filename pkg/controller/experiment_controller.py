# -*- coding: utf-8 -*-
"""
Experiment Controller - Strength sweeps of one attack against the joint detector

For every strength value each sampled image is attacked; a sample succeeds when
it fools the model AND the joint detector does not flag it.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from config import DETECTOR_PRESETS
from core.attack import (
    AttackOutcome, CwEadConfig, FgsmConfig, cw_ead_attack, fgsm, ifgsm, select_target,
)
from core.data import Dataset, load_cifar10_bin, load_mnist_idx, sample_calibration_set, sample_eval_set
from core.data_transform import OutcomeRecord, ReportRow, aggregate, outcomes_path_for, write_csv, write_outcomes
from core.detect import DetectorModelMismatchError, JointDetector, calibrate_detector, is_adversarial, load_detector
from core.nn import Model, load_model, predict_probs
from core.progress.tracker import ProgressTracker, TaskTracker
from core.squeeze import Squeezer
from utils.logging_helpers import get_logger, log_operation
from utils.performance_monitor import monitor

from .experiment_config import ConfigurationError, ExperimentConfig
from .interfaces import IExperimentRunner

logger = get_logger(__name__)


def load_split(config: ExperimentConfig, split: str) -> Dataset:
    """Load the configured train or test data"""
    config.require_data_paths(split)
    if config.dataset == "mnist":
        if split == "train":
            return load_mnist_idx(config.train_images, config.train_labels, "train")
        return load_mnist_idx(config.test_images, config.test_labels, "test")
    if split == "train":
        return load_cifar10_bin(config.cifar_train_batches, "train")
    return load_cifar10_bin([config.cifar_test_batch], "test")


def preset_squeezers(dataset: str) -> List[Squeezer]:
    return [Squeezer.from_preset(entry) for entry in DETECTOR_PRESETS[dataset]]


@monitor.measure_time(function_name="controller.calibrate", sla_category="calibration")
def calibrate_for(config: ExperimentConfig, model: Model, train_set: Dataset) -> JointDetector:
    """Calibrate the dataset's preset detector on correctly classified training images"""
    with log_operation("calibration"):
        calibration = sample_calibration_set(train_set, model, config.calibration_size, config.seed)
        return calibrate_detector(model, calibration.images, preset_squeezers(config.dataset),
                                  config.target_fpr, config.dataset)


class ExperimentController(IExperimentRunner):
    """Runs one ExperimentConfig; model, data and detector may be injected instead of loaded"""

    def __init__(self, config: ExperimentConfig, model: Optional[Model] = None,
                 test_set: Optional[Dataset] = None, detector: Optional[JointDetector] = None,
                 train_set: Optional[Dataset] = None):
        self.config = config
        self.model = model
        self.test_set = test_set
        self.detector = detector
        self.train_set = train_set
        self.eval_set: Optional[Dataset] = None
        self.records: List[OutcomeRecord] = []
        self.progress_tracker = ProgressTracker()

    # ------------------------------------------------------------------
    # setup
    # ------------------------------------------------------------------

    def prepare(self) -> None:
        """Everything that can fail for configuration reasons happens here, before any attack"""
        config = self.config
        if self.model is None:
            if not config.model_path or not Path(config.model_path).exists():
                raise ConfigurationError(f"MODEL_PATH not found: {config.model_path!r}")
            self.model = load_model(config.model_path)
        if self.test_set is None:
            self.test_set = load_split(config, "test")
        if self.test_set.image_shape != self.model.input_shape:
            raise ConfigurationError(
                f"Model expects {self.model.input_shape} inputs, dataset has {self.test_set.image_shape}")

        if self.detector is None:
            if config.detector_path:
                try:
                    self.detector = load_detector(config.detector_path, self.model)
                except DetectorModelMismatchError as e:
                    raise ConfigurationError(str(e)) from e
            else:
                if self.train_set is None:
                    self.train_set = load_split(config, "train")
                self.detector = calibrate_for(config, self.model, self.train_set)
        else:
            try:
                self.detector.check_model(self.model)
            except DetectorModelMismatchError as e:
                raise ConfigurationError(str(e)) from e

        try:
            self.eval_set = sample_eval_set(self.test_set, self.model, config.sample_size, config.seed)
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
        logger.info(f"Prepared {config.attack} sweep over {config.strength_name} {config.strength_grid} "
                    f"on {len(self.eval_set)} images, detector threshold {self.detector.threshold:.6f}")

    # ------------------------------------------------------------------
    # attacks
    # ------------------------------------------------------------------

    def _attack(self, x0: np.ndarray, label: int, strength: float) -> tuple:
        config = self.config
        spec = select_target(predict_probs(self.model, x0), label, config.target_mode)
        if config.attack == "fgsm":
            outcome = fgsm(self.model, x0, spec, FgsmConfig(strength, steps=1))
        elif config.attack == "ifgsm":
            outcome = ifgsm(self.model, x0, spec, FgsmConfig(strength, config.ifgsm_steps))
        else:
            cfg = CwEadConfig(kappa=strength, beta=config.beta,
                              binary_search_steps=config.binary_search_steps, iterations=config.iterations,
                              lr_schedule=config.lr_schedule, abort_early=config.abort_early)
            outcome = cw_ead_attack(self.model, x0, spec, cfg)
        return spec, outcome

    def attack_sample(self, sample_index: int, strength: float) -> OutcomeRecord:
        """Attack one sampled image and score the result with the detector"""
        x0 = self.eval_set.images[sample_index]
        label = int(self.eval_set.labels[sample_index])
        spec, outcome = self._attack(x0, label, strength)
        flagged, score = is_adversarial(self.detector, self.model, outcome.adversarial)
        outcome.detector_bypassed = not flagged
        outcome.detector_score = score
        return self._to_record(sample_index, strength, spec, outcome)

    def _to_record(self, sample_index: int, strength: float, spec, outcome: AttackOutcome) -> OutcomeRecord:
        l1, l2, linf = outcome.distortion
        return OutcomeRecord(
            attack=self.config.attack,
            target_mode=self.config.target_mode,
            strength=float(strength),
            sample_index=int(sample_index),
            source_index=int(self.eval_set.source_indices[sample_index]),
            true_label=spec.true_label,
            target=spec.resolved_target,
            predicted_label=outcome.predicted_label,
            model_fooled=bool(outcome.model_fooled),
            detector_bypassed=bool(outcome.detector_bypassed),
            detector_score=float(outcome.detector_score),
            l1=float(l1), l2=float(l2), linf=float(linf),
            final_c=None if outcome.final_c is None else float(outcome.final_c),
        )

    def _sweep_point(self, strength: float, task_name: str) -> List[OutcomeRecord]:
        n = len(self.eval_set)
        records: List[Optional[OutcomeRecord]] = [None] * n
        with log_operation(task_name) as op:
            if self.config.max_workers == 1:
                for i in range(n):
                    records[i] = self.attack_sample(i, strength)
                    self.progress_tracker.advance(task_name)
                    op.log_progress(i + 1, n)
            else:
                with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
                    future_to_index = {executor.submit(self.attack_sample, i, strength): i for i in range(n)}
                    for done, future in enumerate(as_completed(future_to_index), start=1):
                        records[future_to_index[future]] = future.result()
                        self.progress_tracker.advance(task_name)
                        op.log_progress(done, n)
        return records

    # ------------------------------------------------------------------
    # sweep
    # ------------------------------------------------------------------

    def run_experiment(self) -> List[ReportRow]:
        """Attack all sampled images at every strength and write the CSV and outcome files"""
        if self.eval_set is None:
            self.prepare()
        config = self.config
        task_names = [f"{config.attack}_{config.strength_name}={s:g}" for s in config.strength_grid]
        self.progress_tracker.start_pipeline(task_names)
        rows: List[ReportRow] = []
        self.records = []

        with monitor.section(f"{config.attack}_sweep", sla_category=f"{config.attack}_sweep"):
            for strength, task_name in zip(config.strength_grid, task_names):
                with TaskTracker(self.progress_tracker, task_name, len(self.eval_set)):
                    records = self._sweep_point(strength, task_name)
                row = aggregate(records)
                task = self.progress_tracker.get_task(task_name)
                logger.info(f"{task_name}: ASR {row.asr:.1f}% ({row.n_success}/{row.n_total}) in {task.duration:.1f}s")
                rows.append(row)
                self.records.extend(records)
        self.progress_tracker.end_pipeline()

        write_csv(rows, config.output_path)
        write_outcomes(self.records, outcomes_path_for(config.output_path))
        return rows

    def get_progress_summary(self) -> Dict[str, Any]:
        return self.progress_tracker.get_summary()


def run_experiment(config: ExperimentConfig, **injected: Any) -> List[ReportRow]:
    """Convenience wrapper: build a controller and run the sweep"""
    return ExperimentController(config, **injected).run_experiment()
