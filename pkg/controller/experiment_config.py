# -*- coding: utf-8 -*-
"""
Experiment Config - ExperimentConfig and the KEY=VALUE experiment file reader
"""
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from dotenv import dotenv_values

from config import CW_EAD_DEFAULTS, EAD_BETA, EXPORT_CONFIG, IFGSM_DEFAULTS, RUNTIME_CONFIG, \
    SAMPLING_CONFIG, STRENGTH_GRIDS
from core.attack import TargetMode

DATASETS = ("mnist", "cifar10")
ATTACKS = ("fgsm", "ifgsm", "cw", "ead")


class ConfigurationError(ValueError):
    """Experiment configuration is invalid or inconsistent"""


@dataclass
class ExperimentConfig:
    dataset: str
    model_path: str = ""
    attack: str = "ead"
    target_mode: str = TargetMode.NONTARGETED.value
    strength_grid: List[float] = field(default_factory=list)
    sample_size: int = SAMPLING_CONFIG["sample_size"]
    seed: int = SAMPLING_CONFIG["seed"]
    output_path: str = ""
    train_images: Optional[str] = None
    train_labels: Optional[str] = None
    test_images: Optional[str] = None
    test_labels: Optional[str] = None
    cifar_train_batches: List[str] = field(default_factory=list)
    cifar_test_batch: Optional[str] = None
    detector_path: Optional[str] = None
    beta: Optional[float] = None
    iterations: int = CW_EAD_DEFAULTS["iterations"]
    binary_search_steps: int = CW_EAD_DEFAULTS["binary_search_steps"]
    lr_schedule: str = CW_EAD_DEFAULTS["lr_schedule"]
    abort_early: bool = CW_EAD_DEFAULTS["abort_early"]
    ifgsm_steps: int = IFGSM_DEFAULTS["steps"]
    max_workers: int = RUNTIME_CONFIG["max_workers"]
    calibration_size: int = SAMPLING_CONFIG["calibration_size"]
    target_fpr: float = SAMPLING_CONFIG["target_fpr"]

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise ConfigurationError(f"DATASET must be one of {DATASETS}, got {self.dataset!r}")
        if self.attack not in ATTACKS:
            raise ConfigurationError(f"ATTACK must be one of {ATTACKS}, got {self.attack!r}")
        try:
            TargetMode(self.target_mode)
        except ValueError:
            raise ConfigurationError(
                f"TARGET_MODE must be one of {[m.value for m in TargetMode]}, got {self.target_mode!r}") from None

        if not self.strength_grid:
            self.strength_grid = list(STRENGTH_GRIDS[self.dataset][self.strength_name])
        self.strength_grid = [float(v) for v in self.strength_grid]
        if any(v < 0 for v in self.strength_grid):
            raise ConfigurationError(f"STRENGTH_GRID values must be >= 0: {self.strength_grid}")
        if any(a >= b for a, b in zip(self.strength_grid, self.strength_grid[1:])):
            raise ConfigurationError(f"STRENGTH_GRID must be strictly increasing: {self.strength_grid}")

        if self.beta is None:
            self.beta = EAD_BETA[self.dataset] if self.attack == "ead" else 0.0
        if self.attack == "ead" and self.beta <= 0:
            raise ConfigurationError(f"BETA must be > 0 for ead, got {self.beta}")
        if self.attack == "cw" and self.beta != 0:
            raise ConfigurationError(f"BETA must be 0 for cw, got {self.beta}")

        for name in ("sample_size", "iterations", "binary_search_steps", "ifgsm_steps",
                     "max_workers", "calibration_size"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name.upper()} must be >= 1, got {getattr(self, name)}")
        if not 0.0 < self.target_fpr < 1.0:
            raise ConfigurationError(f"TARGET_FPR must lie in (0, 1), got {self.target_fpr}")
        if self.lr_schedule not in ("inverse_sqrt", "polynomial_sqrt", "constant"):
            raise ConfigurationError(f"Unknown LR_SCHEDULE {self.lr_schedule!r}")

        if not self.output_path:
            self.output_path = str(Path(EXPORT_CONFIG["output_dir"]) /
                                   f"{self.dataset}_{self.attack}_{self.target_mode}.csv")

    @property
    def strength_name(self) -> str:
        """kappa for the elastic-net family, epsilon for the gradient-sign family"""
        return "epsilon" if self.attack in ("fgsm", "ifgsm") else "kappa"

    def require_data_paths(self, split: str) -> None:
        """Raise unless the dataset files of a split are configured and present"""
        if self.dataset == "mnist":
            keys = ("train_images", "train_labels") if split == "train" else ("test_images", "test_labels")
            paths = [getattr(self, k) for k in keys]
            if not all(paths):
                raise ConfigurationError(f"{' and '.join(k.upper() for k in keys)} must be set for {split} data")
        else:
            paths = self.cifar_train_batches if split == "train" else [self.cifar_test_batch]
            if not paths or not all(paths):
                key = "CIFAR_TRAIN_BATCHES" if split == "train" else "CIFAR_TEST_BATCH"
                raise ConfigurationError(f"{key} must be set for {split} data")
        missing = [p for p in paths if not Path(p).exists()]
        if missing:
            raise ConfigurationError(f"Dataset files not found: {missing}")


def _as_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {value!r}")


def _as_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


_CONVERTERS: Dict[str, Callable[[str], Any]] = {
    "sample_size": int, "seed": int, "iterations": int, "binary_search_steps": int,
    "ifgsm_steps": int, "max_workers": int, "calibration_size": int,
    "beta": float, "target_fpr": float, "abort_early": _as_bool,
    "strength_grid": lambda v: [float(item) for item in _as_list(v)],
    "cifar_train_batches": _as_list,
}

_PATH_KEYS = {"model_path", "output_path", "train_images", "train_labels", "test_images",
              "test_labels", "cifar_test_batch", "detector_path"}


def config_from_mapping(values: Dict[str, Optional[str]], base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Build an ExperimentConfig from upper-case KEY -> text values; relative paths resolve against base_dir"""
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(k for k in values if k.lower() not in known)
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}")

    kwargs: Dict[str, Any] = {}
    for key, raw in values.items():
        name = key.lower()
        if raw is None or raw.strip() == "":
            continue
        raw = raw.strip()
        try:
            value = _CONVERTERS.get(name, str)(raw)
        except ValueError as e:
            raise ConfigurationError(f"Invalid value for {key}: {raw!r} ({e})") from None
        if base_dir is not None:
            if name in _PATH_KEYS:
                value = str(base_dir / value)
            elif name == "cifar_train_batches":
                value = [str(base_dir / p) for p in value]
        kwargs[name] = value

    if "dataset" not in kwargs:
        raise ConfigurationError("DATASET is required")
    return ExperimentConfig(**kwargs)


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read a KEY=VALUE experiment file (# comments allowed)"""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config not found: {path}")
    return config_from_mapping(dotenv_values(path), base_dir=path.parent)
