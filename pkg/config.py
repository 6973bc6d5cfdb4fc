# -*- coding: utf-8 -*-
"""
Configuration file for the feature-squeezing attack bench
Contains all constants, settings, and configuration parameters
"""
import os
from typing import Dict, List, Any

from dotenv import load_dotenv

# Local overrides (SQUEEZE_* variables) may live in a .env file next to this module
load_dotenv()

# ============================================================================
# DETECTOR CONFIGURATION
# ============================================================================

# Joint detector presets: one entry per squeezer, max-combined at scoring time
DETECTOR_PRESETS: Dict[str, List[Dict[str, Any]]] = {
    "mnist": [
        {"kind": "bit_depth", "bits": 1},
        {"kind": "median", "window": 2},
    ],
    "cifar10": [
        {"kind": "bit_depth", "bits": 5},
        {"kind": "median", "window": 2},
        {"kind": "nlm", "search": 13, "patch": 3, "bandwidth": 2.0},
    ],
}

# ============================================================================
# ATTACK CONFIGURATION
# ============================================================================

CW_EAD_DEFAULTS: Dict[str, Any] = {
    "c_initial": 0.001,
    "binary_search_steps": 9,
    "iterations": 1000,
    "alpha0": 0.01,
    "c_upper_bound": 1e10,
    "lr_schedule": "inverse_sqrt",  # inverse_sqrt | polynomial_sqrt | constant
    "abort_early": False,
}

# L1 weight of the elastic-net penalty per dataset
EAD_BETA: Dict[str, float] = {
    "mnist": 0.01,
    "cifar10": 0.001,
}

IFGSM_DEFAULTS: Dict[str, Any] = {
    "steps": 10,
}

# Default adversary-strength sweeps (kappa for cw/ead, epsilon for ifgsm)
STRENGTH_GRIDS: Dict[str, Dict[str, List[float]]] = {
    "mnist": {
        "kappa": [10.0, 20.0, 30.0, 40.0],
        "epsilon": [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    },
    "cifar10": {
        "kappa": [10.0, 30.0, 50.0, 70.0],
        "epsilon": [0.008, 0.04, 0.07, 0.1, 0.2, 0.3, 0.4, 0.5],
    },
}

# ============================================================================
# MODEL TRAINING CONFIGURATION
# ============================================================================

TRAINING_CONFIG: Dict[str, Any] = {
    "optimizer": "adam",
    "lr": 1e-3,
    "batch_size": 64,
    "epochs": 5,
    "seed": 1234,
}

# ============================================================================
# SAMPLING CONFIGURATION
# ============================================================================

SAMPLING_CONFIG: Dict[str, Any] = {
    "sample_size": 100,
    "calibration_size": 1000,
    "target_fpr": 0.05,
    "seed": 2018,
}

# ============================================================================
# RUNTIME / PERFORMANCE TARGETS
# ============================================================================

RUNTIME_CONFIG: Dict[str, Any] = {
    "max_workers": int(os.environ.get("SQUEEZE_MAX_WORKERS", "4")),
}

# Desk-scale budgets in seconds
SLA_TARGETS: Dict[str, float] = {
    "training": 1800.0,
    "calibration": 300.0,
    "fgsm_sweep": 600.0,
    "ifgsm_sweep": 600.0,
    "ead_sweep": 2700.0,
    "cw_sweep": 2700.0,
}

# ============================================================================
# EXPORT CONFIGURATION
# ============================================================================

EXPORT_CONFIG: Dict[str, Any] = {
    "formats": {
        "csv": "CSV (.csv)",
        "json": "JSON (.json)",
        "xlsx": "Excel (.xlsx)",
    },
    "output_dir": "local-reports",
    "float_format": "%.4g",
    "outcomes_suffix": ".outcomes.jsonl",
}

# ============================================================================
# LOGGING CONFIGURATION
# ============================================================================

LOGGING_CONFIG: Dict[str, Any] = {
    "level": "INFO",
    "log_dir": "local-reports/logs",
}

# ============================================================================
# APPLICATION SETTINGS
# ============================================================================

APP_INFO = {
    "name": "squeeze-bypass",
    "version": "1.0.0",
    "description": "Strong-adversary evaluation of feature-squeezing joint detectors",
}

# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def get_setting(key: str, default: str = "") -> str:
    """Get a setting from the environment (or .env), with default"""
    return os.environ.get(key, default)


def validate_config() -> tuple[bool, str]:
    """Validate configuration consistency

    Returns:
        tuple[bool, str]: (is_valid, error_message)
    """
    try:
        known_kinds = {"bit_depth", "median", "nlm"}
        for preset, squeezers in DETECTOR_PRESETS.items():
            assert squeezers, f"Detector preset '{preset}' has no squeezers"
            for entry in squeezers:
                assert entry["kind"] in known_kinds, f"Unknown squeezer kind in '{preset}': {entry['kind']}"

        for dataset, grids in STRENGTH_GRIDS.items():
            for name, grid in grids.items():
                assert grid, f"Empty {name} grid for {dataset}"
                assert all(a < b for a, b in zip(grid, grid[1:])), \
                    f"{name} grid for {dataset} is not strictly increasing: {grid}"

        assert set(EAD_BETA) == set(DETECTOR_PRESETS), "EAD beta and detector presets cover different datasets"
        assert 0.0 < SAMPLING_CONFIG["target_fpr"] < 1.0, "target_fpr must lie in (0, 1)"
        assert CW_EAD_DEFAULTS["lr_schedule"] in {"inverse_sqrt", "polynomial_sqrt", "constant"}, \
            f"Unknown lr schedule: {CW_EAD_DEFAULTS['lr_schedule']}"
        assert RUNTIME_CONFIG["max_workers"] >= 1, "max_workers must be >= 1"

        return True, ""

    except AssertionError as e:
        return False, f"Configuration validation error: {e}"
    except Exception as e:
        return False, f"Unexpected configuration error: {e}"
