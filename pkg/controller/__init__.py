# -*- coding: utf-8 -*-
"""
Controller Package - Experiment orchestration and the command line
Keeps file loading, sweeps and exit codes out of the core modules
"""
from .experiment_config import ConfigurationError, ExperimentConfig, config_from_mapping, load_experiment_config
from .experiment_controller import ExperimentController, run_experiment
from .interfaces import IExperimentRunner

__all__ = [
    'ConfigurationError', 'ExperimentConfig', 'config_from_mapping', 'load_experiment_config',
    'ExperimentController', 'run_experiment', 'IExperimentRunner',
]
