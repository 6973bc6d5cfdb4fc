# -*- coding: utf-8 -*-
"""
Detect Module - Joint feature-squeezing detector
"""
from .detector import (
    DetectorFormatError, DetectorModelMismatchError, JointDetector,
    calibrate_detector, calibrate_threshold, false_positive_rate, is_adversarial, joint_score, joint_scores,
    load_detector, save_detector, squeezer_score,
)

__all__ = [
    'DetectorFormatError', 'DetectorModelMismatchError', 'JointDetector',
    'calibrate_detector', 'calibrate_threshold', 'false_positive_rate', 'is_adversarial',
    'joint_score', 'joint_scores',
    'load_detector', 'save_detector', 'squeezer_score',
]
