# -*- coding: utf-8 -*-
"""
Attack Module - FGSM, I-FGSM, C&W L2 and EAD with target selection
"""
from .configs import CwEadConfig, FgsmConfig
from .elastic_net import cw_ead_attack, cw_objective, elastic_distance, elastic_net_objective
from .gradient_sign import fgsm, ifgsm
from .outcome import AttackOutcome
from .targets import TargetMode, TargetSpec, is_satisfied, select_target

__all__ = [
    'CwEadConfig', 'FgsmConfig',
    'cw_ead_attack', 'cw_objective', 'elastic_distance', 'elastic_net_objective',
    'fgsm', 'ifgsm', 'AttackOutcome',
    'TargetMode', 'TargetSpec', 'is_satisfied', 'select_target',
]
