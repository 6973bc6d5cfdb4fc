# -*- coding: utf-8 -*-
"""
Optimizers - Adam for C&W mode, projected FISTA for elastic-net mode
"""
from .adam import AdamState, adam_step
from .fista import FistaState, LrSchedule, fista_step, soft_threshold

__all__ = ['AdamState', 'adam_step', 'FistaState', 'LrSchedule', 'fista_step', 'soft_threshold']
