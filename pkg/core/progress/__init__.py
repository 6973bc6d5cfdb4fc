# -*- coding: utf-8 -*-
# Progress tracking module - one task per sweep point
from .tracker import ProgressTracker, TaskInfo, TaskStatus, TaskTracker

__all__ = ['ProgressTracker', 'TaskInfo', 'TaskStatus', 'TaskTracker']
