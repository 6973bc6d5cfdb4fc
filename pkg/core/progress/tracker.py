# -*- coding: utf-8 -*-
"""
Progress Tracker - UI-agnostic progress tracking for experiment sweeps
One task per sweep point; per-image progress updates the running task
"""
import logging
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)


class TaskStatus(Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class TaskInfo:
    """Information about a single task"""
    name: str
    status: TaskStatus = TaskStatus.PENDING
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    done: int = 0
    total: int = 0
    message: str = ""
    error: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def duration(self) -> Optional[float]:
        if self.start_time and self.end_time:
            return self.end_time - self.start_time
        elif self.start_time:
            return time.time() - self.start_time
        return None

    @property
    def progress_percent(self) -> float:
        if self.status is TaskStatus.COMPLETED:
            return 100.0
        return 100.0 * self.done / self.total if self.total else 0.0


class ProgressTracker:
    """Tracks progress of the sweep points of one experiment"""

    def __init__(self):
        self.tasks: Dict[str, TaskInfo] = {}
        self.pipeline_start_time: Optional[float] = None
        self.pipeline_end_time: Optional[float] = None
        self.lock = threading.Lock()

    def start_pipeline(self, task_names: List[str]):
        """Register every task up front so overall progress has a fixed denominator"""
        self.pipeline_start_time = time.time()
        self.pipeline_end_time = None
        self.tasks = {name: TaskInfo(name=name) for name in task_names}
        logger.info(f"Started sweep tracking with {len(task_names)} sweep points")

    def end_pipeline(self):
        self.pipeline_end_time = time.time()
        logger.info(f"Sweep completed in {self.get_pipeline_duration():.2f} seconds")

    def start_task(self, task_name: str, total: int, message: str = "") -> TaskInfo:
        task = self.tasks.setdefault(task_name, TaskInfo(name=task_name))
        task.status = TaskStatus.RUNNING
        task.start_time = time.time()
        task.total = total
        task.done = 0
        task.message = message
        logger.debug(f"Started task: {task_name}")
        return task

    def advance(self, task_name: str, message: str = ""):
        """Count one finished unit of work; safe to call from worker threads"""
        with self.lock:
            task = self.tasks.get(task_name)
            if task is None:
                logger.warning(f"Task {task_name} not found")
                return
            task.done += 1
            if message:
                task.message = message

    def complete_task(self, task_name: str, message: str = ""):
        task = self.tasks.get(task_name)
        if task is None:
            logger.warning(f"Task {task_name} not found")
            return
        task.status = TaskStatus.COMPLETED
        task.end_time = time.time()
        if message:
            task.message = message
        logger.info(f"Completed task: {task_name} in {task.duration:.2f}s")

    def fail_task(self, task_name: str, error: str):
        task = self.tasks.get(task_name)
        if task is None:
            logger.warning(f"Task {task_name} not found")
            return
        task.status = TaskStatus.FAILED
        task.end_time = time.time()
        task.error = error
        logger.error(f"Failed task: {task_name} - {error}")

    def get_task(self, task_name: str) -> Optional[TaskInfo]:
        return self.tasks.get(task_name)

    def get_overall_progress(self) -> float:
        if not self.tasks:
            return 0.0
        return sum(task.progress_percent for task in self.tasks.values()) / len(self.tasks)

    def get_pipeline_duration(self) -> Optional[float]:
        if self.pipeline_start_time:
            end_time = self.pipeline_end_time or time.time()
            return end_time - self.pipeline_start_time
        return None

    def get_summary(self) -> Dict[str, Any]:
        counts = {status: 0 for status in TaskStatus}
        for task in self.tasks.values():
            counts[task.status] += 1
        return {
            'total_tasks': len(self.tasks),
            'completed': counts[TaskStatus.COMPLETED],
            'running': counts[TaskStatus.RUNNING],
            'failed': counts[TaskStatus.FAILED],
            'pending': counts[TaskStatus.PENDING],
            'overall_progress': self.get_overall_progress(),
            'pipeline_duration': self.get_pipeline_duration(),
            'pipeline_running': self.pipeline_start_time is not None and self.pipeline_end_time is None,
        }


class TaskTracker:
    """Context manager for automatic task start/complete"""

    def __init__(self, tracker: ProgressTracker, task_name: str, total: int, message: str = ""):
        self.tracker = tracker
        self.task_name = task_name
        self.total = total
        self.message = message

    def __enter__(self):
        return self.tracker.start_task(self.task_name, self.total, self.message)

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is None:
            self.tracker.complete_task(self.task_name)
        else:
            self.tracker.fail_task(self.task_name, str(exc_val) if exc_val else "Unknown error")
