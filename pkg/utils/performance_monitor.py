# -*- coding: utf-8 -*-
"""
Performance Monitor - Decorator and tools for measuring stage durations
Checks training, calibration and sweep stages against the desk-scale budgets in SLA_TARGETS
"""
import functools
import logging
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

from config import SLA_TARGETS

logger = logging.getLogger(__name__)


@dataclass
class PerformanceMetric:
    """Single performance measurement"""
    function_name: str
    duration: float
    timestamp: datetime
    success: bool = True
    error: Optional[str] = None
    sla_category: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class PerformanceMonitor:
    """Thread-safe performance monitoring"""

    def __init__(self, sla_targets: Optional[Dict[str, float]] = None):
        self.metrics: List[PerformanceMetric] = []
        self.lock = threading.Lock()
        self.sla_targets = dict(SLA_TARGETS if sla_targets is None else sla_targets)

    def measure_time(self, function_name: Optional[str] = None, sla_category: Optional[str] = None):
        """Decorator to measure function execution time"""

        def decorator(func: Callable) -> Callable:
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                func_name = function_name or f"{func.__module__}.{func.__name__}"
                start_time = time.perf_counter()
                success, error = True, None
                try:
                    return func(*args, **kwargs)
                except Exception as e:
                    success, error = False, str(e)
                    raise
                finally:
                    self._record(PerformanceMetric(
                        function_name=func_name,
                        duration=time.perf_counter() - start_time,
                        timestamp=datetime.now(),
                        success=success,
                        error=error,
                        sla_category=sla_category,
                    ))

            return wrapper
        return decorator

    def _record(self, metric: PerformanceMetric):
        with self.lock:
            self.metrics.append(metric)
        self._log_performance(metric)

    def _log_performance(self, metric: PerformanceMetric):
        """Log performance and check SLA compliance"""
        log_msg = f"Performance: {metric.function_name} took {metric.duration:.3f}s"
        if metric.success:
            logger.info(log_msg)
        else:
            logger.error(f"{log_msg} - FAILED: {metric.error}")

        target = self.sla_targets.get(metric.sla_category)
        if target is not None and metric.duration > target:
            logger.warning(
                f"SLA VIOLATION: {metric.function_name} took {metric.duration:.3f}s "
                f"(target: {target}s) - {((metric.duration / target - 1) * 100):.1f}% over"
            )

    def get_summary_stats(self, sla_category: Optional[str] = None) -> Dict[str, Any]:
        """Duration statistics, optionally restricted to one SLA category"""
        with self.lock:
            metrics = [m for m in self.metrics if sla_category is None or m.sla_category == sla_category]
        if not metrics:
            return {'no_data': True}

        durations = [m.duration for m in metrics if m.success]
        stats = {
            'total_executions': len(metrics),
            'successful_executions': len(durations),
            'failed_executions': len(metrics) - len(durations),
        }
        if durations:
            stats.update({
                'avg_duration': sum(durations) / len(durations),
                'min_duration': min(durations),
                'max_duration': max(durations),
            })
        target = self.sla_targets.get(sla_category)
        if target is not None and durations:
            stats.update({
                'sla_target': target,
                'sla_violations': sum(d > target for d in durations),
            })
        return stats

    @contextmanager
    def section(self, section_name: str, sla_category: Optional[str] = None):
        """Context manager for timing a code section"""
        start_time = time.perf_counter()
        success, error = True, None
        try:
            yield
        except Exception as e:
            success, error = False, str(e)
            raise
        finally:
            self._record(PerformanceMetric(
                function_name=f"section.{section_name}",
                duration=time.perf_counter() - start_time,
                timestamp=datetime.now(),
                success=success,
                error=error,
                sla_category=sla_category,
            ))


# Global instance
monitor = PerformanceMonitor()


# Convenience functions
def get_performance_summary(sla_category: Optional[str] = None) -> Dict[str, Any]:
    return monitor.get_summary_stats(sla_category)
