# -*- coding: utf-8 -*-
import logging

import pytest

import config
from core.progress import ProgressTracker, TaskStatus, TaskTracker
from utils.logging_helpers import LoggingHelper, log_operation
from utils.performance_monitor import PerformanceMonitor


def test_validate_config_accepts_shipped_constants():
    assert config.validate_config() == (True, "")


def test_validate_config_reports_bad_grid(monkeypatch):
    monkeypatch.setitem(config.STRENGTH_GRIDS, "mnist", {"kappa": [20.0, 10.0]})
    valid, message = config.validate_config()
    assert not valid and "not strictly increasing" in message


def test_measure_time_records_metrics_and_sla_violations(caplog):
    monitor = PerformanceMonitor(sla_targets={"calibration": 1e-12})

    @monitor.measure_time(function_name="calibrate", sla_category="calibration")
    def calibrate(x):
        return x * 2

    with caplog.at_level(logging.WARNING, logger="utils.performance_monitor"):
        assert calibrate(21) == 42
    assert "SLA VIOLATION: calibrate" in caplog.text

    stats = monitor.get_summary_stats("calibration")
    assert stats["total_executions"] == 1 and stats["sla_violations"] == 1
    assert monitor.metrics[0].function_name == "calibrate"
    assert monitor.get_summary_stats("training") == {"no_data": True}


def test_section_records_failures():
    monitor = PerformanceMonitor(sla_targets={})
    with pytest.raises(RuntimeError):
        with monitor.section("ead_sweep", sla_category="ead_sweep"):
            raise RuntimeError("boom")
    (metric,) = monitor.metrics
    assert metric.function_name == "section.ead_sweep"
    assert not metric.success and metric.error == "boom"
    assert monitor.get_summary_stats("ead_sweep")["failed_executions"] == 1


def test_task_tracker_marks_completion_and_failure():
    tracker = ProgressTracker()
    tracker.start_pipeline(["kappa=10", "kappa=20"])
    with TaskTracker(tracker, "kappa=10", 2):
        tracker.advance("kappa=10")
        assert tracker.get_task("kappa=10").progress_percent == 50.0
        tracker.advance("kappa=10")
    with pytest.raises(ValueError):
        with TaskTracker(tracker, "kappa=20", 2):
            raise ValueError("diverged")
    tracker.end_pipeline()

    assert tracker.get_task("kappa=10").status is TaskStatus.COMPLETED
    failed = tracker.get_task("kappa=20")
    assert failed.status is TaskStatus.FAILED and failed.error == "diverged"
    summary = tracker.get_summary()
    assert summary["completed"] == 1 and summary["failed"] == 1
    assert summary["overall_progress"] == pytest.approx(50.0)


def test_operation_logger_logs_start_progress_and_failure(caplog):
    with caplog.at_level(logging.INFO):
        with log_operation("calibration") as op:
            op.log_progress(3, 4)
        with pytest.raises(KeyError):
            with log_operation("sweep"):
                raise KeyError("missing")
    assert "Starting operation: calibration" in caplog.text
    assert "Progress: 3/4 (75.0%)" in caplog.text
    assert "Failed operation: sweep" in caplog.text


def test_setup_logging_writes_log_file(tmp_path):
    helper = LoggingHelper(log_dir=str(tmp_path / "logs"))
    root = logging.getLogger()
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        helper.setup_logging(level="DEBUG", log_to_file=True, log_to_console=False, log_filename="run.log")
        helper.get_logger("tests.logging").info("written to file")
        for handler in root.handlers:
            handler.flush()
        assert "written to file" in (tmp_path / "logs" / "run.log").read_text()
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers[:] = saved_handlers
        root.setLevel(saved_level)
