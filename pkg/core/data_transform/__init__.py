# -*- coding: utf-8 -*-
"""
Data Transform Module - Converts attack outcomes to report rows and export files
"""

from .report_formatter import (
    OutcomeRecord, ReportRow, ReportFormatter, report_formatter,
    aggregate, recount_rows, table_row, write_csv, read_csv,
    write_outcomes, read_outcomes, export_report, outcomes_path_for,
)

__all__ = [
    'OutcomeRecord', 'ReportRow', 'ReportFormatter', 'report_formatter',
    'aggregate', 'recount_rows', 'table_row', 'write_csv', 'read_csv',
    'write_outcomes', 'read_outcomes', 'export_report', 'outcomes_path_for',
]
