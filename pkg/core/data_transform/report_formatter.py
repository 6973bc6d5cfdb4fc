# -*- coding: utf-8 -*-
"""
Report Formatter - Per-sample outcome records, aggregated report rows and their files
Handles the conversion from attack outcomes to CSV / JSON / Excel reports
"""
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from dataclasses_json import dataclass_json

from config import EXPORT_CONFIG

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_COLUMNS = ['attack', 'target_mode', 'strength', 'asr', 'mean_l1', 'mean_l2', 'mean_linf',
               'n_success', 'n_total']


@dataclass_json
@dataclass
class OutcomeRecord:
    """One attacked image; one line of the outcomes file"""
    attack: str
    target_mode: str
    strength: float
    sample_index: int
    source_index: int
    true_label: int
    target: Optional[int]
    predicted_label: int
    model_fooled: bool
    detector_bypassed: bool
    detector_score: float
    l1: float
    l2: float
    linf: float
    final_c: Optional[float] = None

    @property
    def success(self) -> bool:
        return self.model_fooled and self.detector_bypassed


@dataclass_json
@dataclass
class ReportRow:
    """One strength value of a sweep; distortions are None when nothing succeeded"""
    attack: str
    target_mode: str
    strength: float
    asr: float
    mean_l1: Optional[float]
    mean_l2: Optional[float]
    mean_linf: Optional[float]
    n_success: int
    n_total: int

    def __post_init__(self):
        if not 0.0 <= self.asr <= 100.0:
            raise ValueError(f"asr must lie in [0, 100], got {self.asr}")
        if self.n_success == 0 and any(v is not None for v in (self.mean_l1, self.mean_l2, self.mean_linf)):
            raise ValueError("Distortions must be absent when n_success is 0")


class ReportFormatter:
    """Aggregates outcome records and reads/writes report files"""

    def __init__(self, float_format: str = EXPORT_CONFIG["float_format"]):
        self.float_format = float_format

    def aggregate(self, records: Sequence[OutcomeRecord], require_bypass: bool = True) -> ReportRow:
        """ASR and mean distortions over successes for records of one (attack, mode, strength)"""
        if not records:
            raise ValueError("Cannot aggregate an empty record list")
        keys = {(r.attack, r.target_mode, r.strength) for r in records}
        if len(keys) != 1:
            raise ValueError(f"Records mix several sweeps: {sorted(keys)}")
        attack, target_mode, strength = keys.pop()

        successes = [r for r in records if r.model_fooled and (r.detector_bypassed or not require_bypass)]
        n_success, n_total = len(successes), len(records)
        means: Tuple[Optional[float], ...] = (None, None, None)
        if successes:
            means = tuple(math.fsum(getattr(r, name) for r in successes) / n_success
                          for name in ('l1', 'l2', 'linf'))
        return ReportRow(attack, target_mode, strength, 100.0 * n_success / n_total, *means, n_success, n_total)

    def recount_rows(self, records: Iterable[OutcomeRecord], require_bypass: bool = True) -> List[ReportRow]:
        """Re-aggregate stored outcomes, one row per sweep point in order of first appearance"""
        groups: Dict[tuple, List[OutcomeRecord]] = {}
        for record in records:
            groups.setdefault((record.attack, record.target_mode, record.strength), []).append(record)
        return [self.aggregate(group, require_bypass) for group in groups.values()]

    def table_row(self, rows: Sequence[ReportRow]) -> ReportRow:
        """Lowest strength reaching the highest ASR"""
        if not rows:
            raise ValueError("table_row needs at least one row")
        best_asr = max(r.asr for r in rows)
        return min((r for r in rows if r.asr == best_asr), key=lambda r: r.strength)

    # ------------------------------------------------------------------
    # files
    # ------------------------------------------------------------------

    def to_dataframe(self, rows: Sequence[ReportRow]) -> pd.DataFrame:
        df = pd.DataFrame([row.to_dict() for row in rows], columns=CSV_COLUMNS)
        return df.astype({'strength': float, 'asr': float, 'mean_l1': float, 'mean_l2': float,
                          'mean_linf': float, 'n_success': int, 'n_total': int})

    def write_csv(self, rows: Sequence[ReportRow], path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_dataframe(rows).to_csv(path, index=False, float_format=self.float_format,
                                       na_rep='', lineterminator='\n')
        logger.info(f"Wrote {len(rows)} report rows to {path}")
        return path

    def read_csv(self, path: PathLike) -> List[ReportRow]:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Report not found: {path}")
        df = pd.read_csv(path, dtype={'attack': str, 'target_mode': str})
        missing = [c for c in CSV_COLUMNS if c not in df.columns]
        if missing:
            raise ValueError(f"Report {path} lacks columns {missing}")
        df = df.astype(object).where(df.notna(), None)
        return [ReportRow(r['attack'], r['target_mode'], float(r['strength']), float(r['asr']),
                          *(None if r[c] is None else float(r[c]) for c in ('mean_l1', 'mean_l2', 'mean_linf')),
                          int(r['n_success']), int(r['n_total']))
                for r in df.to_dict(orient='records')]

    def write_outcomes(self, records: Sequence[OutcomeRecord], path: PathLike) -> Path:
        """Line-delimited JSON, one record per attacked image"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            for record in records:
                f.write(json.dumps(record.to_dict(), sort_keys=True) + '\n')
        logger.info(f"Wrote {len(records)} outcome records to {path}")
        return path

    def read_outcomes(self, path: PathLike) -> List[OutcomeRecord]:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Outcomes file not found: {path}")
        with open(path, encoding='utf-8') as f:
            return [OutcomeRecord.from_dict(json.loads(line)) for line in f if line.strip()]

    def export(self, rows: Sequence[ReportRow], path: PathLike) -> Path:
        """Write rows in the format named by the file suffix (.csv, .json or .xlsx)"""
        path = Path(path)
        suffix = path.suffix.lower().lstrip('.')
        if suffix not in EXPORT_CONFIG["formats"]:
            raise ValueError(f"Unsupported export format {path.suffix!r}; use one of {list(EXPORT_CONFIG['formats'])}")
        if suffix == 'csv':
            return self.write_csv(rows, path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if suffix == 'json':
            path.write_text(json.dumps([row.to_dict() for row in rows], indent=2) + '\n', encoding='utf-8')
        else:
            with pd.ExcelWriter(path, engine='openpyxl') as writer:
                self.to_dataframe(rows).to_excel(writer, sheet_name='report', index=False)
                worksheet = writer.sheets['report']
                for column in worksheet.columns:
                    width = max(len(str(cell.value)) for cell in column if cell.value is not None)
                    worksheet.column_dimensions[column[0].column_letter].width = min(width + 2, 30)
        logger.info(f"Exported {len(rows)} report rows to {path}")
        return path


# Global formatter instance
report_formatter = ReportFormatter()


def outcomes_path_for(csv_path: PathLike) -> Path:
    """Outcome file stored next to a report: <report>.outcomes.jsonl"""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + EXPORT_CONFIG["outcomes_suffix"])


# Convenience functions
def aggregate(records: Sequence[OutcomeRecord], require_bypass: bool = True) -> ReportRow:
    return report_formatter.aggregate(records, require_bypass)


def recount_rows(records: Iterable[OutcomeRecord], require_bypass: bool = True) -> List[ReportRow]:
    return report_formatter.recount_rows(records, require_bypass)


def table_row(rows: Sequence[ReportRow]) -> ReportRow:
    return report_formatter.table_row(rows)


def write_csv(rows: Sequence[ReportRow], path: PathLike) -> Path:
    return report_formatter.write_csv(rows, path)


def read_csv(path: PathLike) -> List[ReportRow]:
    return report_formatter.read_csv(path)


def write_outcomes(records: Sequence[OutcomeRecord], path: PathLike) -> Path:
    return report_formatter.write_outcomes(records, path)


def read_outcomes(path: PathLike) -> List[OutcomeRecord]:
    return report_formatter.read_outcomes(path)


def export_report(rows: Sequence[ReportRow], path: PathLike) -> Path:
    return report_formatter.export(rows, path)
