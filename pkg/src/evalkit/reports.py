"""
Hypothesis Reader - Metrics Reports
Tabular reports in the column layout of the published evaluation tables.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd
from rich.console import Console
from rich.table import Table

from src.evalkit.metrics import Metrics

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ['Model', 'Feature Normalization', 'Accuracy', 'Precision', 'Recall', 'F1-Score']


def report_row(model: str, metrics: Metrics, normalization: str = 'None') -> Dict[str, Any]:
    return {
        'Model': model,
        'Feature Normalization': normalization,
        'Accuracy': metrics.accuracy,
        'Precision': metrics.precision,
        'Recall': metrics.recall,
        'F1-Score': metrics.f1,
    }


def metrics_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def write_report(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    """Write a report as CSV or JSON depending on the file suffix."""
    path = Path(path)
    if path.suffix.lower() == '.json':
        path.write_text(json.dumps(frame.to_dict(orient='records'), indent=2) + '\n', encoding='utf-8')
    else:
        frame.to_csv(path, index=False, lineterminator='\n', float_format='%.4f')
    logger.info(f"Report written to {path}")


def render_report(frame: pd.DataFrame, title: str, console: Optional[Console] = None) -> None:
    """Print a report as a rich table, percentages with one decimal."""
    console = console or Console()
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column), justify='left' if column in ('Model', 'Feature Normalization') else 'right')
    for _, row in frame.iterrows():
        cells = []
        for column in frame.columns:
            value = row[column]
            cells.append(f"{value * 100:.1f}%" if isinstance(value, float) else str(value))
        table.add_row(*cells)
    console.print(table)
