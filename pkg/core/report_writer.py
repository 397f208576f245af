"""
Report writer module.

Writes experiment reports as CSV rows or a JSON document. Output is a
pure function of the report contents: keys are sorted, no timestamps
are written, and exact rationals are rendered as "p/q" strings.
"""

# Standard library imports
import csv
import io
import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

# Local project imports
from core.logger import logger

FORMATS = ("csv", "json")


def to_plain(value: Any) -> Any:
    """Convert a report value into JSON-compatible data."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if hasattr(value, "item"):
        return value.item()
    return repr(value)


def render_json(report: Dict[str, Any]) -> str:
    """Serialize a report deterministically."""
    return json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n"


def render_csv(
    rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None
) -> str:
    """
    Serialize rows as CSV.

    Args:
        rows (Sequence[Dict[str, Any]]): One mapping per sample.
        columns (Optional[List[str]]): Column order; defaults to the
            sorted union of row keys.

    Returns:
        str: The CSV text with a header line.
    """
    header = columns or sorted({key for row in rows for key in row})
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {
                key: json.dumps(to_plain(value))
                if isinstance(value, (dict, list, tuple))
                else to_plain(value)
                for key, value in row.items()
                if key in header
            }
        )
    return buffer.getvalue()


def write_report(
    report: Dict[str, Any],
    out: Optional[str],
    fmt: str = "json",
    rows_key: str = "rows",
) -> str:
    """
    Render a report and write it to out, or return it when out is None.

    In CSV format the list under rows_key is written; reports without
    rows become a single row of their scalar fields.

    Raises:
        ValueError: On an unknown format.
        OSError: If the file cannot be written.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    if fmt == "json":
        text = render_json(report)
    else:
        rows = report.get(rows_key)
        if not rows:
            rows = [
                {
                    key: value
                    for key, value in report.items()
                    if key != rows_key
                }
            ]
        text = render_csv(rows)
    if out:
        directory = os.path.dirname(os.path.abspath(out))
        os.makedirs(directory, exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info("Report written to %s", out)
    return text
