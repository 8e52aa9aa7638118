"""Text, CSV and structured renderings of bound reports and tables."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .bounds import BoundReport, BoundTable
from .const import FORMAT_CSV, FORMAT_STRUCTURED, FORMAT_TEXT
from .exceptions import InvalidParameterError
from .tensor_io import format_rational

BOLD = "\033[1m"
RESET = "\033[0m"
SHARP_MARK = "*"


@dataclass(frozen=True)
class ReportFieldDescription:
    """Class describing one field of a bound report."""

    key: str
    name: str
    value_fn: Callable[[BoundReport], Any]
    # applies to one report kind only; text output leaves the row out when None
    optional: bool = False


REPORT_FIELDS: tuple[ReportFieldDescription, ...] = (
    ReportFieldDescription(
        key="instance",
        name="Instance",
        value_fn=lambda report: report.instance,
    ),
    ReportFieldDescription(
        key="dim",
        name="Dimension",
        value_fn=lambda report: report.dim,
    ),
    ReportFieldDescription(
        key="border_rank",
        name="Border rank",
        value_fn=lambda report: report.border_rank,
    ),
    ReportFieldDescription(
        key="border_certified",
        name="Border rank certified",
        value_fn=lambda report: report.border_certified,
    ),
    ReportFieldDescription(
        key="flattening_ranks",
        name="Flattening ranks",
        value_fn=lambda report: report.flattening_ranks or None,
    ),
    ReportFieldDescription(
        key="blaser_lb",
        name="Blaser bound",
        value_fn=lambda report: report.blaser_lb,
    ),
    ReportFieldDescription(
        key="blaser_m",
        name="Blaser m",
        value_fn=lambda report: report.blaser_m,
    ),
    ReportFieldDescription(
        key="alder_strassen_lb",
        name="Alder-Strassen bound",
        value_fn=lambda report: report.alder_strassen_lb,
        optional=True,
    ),
    ReportFieldDescription(
        key="induction_lb",
        name="Lifted Alder-Strassen bound",
        value_fn=lambda report: report.induction_lb,
        optional=True,
    ),
    ReportFieldDescription(
        key="best_lb",
        name="Best lower bound",
        value_fn=lambda report: report.best_lb,
    ),
    ReportFieldDescription(
        key="best_source",
        name="Best source",
        value_fn=lambda report: report.best_source,
    ),
    ReportFieldDescription(
        key="rank_ub",
        name="Rank upper bound",
        value_fn=lambda report: report.rank_ub,
    ),
    ReportFieldDescription(
        key="ratio_lb",
        name="Rank / border rank",
        value_fn=lambda report: report.ratio_lb,
    ),
    ReportFieldDescription(
        key="known_exact",
        name="known exact",
        value_fn=lambda report: report.known_exact,
    ),
)


def format_value(value: Any) -> str:
    """Exact decimal or p/q text; tuples join with spaces."""
    if value is None:
        return "unknown"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (tuple, list)):
        return " ".join(format_value(item) for item in value)
    return str(value)


def _structured_value(value: Any) -> Any:
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, (tuple, list)):
        return [_structured_value(item) for item in value]
    if isinstance(value, (int, Fraction)):
        return format_value(value)
    return value


def _csv_text(rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def _check_format(fmt: str) -> None:
    if fmt not in (FORMAT_TEXT, FORMAT_CSV, FORMAT_STRUCTURED):
        raise InvalidParameterError(f"unknown output format {fmt!r}")


def render_report(report: BoundReport, fmt: str = FORMAT_TEXT) -> str:
    _check_format(fmt)
    values = [(field, field.value_fn(report)) for field in REPORT_FIELDS]
    if fmt == FORMAT_CSV:
        return _csv_text(
            [
                [field.key for field, _ in values],
                [
                    "" if value is None and field.optional else format_value(value)
                    for field, value in values
                ],
            ]
        )
    if fmt == FORMAT_STRUCTURED:
        document = {field.key: _structured_value(value) for field, value in values}
        return json.dumps(document, indent=2) + "\n"
    return "".join(
        f"{field.name}: {format_value(value)}\n"
        for field, value in values
        if not (value is None and field.optional)
    )


def render_records(
    title: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    fmt: str = FORMAT_TEXT,
) -> str:
    """Render a small record table, e.g. a residual trace or rank list."""
    _check_format(fmt)
    if fmt == FORMAT_CSV:
        return _csv_text(
            [list(columns), *([format_value(cell) for cell in row] for row in rows)]
        )
    if fmt == FORMAT_STRUCTURED:
        document = {
            "title": title,
            "records": [
                {column: _structured_value(cell) for column, cell in zip(columns, row)}
                for row in rows
            ],
        }
        return json.dumps(document, indent=2) + "\n"
    cells = [[format_value(cell) for cell in row] for row in rows]
    widths = [
        max([len(column)] + [len(row[i]) for row in cells])
        for i, column in enumerate(columns)
    ]
    lines = [title, "  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
    return "\n".join(lines) + "\n"


def table_csv(table: BoundTable) -> str:
    """Header row label/col label then the column keys; one line per row key."""
    lines = [
        ",".join([f"{table.row_label}/{table.col_label}", *map(str, table.col_keys)])
    ]
    for key, values in zip(table.row_keys, table.values):
        lines.append(",".join([str(key), *map(str, values)]))
    return "\n".join(lines) + "\n"


def table_text(table: BoundTable, color: bool = False) -> str:
    """Aligned grid; cells known to be sharp carry a trailing '*'."""
    header = [f"{table.row_label}\\{table.col_label}", *map(str, table.col_keys)]
    grid = [
        [str(key)]
        + [
            f"{value}{SHARP_MARK if table.is_sharp(key, col) else ''}"
            for col, value in zip(table.col_keys, values)
        ]
        for key, values in zip(table.row_keys, table.values)
    ]
    widths = [max(len(row[i]) for row in [header, *grid]) for i in range(len(header))]

    def cell(text: str, width: int) -> str:
        padded = text.rjust(width)
        if color and text.endswith(SHARP_MARK):
            return f"{BOLD}{padded}{RESET}"
        return padded

    lines = [table.title, "  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.extend("  ".join(cell(c, w) for c, w in zip(row, widths)) for row in grid)
    lines.append(f"{SHARP_MARK} known to be the exact rank")
    return "\n".join(lines) + "\n"


def table_structured(table: BoundTable) -> str:
    document = {
        "title": table.title,
        "row_label": table.row_label,
        "col_label": table.col_label,
        "row_keys": list(table.row_keys),
        "col_keys": list(table.col_keys),
        "values": [[str(value) for value in row] for row in table.values],
        "sharp": sorted([list(cell) for cell in table.sharp]),
    }
    return json.dumps(document, indent=2) + "\n"


def render_table(table: BoundTable, fmt: str = FORMAT_TEXT, color: bool = False) -> str:
    _check_format(fmt)
    if fmt == FORMAT_CSV:
        return table_csv(table)
    if fmt == FORMAT_STRUCTURED:
        return table_structured(table)
    return table_text(table, color=color)
