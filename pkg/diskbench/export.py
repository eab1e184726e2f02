"""Table writers and verification reports.

Rows are dictionaries written in a fixed column order, as CSV (RFC 4180,
CRLF line endings) or JSON lines. Reports are rendered to markdown and,
through :class:`TemplateManager`, to HTML.
"""

import csv
import json
import math
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .errors import ConfigError
from .template_manager import TemplateManager

try:
    import markdown
    from markdown.extensions.tables import TableExtension
except ImportError:
    raise ImportError(
        "markdown package is required. Install it with: pip install markdown"
    )


def format_value(value: Any) -> str:
    """Text form of a cell; floats keep full precision so reruns are byte-identical."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        sign = "-" if z.imag < 0 or (z.imag == 0 and math.copysign(1.0, z.imag) < 0) else "+"
        return f"{z.real!r}{sign}{abs(z.imag)!r}j"
    return "" if value is None else str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else format_value(value)
    if isinstance(value, (complex, np.complexfloating)):
        return format_value(value)
    return value


def write_rows(rows: Iterable[Dict[str, Any]], columns: Sequence[str], stream: IO[str],
               fmt: str = "csv") -> int:
    """Write ``rows`` to ``stream``; returns the number of data rows.

    Raises:
        ConfigError: If the format is unknown
    """
    count = 0
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\r\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(col)) for col in columns])
            count += 1
    elif fmt == "jsonl":
        for row in rows:
            record = {col: _json_value(row.get(col)) for col in columns}
            stream.write(json.dumps(record) + "\n")
            count += 1
    else:
        raise ConfigError(f"Unsupported output format: {fmt}. Choose from: csv, jsonl")
    return count


def write_plot_data(path: str, x: Sequence[float], y: Sequence[float]) -> str:
    """Two whitespace-separated columns, one point per line."""
    if len(x) != len(y):
        raise ConfigError("plot columns must have the same length")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for xi, yi in zip(x, y):
            f.write(f"{format_value(float(xi))} {format_value(float(yi))}\n")
    return path


def _report_rows(report) -> List[Dict[str, Any]]:
    rows = []
    for record in report.to_records():
        record = dict(record)
        record["lhs"] = format_value(record["lhs"])
        record["rhs"] = format_value(record["rhs"])
        rows.append(record)
    return rows


def generate_markdown_report(report, title: str = "diskbench verification") -> str:
    """Markdown summary of a suite run."""
    rows = _report_rows(report)
    passed = sum(1 for row in rows if row["passed"])
    lines = [f"# {title}", "", f"Suite `{report.suite}`: {passed} of {len(rows)} checks passed.", ""]
    failed = [row for row in rows if not row["passed"]]
    if failed:
        lines.append("## Failed checks")
        lines.append("")
        lines.append("| invariant | reference | lhs | rhs | detail |")
        lines.append("|---|---|---|---|---|")
        for row in failed:
            lines.append(f"| {row['invariant']} | {row['reference']} | {row['lhs']} | {row['rhs']} | {row['detail']} |")
    return "\n".join(lines)


def generate_html_report(report, template_name: str = "report", title: str = "diskbench verification",
                         manager: Optional[TemplateManager] = None) -> str:
    """Render a suite run through a report template.

    The markdown summary becomes the body; the template adds the table.
    """
    manager = manager or TemplateManager()
    template = manager.get_template(template_name)
    rows = _report_rows(report)
    body = markdown.markdown(generate_markdown_report(report, title).split("\n", 2)[-1],
                             extensions=[TableExtension()])
    return template.render(
        title=title,
        suite=report.suite,
        rows=rows,
        failed=[row for row in rows if not row["passed"]],
        passed=sum(1 for row in rows if row["passed"]),
        total=len(rows),
        body=body,
    )
