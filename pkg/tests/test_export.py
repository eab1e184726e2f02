"""Tests for table writers and reports."""
import io
import json
import math

import numpy as np
import pytest

from diskbench.errors import ConfigError
from diskbench.export import (
    format_value,
    generate_html_report,
    generate_markdown_report,
    write_plot_data,
    write_rows,
)
from diskbench.models import CheckResult
from diskbench.verify import Invariant, SuiteReport


@pytest.fixture
def report():
    inv = Invariant("demo", "demo invariant", "a reference", lambda config: [])
    report = SuiteReport("demo")
    report.results.append((inv, CheckResult("holds", "first bound", 1.0, 2.0, True)))
    report.results.append((inv, CheckResult("breaks", "second bound", 3.0, 2.5, False, "r=0.9")))
    return report


@pytest.mark.parametrize("value,text", [
    (True, "true"),
    (np.bool_(False), "false"),
    (3, "3"),
    (np.int64(7), "7"),
    (0.1, "0.1"),
    (np.float64(1e-20), "1e-20"),
    (math.inf, "inf"),
    (1 + 2j, "1.0+2.0j"),
    (complex(1.0, -0.0), "1.0-0.0j"),
    (None, ""),
    ("mu0", "mu0"),
])
def test_format_value(value, text):
    assert format_value(value) == text


def test_csv_rows():
    stream = io.StringIO()
    count = write_rows([{"a": 1, "b": 0.5}, {"a": 2, "c": "ignored"}], ["a", "b"], stream)
    assert count == 2
    assert stream.getvalue() == "a,b\r\n1,0.5\r\n2,\r\n"


def test_csv_quotes_commas():
    stream = io.StringIO()
    write_rows([{"detail": "k=0.1, r=0.9"}], ["detail"], stream)
    assert stream.getvalue() == 'detail\r\n"k=0.1, r=0.9"\r\n'


def test_jsonl_rows():
    stream = io.StringIO()
    rows = [{"z": 1 + 2j, "x": math.inf, "n": np.int64(4), "ok": np.bool_(True)}]
    assert write_rows(rows, ["z", "x", "n", "ok"], stream, "jsonl") == 1
    line = stream.getvalue()
    assert line.endswith("\n")
    assert json.loads(line) == {"z": "1.0+2.0j", "x": "inf", "n": 4, "ok": True}


def test_unknown_format():
    with pytest.raises(ConfigError, match="Unsupported output format: xml"):
        write_rows([], ["a"], io.StringIO(), "xml")


def test_plot_data(tmp_path):
    path = tmp_path / "curve.dat"
    write_plot_data(str(path), [0.5, 1.0], [2.0, 3.25])
    assert path.read_text() == "0.5 2.0\n1.0 3.25\n"
    with pytest.raises(ConfigError, match="same length"):
        write_plot_data(str(path), [0.5], [])


def test_markdown_report(report):
    text = generate_markdown_report(report)
    assert text.startswith("# diskbench verification")
    assert "Suite `demo`: 1 of 2 checks passed." in text
    assert "## Failed checks" in text
    assert "| demo invariant | second bound | 3.0 | 2.5 | r=0.9 |" in text


def test_html_report(report):
    html = generate_html_report(report)
    assert "<title>diskbench verification</title>" in html
    assert "1 of 2 checks passed" in html
    assert 'class="fail"' in html
    assert "<table>" in html
    summary = generate_html_report(report, "summary", title="nightly")
    assert "<h1>nightly</h1>" in summary
    assert "demo invariant: second bound (r=0.9)" in summary


def test_html_report_unknown_template(report):
    with pytest.raises(ConfigError, match="Template 'fancy' not found"):
        generate_html_report(report, "fancy")
