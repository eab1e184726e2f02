"""Tests for the invariant registry."""
import pytest

from diskbench import verify
from diskbench.config import ExperimentConfig
from diskbench.errors import ConfigError, DomainError
from diskbench.models import CheckResult


def test_suites():
    assert verify.suites() == [
        "beltrami", "bloch", "conformal", "dimension", "extremal",
        "levelsets", "main-theorem", "transforms", "variance",
    ]


def test_manifest_covers_every_check():
    rows = verify.build_manifest()
    assert len(rows) == len(verify.REGISTRY)
    assert {row["suite"] for row in rows} == set(verify.suites())
    referenced = " ".join(row["checks"] for row in rows).split()
    assert set(referenced) == set(verify.check_functions())
    assert "goluzin_check" in referenced


def test_manifest_rejects_unreferenced_checks(monkeypatch):
    monkeypatch.setattr(verify, "EXTRA_CHECKS", verify.EXTRA_CHECKS + ("phantom_check",))
    with pytest.raises(ConfigError, match="unreferenced invariant checks: phantom_check"):
        verify.build_manifest()


def test_manifest_rejects_unknown_checks(monkeypatch):
    inv = verify.Invariant("dimension", "ghost", "nothing", lambda config: [], uses=("missing_check",))
    monkeypatch.setitem(verify.REGISTRY, "dimension.ghost", inv)
    with pytest.raises(ConfigError, match="uses unknown checks: missing_check"):
        verify.build_manifest()


def test_duplicate_registration():
    with pytest.raises(ConfigError, match="duplicate invariant dimension.dimension_bound"):
        verify.invariant("dimension", "again", "again")(verify.dimension_bound)


def test_unknown_suite():
    with pytest.raises(ConfigError, match="Unknown suite: nope"):
        verify.run_suite("nope", ExperimentConfig())


def test_dimension_suite_passes():
    report = verify.run_suite("dimension", ExperimentConfig())
    assert report.passed
    records = report.to_records()
    assert len(records) == 3
    assert {r["suite"] for r in records} == {"dimension"}
    assert {r["invariant"] for r in records} == {"dimension bound"}


def test_raising_invariant_is_recorded(monkeypatch, caplog):
    def boom(config):
        raise DomainError("no such radius")

    monkeypatch.setitem(verify.REGISTRY, "dimension.boom", verify.Invariant("dimension", "boom", "raises", boom))
    report = verify.run_suite("dimension", ExperimentConfig())
    assert not report.passed
    boom_failures = [res for inv, res in report.failed if inv.name == "boom"]
    assert len(boom_failures) == 1
    res = boom_failures[0]
    assert res.detail == "error: no such radius"
    assert "invariant dimension.boom raised" in caplog.text


def test_failed_results_are_listed():
    report = verify.SuiteReport("demo")
    inv = verify.Invariant("demo", "demo", "reference", lambda config: [])
    report.results.append((inv, CheckResult("ok", "ref", 1.0, 2.0, True)))
    report.results.append((inv, CheckResult("bad", "ref", 3.0, 2.0, False, "too big")))
    assert not report.passed
    assert [res.name for _, res in report.failed] == ["bad"]


@pytest.mark.slow
@pytest.mark.parametrize("suite", verify.suites())
def test_suite_passes_at_default_config(suite):
    report = verify.run_suite(suite, ExperimentConfig())
    assert report.results
    assert report.passed, [(inv.name, res.name, res.lhs, res.rhs, res.detail) for inv, res in report.failed]
