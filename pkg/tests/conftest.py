from __future__ import annotations

import pytest

from tesischat.sampledata import build_fixture_db


@pytest.fixture()
def fixture_db(tmp_path):
    """Curated corpus database: exactly 10 theses approved in 2022."""
    db_path = tmp_path / "tesis.db"
    build_fixture_db(db_path)
    return db_path


_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, outcome in _acceptance_results:
        label = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"  {label}  {name}")
