import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance[name] = "PASS" if report.passed else "FAIL"
    elif report.failed:
        _acceptance[name] = "FAIL"
    elif report.when == "setup" and report.skipped:
        _acceptance[name] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        label = name.removeprefix("test_")
        terminalreporter.write_line(f"ACCEPTANCE {label}: {_acceptance[name]}")
