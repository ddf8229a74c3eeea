import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        status = "PASS" if report.passed else "FAIL"
        _criteria.append(f"{status}  {props['criterion']}  ({props.get('detail', '')})")


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in _criteria:
            terminalreporter.write_line(line)
