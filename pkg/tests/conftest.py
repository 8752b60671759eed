"""Shared fixtures and the per-criterion summary for the acceptance suite."""
import re

import pytest

# criterion number -> (outcome, detail); filled by test_acceptance.py
ACCEPTANCE = {}
_DETAILS = {}


def note(criterion: int, detail: str):
    """Attach a one-line measurement to an acceptance criterion."""
    _DETAILS[criterion] = detail


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = re.match(r"test_criterion_(\d+)_", item.name)
    if m and item.module.__name__.endswith("test_acceptance"):
        n = int(m.group(1))
        if rep.when == "call" or (rep.when == "setup" and rep.failed):
            ACCEPTANCE[n] = ("PASS" if rep.passed else "FAIL", item.name)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, name = ACCEPTANCE[n]
        detail = _DETAILS.get(n, "")
        terminalreporter.write_line(f"criterion {n}: {status}  {name}" + (f"  [{detail}]" if detail else ""))
