from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

from upb.corpus import fixtures  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return fixtures()


# acceptance criteria report their verdicts here; printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    def order(name: str):
        head = name.split(".")[0]
        return int(head.rstrip("abcdefgh")), head

    for name in sorted(ACCEPTANCE, key=order):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
