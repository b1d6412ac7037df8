import pytest

from realterm.cli import parse_polynomial
from realterm.link_topology import SurfaceDescriptor

# criterion id -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def P():
    return parse_polynomial


@pytest.fixture(scope="session")
def D():
    return SurfaceDescriptor.parse


def record(cid: int, title: str, passed: bool, detail: str = "") -> None:
    ACCEPTANCE[cid] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[cid]
        line = f"[{'PASS' if ok else 'FAIL'}] {cid:2d}. {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
