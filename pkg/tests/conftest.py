from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from fdtopo.fd import AttributeUniverse, FunctionalDependency

FIXTURES = Path(str(resources.files("fdtopo") / "fixtures"))


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def set_closure(x: set[str], fds: list[tuple[set[str], str]]) -> set[str]:
    """Plain set-based fixpoint, kept independent of the bitset implementation."""
    out = set(x)
    grew = True
    while grew:
        grew = False
        for lhs, rhs in fds:
            if lhs <= out and rhs not in out:
                out.add(rhs)
                grew = True
    return out


def as_sets(fds: list[FunctionalDependency]) -> list[tuple[set[str], str]]:
    return [(set(f.lhs.names), f.universe.names[f.rhs]) for f in fds]


@pytest.fixture
def abcd() -> AttributeUniverse:
    return AttributeUniverse(("A", "B", "C", "D"))


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
