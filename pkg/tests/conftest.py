from __future__ import annotations

import pytest

from nustable import Instance

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def all_kind(kind: str) -> Instance:
    return Instance.build(2, 2, [(u, w, kind, 1, 1) for u in range(2) for w in range(2)])


@pytest.fixture
def i1() -> Instance:
    """One SUPER edge a-b."""
    return Instance.build(1, 1, [(0, 0, "super", 1, 1)], ["a"], ["b"])


@pytest.fixture
def i2() -> Instance:
    """2x2 complete, all tied, all SUPER: no stable matching."""
    return all_kind("super")


@pytest.fixture
def i3() -> Instance:
    """2x2 complete, all tied, all STRONG: both perfect matchings stable."""
    return all_kind("strong")


@pytest.fixture
def strict22() -> Instance:
    """m1: w1 > w2, m2: w2 > w1, w1: m2 > m1, w2: m1 > m2, all SUPER.

    Edge ids: 0 = m1w1, 1 = m1w2, 2 = m2w1, 3 = m2w2.
    """
    return Instance.build(
        2,
        2,
        [
            (0, 0, "super", 1, 2),
            (0, 1, "super", 2, 1),
            (1, 0, "super", 2, 1),
            (1, 1, "super", 1, 2),
        ],
    )


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {detail}")
