import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from oracles import FIG2  # noqa: E402

from rankgame import GameParams, StrategyProfile  # noqa: E402


@pytest.fixture
def fig2():
    """Figure-2 caption parameters with f = 0.5."""
    return GameParams(f=0.5, **FIG2)


unit = st.floats(0.0, 1.0, allow_nan=False)
open_unit = st.floats(1e-6, 1 - 1e-6, allow_nan=False)
money = st.floats(1e-3, 100.0, allow_nan=False)

game_params = st.builds(
    GameParams,
    gamma=money,
    r=st.floats(0.0, 0.999, allow_nan=False),
    f=unit,
    alpha=unit,
    beta=st.floats(0.0, 0.999, allow_nan=False),
    l=open_unit,
    v=money,
    w=money,
)
profiles = st.builds(StrategyProfile, unit, unit)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; assert after recording so failures are still listed."""

    def record(number: int, title: str, passed: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
                                + (f" ({detail})" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
