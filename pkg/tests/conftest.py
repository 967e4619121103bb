import os
from pathlib import Path

import numpy as np
import pytest

from tbsgame.model import GameParams

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    parser.addoption("--vcdb-snapshot", default=os.environ.get("VCDB_SNAPSHOT"),
                     help="directory holding a 2016 VCDB snapshot (JSON files)")


@pytest.fixture
def vcdb_snapshot(request):
    path = request.config.getoption("--vcdb-snapshot")
    if not path:
        pytest.skip("no VCDB snapshot supplied (--vcdb-snapshot or VCDB_SNAPSHOT)")
    return Path(path)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def base_params():
    return GameParams(p=3, d=10, r=1, c_D=2, c_k=5, c_A=0.5)


def random_params(rng: np.random.Generator, costs: bool = True) -> GameParams:
    p, d, r = rng.uniform(0.5, 10), rng.uniform(0.5, 20), rng.uniform(0.1, 5)
    if not costs:
        return GameParams(p, d, r)
    return GameParams(p, d, r, rng.uniform(0, 10), rng.uniform(0, 10),
                      rng.uniform(0, 2))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance verdict line; all lines reprint at session end."""
    def _report(criterion: str, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
