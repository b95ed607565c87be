import shutil
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lassosynth import corpus  # noqa: E402
from lassosynth.program import parse_program  # noqa: E402

HAVE_Z3 = shutil.which("z3") is not None

needs_z3 = pytest.mark.skipif(not HAVE_Z3, reason="z3 executable not on PATH")


@pytest.fixture
def load():
    return corpus.load


PRODUCT_SRC = """\
problem product
vars x0 y0 y s
stem: s = 0, y = y0
transition t: y' = y - 1, s' = s + x0
exit: y = 0
"""


@pytest.fixture
def product():
    return parse_program(PRODUCT_SRC)


SLOW_ENV = "LASSOSYNTH_SLOW"


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False,
                     help="run the long solver benchmarks (also enabled by $LASSOSYNTH_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    import os
    if config.getoption("--run-slow") or os.environ.get(SLOW_ENV) == "1":
        return
    skip = pytest.mark.skip(reason="slow benchmark; use --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, printed after the run
CRITERIA: dict[str, list] = {}


def record_criterion(key: str, title: str, ok: bool, detail: str = "") -> None:
    entry = CRITERIA.setdefault(key, [title, True, []])
    entry[1] = entry[1] and ok
    if detail:
        entry[2].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda k: [int(p) if p.isdigit() else p for p in k.split(".")]):
        title, ok, details = CRITERIA[key]
        line = f"{'PASS' if ok else 'FAIL'}  criterion {key}: {title}"
        if details:
            line += "  [" + "; ".join(details) + "]"
        terminalreporter.write_line(line)
