import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from coxrep.geometry import ReflectionTable  # noqa: E402
from coxrep.presets import PRESET_NAMES, load_preset  # noqa: E402


@pytest.fixture(scope="session")
def presets():
    return {name: load_preset(name) for name in PRESET_NAMES}


@pytest.fixture(params=PRESET_NAMES)
def preset(request):
    return load_preset(request.param)


@pytest.fixture(scope="session")
def iinf():
    return load_preset("iinf").group()


@pytest.fixture(scope="session")
def a2():
    return load_preset("a2").group()


def table_for(group, radius):
    return ReflectionTable.from_ball(group.enumerate_ball(radius), group)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
