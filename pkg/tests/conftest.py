import json
import sys
from importlib import resources

import pytest

from hka.polygraph import Polygraph


def fixture_path(name):
    return str(resources.files("hka") / "fixtures" / f"{name}.json")


def load(name):
    return Polygraph.from_spec(fixture_path(name))


def spec(name):
    return json.loads((resources.files("hka") / "fixtures" / f"{name}.json").read_text())


@pytest.fixture(scope="session")
def kite():
    return load("kite")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
