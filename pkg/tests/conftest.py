import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("repo", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def corpus():
    from lipquo.suite import corpus_maps

    return corpus_maps("extended", 0)


@pytest.fixture(scope="session")
def cubic(corpus):
    return corpus["z^3-3z"]


@pytest.fixture(scope="session")
def square(corpus):
    return corpus["z^2"]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
