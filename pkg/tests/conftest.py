import os

import pytest
from hypothesis import HealthCheck, settings

from catmod import config

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", parent=settings.get_profile("repo"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


@pytest.fixture(autouse=True)
def _default_caps(monkeypatch):
    # tests run against the built-in caps regardless of the caller's env
    monkeypatch.delenv(config.ENV_VAR, raising=False)
    config.set_caps(None)
    yield
    config.set_caps(None)


@pytest.fixture(scope="session")
def corpus():
    from catmod.fixtures import corpus as build

    return build()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
