import os
from pathlib import Path
from typing import Generator, List

import numpy as np
import pytest
from pytest import MonkeyPatch

from memrc.models.audio import AudioClip
from tests.fakedata.audio import fake_clips, write_fake_fsdd


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run acceptance-scale tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def default_env_vars() -> dict[str, str]:
    """
    Defines default environment variables for the test session.

    It can be overridden in submodule scoped `conftest.py` files or directly in tests.
    """
    return {
        "ENVIRONMENT": "test",
        "MEMRC_LOG_FORMAT": "pretty",
    }


@pytest.fixture()
def mock_env(
    monkeypatch: MonkeyPatch, request: pytest.FixtureRequest, default_env_vars: dict[str, str]
) -> Generator[None, None, None]:
    """
    Temporarily sets environment variables for testing, either the defaults from
    `default_env_vars` or those overridden by test-specific parameters.
    """
    envvars = default_env_vars.copy()
    if hasattr(request, "param") and isinstance(request.param, dict):
        envvars.update(request.param)
    for key, value in envvars.items():
        monkeypatch.setenv(key, value)
    monkeypatch.delenv("MEMRC_DATA", raising=False)
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def tone_clips() -> List[AudioClip]:
    return fake_clips()


@pytest.fixture
def fsdd_dir(tmp_path: Path, tone_clips: List[AudioClip]) -> Path:
    """A small FSDD-shaped directory of synthetic tone recordings."""
    return write_fake_fsdd(tmp_path / "recordings", tone_clips)


@pytest.fixture
def fsdd_root() -> Path:
    """The real dataset, for acceptance runs."""
    data = os.environ.get("MEMRC_DATA")
    if not data:
        pytest.skip("MEMRC_DATA is not set")
    return Path(data)
