import shutil
from pathlib import Path

import pytest
from hypothesis import settings

from emorole import CorpusStore, PipelineConfig
from emorole.resources import load_default_lexicons, load_default_ruleset

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_store_path() -> Path:
    return FIXTURES / "store"


@pytest.fixture(scope="session")
def lexicons():
    return load_default_lexicons()


@pytest.fixture(scope="session")
def config():
    return PipelineConfig()


@pytest.fixture(scope="session")
def ruleset(lexicons, config):
    return load_default_ruleset(lexicons, config)


@pytest.fixture(scope="session")
def corpus(fixture_store_path):
    """Read-only store over the checked-in fixtures."""
    return CorpusStore(fixture_store_path)


@pytest.fixture()
def scratch_store(fixture_store_path, tmp_path):
    """A throwaway copy of the fixture corpus for tests that write."""
    target = tmp_path / "store"
    shutil.copytree(fixture_store_path, target)
    return CorpusStore(target)
