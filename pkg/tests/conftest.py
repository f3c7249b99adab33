import pytest

from otfgen import iostats
from otfgen.fixtures import write_fixture_store
from otfgen.profiles import profile_allocations


@pytest.fixture(autouse=True)
def _clean_counters():
    iostats.reset()
    profile_allocations.reset()
    yield


@pytest.fixture
def mini_manifest(tmp_path):
    """Small on-disk store: 3 seeds + 4 noises, 240 samples."""
    return write_fixture_store(tmp_path / "store", n_seeds=3, n_noises=4,
                               length=240, resolution_seconds=360)


@pytest.fixture(scope="session")
def desk_manifest(tmp_path_factory):
    """The full desk-scale store: 10 seeds + 20 noises, one day at 1 s."""
    root = tmp_path_factory.mktemp("desk-store")
    return write_fixture_store(root, n_seeds=10, n_noises=20,
                               length=86400, resolution_seconds=1)
