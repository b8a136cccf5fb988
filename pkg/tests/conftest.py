import numpy as np
import pytest

from voxtopo.volume import VoxelVolume


def random_sparse(rng, max_dim=32, density=None):
    """Random tight volume with dims <= max_dim and at least one voxel."""
    dims = rng.integers(1, max_dim + 1, size=3)
    p = density if density is not None else rng.uniform(0.02, 0.5)
    grid = rng.random(tuple(dims)) < p
    if not grid.any():
        grid.flat[rng.integers(grid.size)] = True
    origin = rng.integers(-1000, 1000, size=3)
    return VoxelVolume(grid, origin).cropped()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# one PASS/FAIL line per acceptance criterion, collected from tests marked
# with @pytest.mark.criterion(number, title)
_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, [title, True, 0])
    entry[1] = entry[1] and not rep.failed
    entry[2] += rep.when == "call"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, runs = _criteria[number]
        verdict = "PASS" if ok and runs else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
