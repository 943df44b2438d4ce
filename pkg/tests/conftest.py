import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fdokit.registry import PidRegistry  # noqa: E402
from fdokit.resources import ENERGY, EXTERNAL, bundled_types  # noqa: E402
from fdokit.toolkit import Toolkit  # noqa: E402

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_RESULTS: dict[int, tuple[str, bool]] = {}


@pytest.fixture(scope="session")
def types():
    return bundled_types()


@pytest.fixture(scope="session")
def fixture_registry():
    registry = PidRegistry()
    registry.load_fixture_set(ENERGY)
    registry.load_fixture_set(EXTERNAL)
    return registry


@pytest.fixture
def toolkit(tmp_path):
    return Toolkit.create(storage_dir=tmp_path / "records")


@pytest.fixture(scope="session")
def shared_toolkit(tmp_path_factory):
    return Toolkit.create(storage_dir=tmp_path_factory.mktemp("shared") / "records")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}")
