import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from abelaffine.catalog import load_catalog  # noqa: E402


@pytest.fixture(scope="session")
def cat():
    return load_catalog()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, title, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
