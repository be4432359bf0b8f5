import pytest

from annulus_harmonics.cross_product import AnnulusGeometry


@pytest.fixture(scope="session")
def geom2():
    return AnnulusGeometry(2.0)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, ok, detail in sorted(mod.RESULTS):
        terminalreporter.write_line(f"{n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
