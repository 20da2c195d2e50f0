import pytest

from ladderlab import algcore
from ladderlab.exactlin import GF


@pytest.fixture(scope="session")
def k():
    return algcore.field_algebra(GF())


@pytest.fixture(scope="session")
def dual():
    return algcore.dual_numbers(GF())


@pytest.fixture(scope="session")
def path_a2():
    return algcore.path_algebra_a2(GF())


@pytest.fixture(scope="session", params=["k", "dual", "pathA2"])
def any_lam(request):
    return algcore.builtin_algebra(request.param, GF())


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(results[num])
