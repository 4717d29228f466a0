import pytest

_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def criterion(request):
    """Run one acceptance check, record its verdict and re-raise any failure."""
    results = request.config.stash[_RESULTS]

    def run(number, check):
        try:
            detail = check()
        except Exception as exc:
            line = f"criterion {number}: FAIL {type(exc).__name__}: {exc}"
            results.append(line)
            print(line)
            raise
        line = f"criterion {number}: PASS {detail}"
        results.append(line)
        print(line)

    return run


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for line in sorted(results, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
