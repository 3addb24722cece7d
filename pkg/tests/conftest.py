import pytest

from hbforge.poly import Field, PolyRing

# criterion number -> (title, outcome)
CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = CRITERIA.get(n, (title, "PASS"))[1]
        status = "PASS" if rep.outcome == "passed" and prev == "PASS" else "FAIL"
        CRITERIA[n] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, status = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}")
        for text in NOTES.get(n, []):
            terminalreporter.write_line(f"              {text}")


@pytest.fixture
def R():
    return PolyRing("x,y,z", Field())


@pytest.fixture
def RQ():
    return PolyRing("x,y,z", Field("Q"))


# every minimal resolution built during the session, for the identity audit
RESOLUTION_LOG = []


@pytest.fixture(scope="session", autouse=True)
def record_resolutions():
    from hbforge.resolutions import RESOLUTION_OBSERVERS

    def observe(source, res):
        RESOLUTION_LOG.append((source, res))

    RESOLUTION_OBSERVERS.append(observe)
    yield RESOLUTION_LOG
    RESOLUTION_OBSERVERS.remove(observe)


NOTES = {}


@pytest.fixture
def note():
    def add(n, text):
        NOTES.setdefault(n, []).append(text)

    return add
