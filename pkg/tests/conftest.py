import numpy as np
import pytest

# Worked examples, transcribed independently of phaselab.selftest.
A5x3 = np.array([[1, 2, 3], [1, -1, 1], [2, 1, 4], [1, 2, 1], [2, -1, 1]])
X_REF = np.array([1, 1, 9])
Y_COLL = np.array([19, 7, -21])

X1 = np.array([4.5, 9, 0.5, 1], dtype=complex)
X2 = np.array([1.5, 3 + 4j, 1.5 + 8j, 3])
X3 = np.array([1.5, 3 - 4j, 1.5 - 8j, 3])
X4 = np.array([9, 4.5, 1, 0.5], dtype=complex)
QUAD = (X1, X2, X3, X4)
QUAD_ROOTS = (
    (3j, -3j, -0.5),
    (1j / 3, -3j, -0.5),
    (3j, -1j / 3, -0.5),
    (3j, -3j, -2),
)
QUAD_ACORR = np.array([205 / 2, 91 / 2, 45 / 4, 9 / 2])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def match_roots(got, want, tol):
    got = list(np.asarray(got, dtype=complex))
    assert len(got) == len(want)
    for w in want:
        d = [abs(g - w) for g in got]
        k = int(np.argmin(d))
        assert d[k] <= tol, (w, got)
        got.pop(k)


# Acceptance reporting: tests marked ``criterion("name")`` get one
# PASS/FAIL line each in the terminal summary.
_CRITERIA: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    name = mark.args[0]
    status = "FAIL" if rep.failed else "PASS"
    if _CRITERIA.get(name) != "FAIL":
        _CRITERIA[name] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        terminalreporter.write_line(f"{_CRITERIA[name]}  {name}")
