import numpy as np
import pytest

from rde.benchmarks import ObjectiveFunction, sphere


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class CountingProblem(ObjectiveFunction):
    """Wraps a problem and counts every objective evaluation."""

    def __init__(self, inner: ObjectiveFunction):
        super().__init__(inner.name, inner.D, inner.base, inner.lower, inner.upper,
                         inner.shift, inner.rotation, inner.f_opt, inner.bias)
        self.calls = 0
        self.batches: list[int] = []
        self.best_seen = np.inf

    def evaluate_batch(self, X):
        self.calls += np.asarray(X).shape[0]
        self.batches.append(np.asarray(X).shape[0])
        f = super().evaluate_batch(X)
        self.best_seen = min(self.best_seen, float(f.min()))
        return f


@pytest.fixture
def counting():
    return CountingProblem


@pytest.fixture
def sphere10():
    return ObjectiveFunction("sphere", 10, sphere)


# --- acceptance reporting ---------------------------------------------------

_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[num] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[num]
        line = f"criterion {num:>2} {status}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
