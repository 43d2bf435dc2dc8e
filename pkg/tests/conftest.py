import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def brute_cross_cov(x, y, k):
    """Textbook double loop: (1/T) sum over t of (x_t - xbar)(y_{t-k} - ybar)."""
    T = len(x)
    mx = sum(x) / T
    my = sum(y) / T
    acc = 0.0
    for t in range(T):
        s = t - k
        if 0 <= s < T:
            acc += (x[t] - mx) * (y[s] - my)
    return acc / T


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
