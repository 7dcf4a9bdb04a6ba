import numpy as np
import pytest

from paucsvm.data import Dataset, FprInterval


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def two_scorers():
    """Score table of the two-scorer example: (pos, neg) per scorer."""
    return {
        "f1": (np.array([9.1, 6.8, 6.1, 5.7]), np.array([8.5, 8.1, 4.2, 3.6, 2.3])),
        "f2": (np.array([9.9, 8.7, 3.3, 2.1]), np.array([7.6, 5.3, 4.9, 4.4, 0.8])),
    }


def nonconvex_sample() -> tuple[Dataset, FprInterval]:
    """One positive at the origin, four negatives; j_alpha=1, j_beta=2."""
    neg = np.array([[0.0, -1.0], [-1.0, 0.0], [-1.0, -1.0], [-1.0, -1.0]])
    return Dataset(np.zeros((1, 2)), neg), FprInterval(0.25, 0.5)


def separable_2d(rng, m=15, n=25) -> Dataset:
    pos = rng.normal(0.0, 0.5, (m, 2)) + [2.0, 2.0]
    neg = rng.normal(0.0, 0.5, (n, 2)) - [2.0, 2.0]
    return Dataset(pos, neg)


def overlapping(rng, m=20, n=40, d=3, shift=0.7) -> Dataset:
    return Dataset(rng.normal(shift, 1.0, (m, d)), rng.normal(0.0, 1.0, (n, d)))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" or "test_acceptance.py" not in rep.nodeid:
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], outcome.upper()[:4], props.get("detail", "")))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for crit, status, detail in sorted(lines, key=lambda t: int(t[0].split(".")[0])):
        terminalreporter.write_line(f"[{status}] {crit}: {detail}")
