import numpy as np
import pytest

from polymetric import (
    Affine,
    Box,
    ContractionMap,
    Coordinatewise,
    CosineForm,
    Euclidean,
    Metric,
    MultiMetricSpace,
    Piecewise,
)

# cos fixed point: 200 iterations of cos from 0.5 at 50 significant digits (mpmath);
# recomputed in test_fixedpoint.py::test_dottie_oracle_is_current
DOTTIE = 0.73908513321516064165531208767387339383178871277023


class SquaredEuclidean(Metric):
    """Not a metric: violates the triangle inequality. Negative control only."""

    def _batch(self, X, Y):
        return np.sum((X - Y) ** 2, axis=1)


def interval_space(*bounds, metric=None):
    metric = metric or Euclidean()
    return MultiMetricSpace.build(1, [(Box.interval(lo, hi), metric) for lo, hi in bounds])


def scalar_map(a, b, **kw):
    return ContractionMap(Affine.scalar(a, b), **kw)


@pytest.fixture
def unit_space():
    return interval_space((0, 1))


@pytest.fixture
def two_intervals():
    return interval_space((0, 1), (2, 3))


@pytest.fixture
def cos_map():
    return ContractionMap(Coordinatewise((CosineForm(),)))


@pytest.fixture
def split_map():
    """x/2 on [0,1], (x+2.5)/2 on [2,3]: fixed points 0 and 2.5."""
    return ContractionMap(Piecewise(((1, Affine.scalar(0.5, 0.0)), (2, Affine.scalar(0.5, 1.25)))))


@pytest.fixture
def routed_map():
    """x/2 on [0,1], (x-2)/2 on [2,3]; [2,3] is routed into [0,1]."""
    return ContractionMap(Piecewise(((1, Affine.scalar(0.5, 0.0)), (2, Affine.scalar(0.5, -1.0)))))


# --- acceptance reporting ------------------------------------------------------------

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion.

    Usage: ``criterion("AC1", "description", passed, detail)``; the line is
    printed immediately and repeated in the terminal summary.
    """
    import time

    start = time.perf_counter()

    def record(tag, text, passed, detail=""):
        elapsed = time.perf_counter() - start
        line = f"[{'PASS' if passed else 'FAIL'}] {tag} {text} ({detail}; {elapsed:.2f}s)"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return elapsed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
