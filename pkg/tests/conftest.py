import math

import numpy as np
import pytest

from qgid.lst import (Convolution, Degenerate, Exponential, LogMixture, MittagLeffler, MLSquared,
                      ScaleArg, Shift)

ACCEPTANCE_LINES = []


def record_acceptance(number, title, passed, detail=""):
    ACCEPTANCE_LINES.append(f"[criterion {number}] {'PASS' if passed else 'FAIL'}  {title}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def _base_spec(rng):
    kind = rng.integers(5)
    if kind == 0:
        return Degenerate(float(rng.uniform(0.1, 3.0)))
    if kind == 1:
        return Exponential(float(rng.uniform(0.1, 5.0)))
    if kind == 2:
        return MittagLeffler(float(rng.uniform(0.1, 1.0)), float(rng.uniform(0.2, 3.0)))
    if kind == 3:
        return MLSquared(float(rng.uniform(0.55, 1.0)))
    return LogMixture()


def random_spec(rng):
    """A catalog description, composites included."""
    kind = rng.integers(8)
    if kind < 5:
        return _base_spec(rng)
    if kind == 5:
        return Shift(float(rng.uniform(0.1, 2.0)), _base_spec(rng))
    if kind == 6:
        return Convolution((_base_spec(rng), _base_spec(rng)))
    return ScaleArg(float(rng.uniform(0.2, 5.0)), _base_spec(rng))


def random_lambda(rng, lo=0.05, hi=10.0):
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
