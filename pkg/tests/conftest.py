import sys

import numpy as np
import pytest

from possim import TNorm, Universe, validate
from possim.oracle import random_valid_model

WORKED_KB = """\
tnorm min
worlds w0 w1 w2
sim { w0 w1 0.8  w0 w2 0.6  w1 w2 0.6 }
prop p = { w0 }
prop q = { w2 }
prop b0 = { w0 }
prop b1 = { w1 }
prop b2 = { w2 }
evidence = { w0 }
partition P = [ b0, b1, b2 ]
"""

BROKEN_KB = """\
tnorm min
worlds w0 w1 w2
sim { w0 w1 0.9  w1 w2 0.9  w0 w2 0.2 }
prop p = { w0 }
evidence = { w0 }
"""

WORKED_MATRIX = [[1.0, 0.8, 0.6], [0.8, 1.0, 0.6], [0.6, 0.6, 1.0]]
BROKEN_MATRIX = [[1.0, 0.9, 0.2], [0.9, 1.0, 0.9], [0.2, 0.9, 1.0]]

NORMS = list(TNorm)


@pytest.fixture
def u3():
    return Universe.of_size(3)


@pytest.fixture
def worked(u3):
    return validate(WORKED_MATRIX, TNorm.MIN, u3)


@pytest.fixture
def worked_text():
    return WORKED_KB


def models(norm, sizes, seeds):
    for n in sizes:
        for seed in seeds:
            yield random_valid_model(seed * 100 + n, n, norm)[1]


def as_prop(universe, mask):
    return universe.all_propositions()[mask]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
