import json
import time
from pathlib import Path

import numpy as np
import pytest

from hamming_ib import HammingParams, critical_rate
from hamming_ib.oracle import SearchConfig, tightness_check

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def pinned():
    return json.loads((FIXTURES / "pinned.json").read_text())


@pytest.fixture(scope="session")
def p31():
    return HammingParams(3, 0.1)


@pytest.fixture(scope="session")
def tightness_run(p31):
    """The expensive 64-restart search at R_c / 2, shared across modules.

    Returns ``(report, seconds)``.
    """
    t0 = time.perf_counter()
    report = tightness_check(p31, critical_rate(p31).R_c / 2, SearchConfig())
    return report, time.perf_counter() - t0


@pytest.fixture(scope="session")
def tightness_report(tightness_run):
    return tightness_run[0]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
