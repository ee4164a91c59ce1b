import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from qkernel.qcore import QContext  # noqa: E402


@pytest.fixture
def exact_ctx():
    return QContext.exact(Fraction(1, 2))


@pytest.fixture
def exact_third():
    return QContext.exact(Fraction(1, 3))


@pytest.fixture
def float_ctx():
    return QContext.floating(0.5)


@pytest.fixture
def clean_env(monkeypatch):
    for name in ("QKERNEL_MAX_TERMS", "QKERNEL_SEED"):
        monkeypatch.delenv(name, raising=False)
    return monkeypatch
