import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from transducers import bundled


@pytest.fixture(scope="session")
def fig1():
    return bundled.comment_stripper()


@pytest.fixture(scope="session")
def fig2left():
    return bundled.increment_lsb_first()


@pytest.fixture(scope="session")
def fig2right():
    return bundled.increment_msb_first()


@pytest.fixture(scope="session")
def fig3():
    return bundled.increment_twoway()


@pytest.fixture(scope="session")
def fig4():
    return bundled.increment_register_copyful()


@pytest.fixture(scope="session")
def fig5():
    return bundled.increment_sst()
