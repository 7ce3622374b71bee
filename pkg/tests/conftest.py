import pytest

from sidedress import fixtures as fx
from sidedress.agronomy import prescribe_field


@pytest.fixture(scope="session")
def calibrated_field():
    return fx.calibrated_field()


@pytest.fixture(scope="session")
def calibrated_prescription(calibrated_field):
    return prescribe_field(calibrated_field)
