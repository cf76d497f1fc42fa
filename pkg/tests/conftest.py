import pytest

from helpers import plant_model


@pytest.fixture
def plant():
    return plant_model()
