import pytest

from uuvplan.gridworld import build_map


@pytest.fixture
def empty2d():
    return build_map((10, 10))


@pytest.fixture
def empty3d():
    return build_map((10, 10, 10))
