import numpy as np
import pytest

from rwl import RadialGrid, make_params


@pytest.fixture
def p7():
    return make_params(7.0, +1)


@pytest.fixture
def p7d():
    return make_params(7.0, -1)


@pytest.fixture
def p9():
    return make_params(9.0, -1)


@pytest.fixture
def grid16():
    return RadialGrid(16.0, 2048)


def gaussian_state(params, grid, amplitude=1.0, width=1.0):
    from rwl.families import gaussian_data
    return gaussian_data(params, grid, amplitude=amplitude, width=width)
