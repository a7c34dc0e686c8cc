import numpy as np
import pytest

from convexhyper import Ball, Polytope, make_grid_2d, make_grid_3d


@pytest.fixture(scope="session")
def grid2():
    return make_grid_2d(2048)


@pytest.fixture(scope="session")
def grid3():
    return make_grid_3d(64, 128)


@pytest.fixture(scope="session")
def grid3_small():
    return make_grid_3d(32, 64)


@pytest.fixture(scope="session")
def square():
    return Polytope([[1, 1], [-1, 1], [-1, -1], [1, -1]])


@pytest.fixture(scope="session")
def cube():
    return Polytope([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)])


@pytest.fixture(scope="session")
def unit_ball_2d():
    return Ball(np.zeros(2), 1.0)


@pytest.fixture(scope="session")
def unit_ball_3d():
    return Ball(np.zeros(3), 1.0)
