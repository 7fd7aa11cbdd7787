import numpy as np
import pytest

from volprod import catalog


@pytest.fixture(scope="session")
def triangle():
    return catalog.triangle()


@pytest.fixture(scope="session")
def square():
    return catalog.square()


@pytest.fixture(scope="session")
def tet():
    return catalog.tetrahedron()


@pytest.fixture(scope="session")
def cube():
    return catalog.cube()


@pytest.fixture(scope="session")
def octa():
    return catalog.octahedron()


@pytest.fixture(scope="session")
def gon64():
    return catalog.regular_polygon(64)


def random_matrix(rng, dim):
    """Random linear map with |det| in [0.1, 10]."""
    while True:
        M = rng.normal(size=(dim, dim))
        det = abs(np.linalg.det(M))
        if det < 1e-3:
            continue
        target = 10.0 ** rng.uniform(-1.0, 1.0)
        return M * (target / det) ** (1.0 / dim)
