import numpy as np
import pytest

from limitlab.geometry import InteriorPoint
from limitlab.groups import Circle, punctured_torus_group, schottky_group


def ortho_circle(mu, halfwidth):
    """Boundary circle of the H^2 half-plane with arc (mu - w, mu + w) on S^1."""
    return Circle(complex(np.exp(1j * mu) / np.cos(halfwidth)), float(np.tan(halfwidth)))


def fuchsian_schottky(halfwidth=0.7):
    """Rank-2 Fuchsian Schottky: four arcs at the cardinal angles, opposite pairing."""
    return schottky_group(
        [
            (ortho_circle(0.0, halfwidth), ortho_circle(np.pi, halfwidth)),
            (ortho_circle(np.pi / 2, halfwidth), ortho_circle(3 * np.pi / 2, halfwidth)),
        ],
        dimension=1,
    )


def plane_schottky(radius=0.25):
    """The classical four-circle Schottky on the Riemann sphere (n = 2)."""
    return schottky_group(
        [
            (Circle(0.6, radius), Circle(-0.6, radius)),
            (Circle(0.6j, radius), Circle(-0.6j, radius)),
        ],
        dimension=2,
    )


@pytest.fixture(scope="session")
def schottky_n1():
    return fuchsian_schottky()


@pytest.fixture(scope="session")
def schottky_n2():
    return plane_schottky()


@pytest.fixture(scope="session")
def torus_fuchsian():
    return punctured_torus_group(3.0)


@pytest.fixture(scope="session")
def torus_deformed():
    return punctured_torus_group(3.0 + 0.1j)


@pytest.fixture(scope="session")
def measure_basepoints():
    """Canonical eye point and orbit basepoint for the measure suites."""
    return InteriorPoint.origin(1), InteriorPoint.from_ball([0.08, 0.03])
