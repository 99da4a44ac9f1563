"""Shared fixtures: the built-in Coxeter systems and their Hecke algebras."""

import pytest

from bmsheaves.hecke import HeckeAlgebra
from bmsheaves.presets import preset_system


@pytest.fixture(scope="session")
def a1():
    return preset_system("A1")


@pytest.fixture(scope="session")
def a2():
    return preset_system("A2")


@pytest.fixture(scope="session")
def a3():
    return preset_system("A3")


@pytest.fixture(scope="session")
def b2():
    return preset_system("B2")


@pytest.fixture(scope="session")
def g2():
    return preset_system("G2")


@pytest.fixture(scope="session")
def u2():
    return preset_system("U2")


@pytest.fixture(scope="session")
def u3():
    return preset_system("U3")


@pytest.fixture(scope="session")
def a2_alg(a2):
    return HeckeAlgebra(a2)


@pytest.fixture(scope="session")
def a3_alg(a3):
    return HeckeAlgebra(a3)


@pytest.fixture(scope="session")
def b2_alg(b2):
    return HeckeAlgebra(b2)


@pytest.fixture(scope="session")
def g2_alg(g2):
    return HeckeAlgebra(g2)


@pytest.fixture(scope="session")
def u2_alg(u2):
    return HeckeAlgebra(u2)


@pytest.fixture(scope="session")
def u3_alg(u3):
    return HeckeAlgebra(u3)
