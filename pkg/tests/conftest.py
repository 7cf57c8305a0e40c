import pytest

from weilstar.bundle import LagrangianBundle
from weilstar.fields import FiniteField
from weilstar.rings import TruncatedPolynomialRing
from weilstar.symplectic import SelfDualModule, enumerate_lagrangians


@pytest.fixture(scope="session")
def f3():
    return FiniteField(3)


@pytest.fixture(scope="session")
def f5():
    return FiniteField(5)


@pytest.fixture(scope="session")
def f9():
    return FiniteField(3, 2, (1, 0, 1))


@pytest.fixture(scope="session")
def a1(f3):
    return TruncatedPolynomialRing(f3, 1, "identity")


@pytest.fixture(scope="session")
def a3(f3):
    return TruncatedPolynomialRing(f3, 3, "negate_x")


@pytest.fixture(scope="session")
def a5(f3):
    return TruncatedPolynomialRing(f3, 5, "negate_x")


@pytest.fixture(scope="session")
def mod1(a1):
    return SelfDualModule(a1)


@pytest.fixture(scope="session")
def mod3(a3):
    return SelfDualModule(a3)


@pytest.fixture(scope="session")
def tab1(mod1):
    return enumerate_lagrangians(mod1)


@pytest.fixture(scope="session")
def tab3(mod3):
    return enumerate_lagrangians(mod3)


@pytest.fixture(scope="session")
def bun1(tab1):
    return LagrangianBundle(tab1)


@pytest.fixture(scope="session")
def bun3(tab3):
    return LagrangianBundle(tab3)
