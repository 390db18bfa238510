import numpy as np
import pytest

from nhsiegel.samples import (
    constant_form,
    e2_star,
    eisenstein4,
    eisenstein6,
    synthetic_sym2,
    zero_form,
)


@pytest.fixture(scope="session")
def e4_package():
    return eisenstein4()


@pytest.fixture(scope="session")
def e6_package():
    return eisenstein6()


@pytest.fixture(scope="session")
def e2star_package():
    return e2_star()


@pytest.fixture(scope="session")
def sym2_package():
    return synthetic_sym2()


@pytest.fixture(scope="session")
def constant_package():
    return constant_form(2.0 - 1.0j)


@pytest.fixture(scope="session")
def zero_package():
    return zero_form()


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
