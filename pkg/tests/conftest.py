import random

import pytest

from scripts.cmgreen.cycles.endomorphism import CurveParams, Endomorphism
from scripts.cmgreen.hypercover.branches import make_branches
from scripts.cmgreen.hypercover.hyperforms import make_omega_eta
from scripts.cmgreen.tool import default_order


@pytest.fixture(scope="session")
def order():
    return default_order


@pytest.fixture(scope="session")
def branches(order):
    return make_branches(order)


@pytest.fixture(scope="session")
def omega_eta(order):
    return make_omega_eta(order)


@pytest.fixture(scope="session")
def tau7_endo():
    return Endomorphism.builtin("tau7").validate()


@pytest.fixture(scope="session")
def curve_tau7():
    return CurveParams(-35, -98)


@pytest.fixture
def rng():
    return random.Random(20261017)
