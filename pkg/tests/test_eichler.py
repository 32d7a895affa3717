from fractions import Fraction

import mpmath
import pytest

from scripts.cmgreen.errors import DomainError, NotInBoundaryLattice, PathTooClosePole
from scripts.cmgreen.numeric.eichler import (
    CMPoint,
    boundary_decompose,
    decomposition_boundary,
    eichler_lift,
    integration_path,
    reduce_mod_pi_i,
)
from scripts.cmgreen.numeric.green import global_green, orbit_distance_to_i
from scripts.cmgreen.v2 import V2Poly

LIFT_PREC = 128


@pytest.fixture(scope="module")
def tau7():
    return CMPoint(1, 1, 2)


@pytest.fixture(scope="module")
def tau7_lift(tau7):
    return eichler_lift(tau7, LIFT_PREC)


def _target():
    with mpmath.workprec(LIFT_PREC):
        return 8 * mpmath.log(8 - 3 * mpmath.sqrt(7))


def test_cm_points():
    assert CMPoint.from_disc(-7) == CMPoint(1, 1, 2)
    assert CMPoint.from_disc(-4) == CMPoint(1, 0, 1)
    assert CMPoint.from_disc(-8) == CMPoint(1, 0, 2)
    assert CMPoint(1, 1, 2).disc == -7
    with mpmath.workprec(128):
        tau = CMPoint(1, 1, 2).tau(128)
        assert abs(tau - mpmath.mpc(-0.5, mpmath.sqrt(7) / 2)) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("form", [(0, 1, 1), (2, 2, 2), (1, 3, 1), (-1, 1, -2)])
def test_cm_point_rejects_bad_forms(form):
    with pytest.raises(DomainError):
        CMPoint(*form)


def test_from_disc_rejects_non_discriminants():
    with pytest.raises(DomainError):
        CMPoint.from_disc(-5)
    with pytest.raises(DomainError):
        CMPoint.from_disc(8)


def test_decomposition_of_the_tau7_form(tau7):
    p = tau7.boundary_poly()
    assert p == V2Poly(4, 2, 2)
    terms = boundary_decompose(p)
    assert terms == [("S", V2Poly(2, 0, 0)), ("S", V2Poly(0, -1, 0)), ("T", V2Poly(0, -6, 0))]
    assert decomposition_boundary(terms) == p


def test_decomposition_examples():
    assert boundary_decompose(V2Poly(1, 0, 1)) == [("S", V2Poly(1, 0, 0)), ("T", V2Poly(0, -2, 0))]
    assert boundary_decompose(V2Poly()) == []


@pytest.mark.parametrize("variant", [1, 2])
def test_decomposition_reproduces_random_forms(rng, variant):
    for _ in range(50):
        p = V2Poly(rng.randint(-40, 40), 2 * rng.randint(-40, 40), rng.randint(-40, 40))
        assert decomposition_boundary(boundary_decompose(p, variant)) == p


def test_decomposition_refuses_odd_or_fractional_forms():
    with pytest.raises(NotInBoundaryLattice):
        boundary_decompose(V2Poly(0, 1, 0))
    with pytest.raises(NotInBoundaryLattice):
        boundary_decompose(V2Poly(Fraction(1, 2), 0, 0))
    with pytest.raises(DomainError):
        boundary_decompose(V2Poly(1, 0, 1), variant=3)


def test_integration_path_keeps_clear_of_i():
    with mpmath.workprec(64):
        z = mpmath.mpc(-0.5, mpmath.sqrt(7) / 2)
        w = z + 1
        path = integration_path(z, w, 0.2)
        assert path[0] == z and path[-1] == w
        for v in path:
            assert orbit_distance_to_i(v, 64)[0] >= 0.2


def test_integration_path_refuses_endpoints_near_i():
    with pytest.raises(PathTooClosePole):
        integration_path(mpmath.mpc(0.01, 1.01), mpmath.mpc(0.5, 2), 0.2)


def test_reduce_mod_pi_i():
    x = mpmath.mpc(1, 3 * mpmath.pi + 0.25)
    r = reduce_mod_pi_i(x)
    assert abs(r - mpmath.mpc(1, 0.25)) < 1e-12


@pytest.mark.slow
def test_real_part_is_half_the_green_value(tau7, tau7_lift):
    res = global_green(2, tau7.tau(), 1j)
    assert abs(tau7_lift.value.real - res.value / 2) < max(mpmath.mpf("1e-6"), res.tail)


@pytest.mark.slow
def test_lift_matches_the_logarithm(tau7_lift):
    with mpmath.workprec(LIFT_PREC):
        scaled = mpmath.sqrt(28) * tau7_lift.value
        assert abs(reduce_mod_pi_i(scaled - _target())) < 1e-6
    assert tau7_lift.modulus == "πi·Z"
    assert tau7_lift.error < 1e-6


@pytest.mark.slow
def test_lift_is_stable_under_path_perturbation(tau7, tau7_lift):
    moved = eichler_lift(tau7, LIFT_PREC, height_offset=mpmath.mpf("0.5"))
    assert abs(moved.value - tau7_lift.value) < 1e-6


@pytest.mark.slow
def test_lift_does_not_depend_on_the_decomposition(tau7, tau7_lift):
    other = eichler_lift(tau7, LIFT_PREC, variant=2)
    assert other.decomposition != tau7_lift.decomposition
    with mpmath.workprec(LIFT_PREC):
        diff = mpmath.sqrt(28) * (other.value - tau7_lift.value)
        assert abs(reduce_mod_pi_i(diff)) < 1e-6
