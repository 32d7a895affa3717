from fractions import Fraction

import pytest

from scripts.cmgreen.errors import NonInvertibleLead
from scripts.cmgreen.exact.scalars import I
from scripts.cmgreen.exact.wpoly import QMPoly, WeightedPoly, as_weighted
from scripts.cmgreen.weierstrass import A, B, E2, discriminant_poly, mu

E4, E6 = QMPoly.e4(), QMPoly.e6()


def test_serre_derivation_on_generators():
    assert A.delta_s() == 6 * B
    assert B.delta_s() == A * A * Fraction(-4, 3)
    assert E2.delta_s() == E2 * E2 * Fraction(-1, 12) + 4 * A


def test_euler_derivation_scales_by_weight():
    p = A * A * B + 3 * B
    assert p.delta_e() == 14 * A * A * B + 18 * B
    assert WeightedPoly.const(1).delta_e() == 0


def test_weights():
    assert (A ** 3).weight() == 12
    assert (A ** 3 + B ** 2).is_homogeneous()
    assert (A + B).weight() is None


def test_laurent_in_b_only():
    assert (A / B) * B == A
    assert (I * B).inverse() * B == -I
    with pytest.raises(NonInvertibleLead):
        A.inverse()
    with pytest.raises(NonInvertibleLead):
        (A + B).inverse()


def test_evaluate():
    assert (A * A / 75).evaluate(a=-35, b=-98) == Fraction(49, 3)
    assert (A / B).evaluate(a=-35, b=-98) == Fraction(5, 14)
    with pytest.raises(ValueError):
        (A * B).evaluate(a=1)


def test_mu_on_generators():
    assert mu(A) == E4 * Fraction(-1, 48)
    assert mu(B) == E6 * Fraction(1, 864)
    assert mu(WeightedPoly.const(1)) == QMPoly.const(1)


def test_mu_of_discriminant():
    assert mu(discriminant_poly()) == (E4 ** 3 - E6 ** 2) * Fraction(1, 1728)


def test_mu_intertwines_serre_derivations():
    for p in (A, B, E2, A * B + E2 * A, A ** 2 / B):
        assert mu(p.delta_s()) == mu(p).delta_s()


def test_as_weighted():
    assert as_weighted(3) == WeightedPoly.const(3)
    assert as_weighted(A) is A


def test_sympy_rendering():
    assert str(A * 2 + I * B).replace(" ", "") in ("2*a+I*b", "I*b+2*a")
