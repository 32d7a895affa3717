from fractions import Fraction

import mpmath
import pytest

from scripts.cmgreen.errors import NonInvertibleLead
from scripts.cmgreen.exact.scalars import BiField, I, QuadExt, TowerElem, field_norm, gaussian, rational_sqrt, sqrt_exact

MU = BiField.mu()
U = BiField(-1, 1, -2, -1)


def test_mu_is_a_root_of_its_minimal_polynomial():
    assert MU * MU + MU + 2 == 0


def test_square_roots_of_seven():
    assert BiField.sqrt_m7() ** 2 == -7
    assert BiField.sqrt_7() ** 2 == 7
    assert BiField.coerce(QuadExt(0, 1, -7)) == BiField.sqrt_m7()


def test_unit_u():
    assert U * U == BiField.i() * (8 - 3 * BiField.sqrt_7())
    assert U.norm() == 1
    assert U * U.inverse() == 1


def test_conjugations_are_involutions():
    x = BiField(Fraction(1, 3), -2, 5, Fraction(7, 2))
    assert x.conj_i().conj_i() == x
    assert x.conj_mu().conj_mu() == x
    assert MU + MU.conj_mu() == -1
    assert MU * MU.conj_mu() == 2


def test_relative_norm_on_q_mu():
    assert (MU + 3).norm_mu() == 8
    with pytest.raises(ValueError):
        U.norm_mu()


def test_to_complex():
    with mpmath.workprec(100):
        want = (mpmath.mpf(-1) + 1j * mpmath.sqrt(7)) / 2
        assert abs(MU.to_complex(100) - want) < mpmath.mpf(2) ** -95
        assert abs(BiField.i().to_complex(100) - 1j) < mpmath.mpf(2) ** -95


def test_gaussian_arithmetic():
    z = gaussian(3, 4)
    assert z.norm() == 25
    assert z * z.inverse() == 1
    assert I * I == -1
    assert QuadExt(1, 1, 2) * QuadExt(1, -1, 2) == -1
    with pytest.raises(ValueError):
        QuadExt(1, 1, 2) + QuadExt(1, 1, 3)
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)


def test_exact_square_roots():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None
    assert sqrt_exact(-4) == gaussian(0, 2)
    with pytest.raises(NonInvertibleLead):
        sqrt_exact(2)


def test_tower_norm():
    p, q = BiField(1, 1), BiField(3, 0, 1)
    t = TowerElem.generator(p, q)
    assert field_norm(t) == q
    assert t * t + t * p + q == 0
    x = t * 2 + MU
    y = t - BiField.i()
    assert field_norm(x * y) == field_norm(x) * field_norm(y)
    assert x * x.inverse() == 1


def test_norm_of_base_element_is_its_square():
    assert field_norm(BiField(3)) == 9
    assert field_norm(MU) == MU * MU


def test_towers_do_not_mix():
    a = TowerElem.generator(BiField(1), BiField(1))
    b = TowerElem.generator(BiField(0), BiField(1))
    with pytest.raises(ValueError):
        a + b


@pytest.fixture
def tau7_tower():
    # t^2 + (mu + 4) t - (7 mu + 21) = 0
    return TowerElem.generator(MU + 4, -7 * MU - 21)


def test_norms_in_the_tau7_tower(tau7_tower):
    t = tau7_tower
    assert field_norm(t + 6 * MU + 3) == -28 * (MU + 3)
    x = t - 3 * MU - 5 - BiField.i() * (8 * MU + 4)
    assert field_norm(x) == -28 * MU * (2 * MU + 1) * (BiField.i() * MU + 1)


def test_norm_is_multiplicative_in_the_tau7_tower(tau7_tower):
    t = tau7_tower
    x, y = t + 6 * MU + 3, t - 3 * MU - 5 - BiField.i() * (8 * MU + 4)
    assert field_norm(x * y) == field_norm(x) * field_norm(y)


def _random_bifield(rng):
    return BiField(*(Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(4)))


def test_random_elements_times_their_inverse(rng):
    checked = 0
    while checked < 100:
        x = _random_bifield(rng)
        if x == 0:
            continue
        assert x * x.inverse() == 1
        checked += 1
