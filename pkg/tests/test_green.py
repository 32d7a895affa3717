import logging

import mpmath
import pytest

from scripts.cmgreen.errors import CoincidentPoints, DomainError, NonConvergent, OrbitCollision
from scripts.cmgreen.numeric.green import (
    _deriv_term,
    extended_G,
    gauss_2f1,
    global_green,
    hyp_t,
    legendre_q,
    legendre_q1_closed,
    local_green,
    local_green_deriv,
    local_green_deriv_closed,
    orbit_distance_to_i,
    q_derivative_polys,
    q_form,
    q_form_poly,
)
from scripts.cmgreen.numeric.weighted import WeightedFn
from scripts.cmgreen.tool import poincare_prec
from scripts.cmgreen.v2 import mobius, word_matrix

SMALL_BOUND = 10


@pytest.fixture(autouse=True)
def working_precision():
    with mpmath.workprec(256):
        yield


def _random_point(rng):
    return mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.5))


def test_hyp_t():
    assert hyp_t(1j, 2j) == mpmath.mpf(5) / 4
    with pytest.raises(CoincidentPoints):
        hyp_t(1j, 1j)
    with pytest.raises(DomainError):
        hyp_t(1j, -2j)


def test_hyp_t_is_invariant(rng):
    for _ in range(20):
        word = "".join(rng.choice("SsTt") for _ in range(rng.randint(1, 6)))
        gamma = word_matrix(word)
        z1, z2 = _random_point(rng), _random_point(rng)
        moved = hyp_t(mobius(gamma, z1), mobius(gamma, z2))
        assert abs(moved - hyp_t(z1, z2)) < mpmath.mpf(10) ** -50, word


def test_legendre_q1_values():
    assert abs(legendre_q(1, 3) - (mpmath.mpf(3) / 2 * mpmath.log(2) - 1)) < mpmath.mpf(10) ** -60
    assert abs(legendre_q(1, 3) - mpmath.mpf("0.0397207708399179")) < 1e-15
    assert abs(legendre_q(1, mpmath.mpf(5) / 4) - mpmath.mpf("0.3732653608351372")) < 1e-14


def test_legendre_series_matches_closed_form():
    for t in mpmath.linspace(mpmath.mpf("1.1"), 10, 25):
        assert abs(legendre_q(1, t) - legendre_q1_closed(t)) < 1e-12


def test_legendre_refuses_bad_arguments():
    with pytest.raises(DomainError):
        legendre_q(0, 2)
    with pytest.raises(DomainError):
        legendre_q(1, 1)
    with pytest.raises(DomainError):
        legendre_q1_closed(mpmath.mpf("0.5"))


def test_gauss_2f1():
    a, b, x = mpmath.mpf("1.5"), mpmath.mpf("2.5"), mpmath.mpf("0.3")
    assert abs(gauss_2f1(a, b, b, x) - (1 - x) ** (-a)) < mpmath.mpf(10) ** -60
    assert gauss_2f1(2, 3, 5, 0) == 1
    partial = mpmath.fsum(
        mpmath.rf(1, n) * mpmath.rf(2, n) / mpmath.rf(4, n) * mpmath.mpf("0.5") ** n / mpmath.factorial(n)
        for n in range(400)
    )
    assert abs(gauss_2f1(1, 2, 4, mpmath.mpf("0.5")) - partial) < mpmath.mpf(10) ** -60


def test_gauss_2f1_errors():
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, -2, mpmath.mpf("0.5"))
    with pytest.raises(NonConvergent):
        gauss_2f1(1, 1, 2, 1)


def test_local_green_is_minus_two_q1():
    z1, z2 = mpmath.mpc(0.1, 1.2), mpmath.mpc(-0.3, 0.7)
    t = hyp_t(z1, z2)
    assert abs(local_green(2, z1, z2) + 2 * legendre_q1_closed(t)) < mpmath.mpf(10) ** -60
    value = local_green_deriv(2, 0, 0, z1, z2)
    assert abs(value - local_green(2, z1, z2)) < mpmath.mpf(10) ** -60


def test_second_derivative_anchor():
    value = local_green_deriv(2, 2, 0, 2j, 1j)
    assert abs(value - mpmath.mpf(4) / 9) < mpmath.mpf(10) ** -60
    assert abs(q_form(1j, 2j) - 1.5j) < mpmath.mpf(10) ** -60


def test_hypergeometric_and_closed_forms_agree(rng):
    for _ in range(5):
        z1, z2 = _random_point(rng), _random_point(rng)
        for m in (0, 1, 2):
            hyp = local_green_deriv(2, 2, m, z1, z2, cross_check=False)
            closed = local_green_deriv_closed(2, m, z1, z2)
            assert abs(hyp - closed) < mpmath.mpf(10) ** -50 * (1 + abs(closed))


def test_derivative_orders_are_bounded_below():
    with pytest.raises(DomainError):
        local_green_deriv(2, -2, 0, 1j, 2j)


def test_finite_differences_match_delta_squared(rng):
    checked = 0
    while checked < 20:
        z1, z2 = _random_point(rng), _random_point(rng)
        if hyp_t(z1, z2) < 1.05:
            continue
        g = WeightedFn(lambda z, z2=z2: local_green(2, z, z2), 0, name="G")
        numeric = g.delta().delta()(z1)
        exact = local_green_deriv(2, 2, 0, z1, z2)
        assert abs(numeric - exact) <= 1e-6 * abs(exact)
        checked += 1


def test_green_is_a_laplace_eigenfunction(rng):
    z1, z2 = _random_point(rng), _random_point(rng)
    g = WeightedFn(lambda z: local_green(2, z, z2), 0)
    assert abs(g.laplace(z1) + 2 * g(z1)) < 1e-20


def test_commutator_is_the_weight():
    f = WeightedFn(lambda z: z * z * z.conjugate(), 3)
    z = mpmath.mpc(0.2, 1.3)
    assert abs(f.commutator(z) - 3 * f(z)) < 1e-20


def test_delta_on_polynomial_coefficients():
    z = mpmath.mpc(0.4, 1.7)
    y2 = z - z.conjugate()
    # δ(X - z) = -(X - z̄)/(z - z̄) with (X - z) of weight -1
    const = WeightedFn(lambda w: -w, -1)
    assert abs(const.delta()(z) - z.conjugate() / y2) < 1e-40
    upper = q_derivative_polys(z)[2]
    lead = WeightedFn(lambda w: 1 / (w - w.conjugate()), 0)
    assert abs(lead.delta()(z) - upper.p2) < 1e-40
    lower = q_derivative_polys(z)[0]
    assert abs(lead.delta_inverse()(z) - lower.p2) < 1e-40


def test_local_expansion_is_logarithmic():
    z2 = mpmath.mpc(0.1, 1.4)
    diffs = []
    for eps in (mpmath.mpf(10) ** -7, mpmath.mpf(10) ** -10):
        z1 = z2 + eps * mpmath.expj(0.3)
        diffs.append(local_green(2, z1, z2) - mpmath.log(abs(z1 - z2) ** 2))
    assert abs(diffs[0] - diffs[1]) < 1e-6


def test_q_form_poly_matches_q_form():
    z = mpmath.mpc(-0.2, 1.1)
    p = q_form_poly(z)
    for x in (0, 1, mpmath.mpc(0.5, 0.5)):
        assert abs(p(x) - q_form(z, x)) < 1e-60


def test_orbit_distance_to_i():
    dist, nearest = orbit_distance_to_i(mpmath.mpc(0, 2))
    assert abs(dist - mpmath.acosh(mpmath.mpf(5) / 4)) < 1e-40
    assert abs(nearest - 1j) < 1e-40
    dist, nearest = orbit_distance_to_i(mpmath.mpc(0, 0.5))
    assert abs(nearest - 1j) < 1e-40


def test_global_green_is_symmetric():
    z1, z2 = mpmath.mpc(0.1, 1.3), mpmath.mpc(0.3, 2.1)
    forward = global_green(2, z1, z2, SMALL_BOUND)
    backward = global_green(2, z2, z1, SMALL_BOUND)
    assert abs(forward.value - backward.value) < forward.tail + backward.tail


def test_global_green_translation_invariance():
    z1, z2 = mpmath.mpc(0.1, 1.3), mpmath.mpc(0.3, 2.1)
    base = global_green(2, z1, z2, SMALL_BOUND).value
    assert global_green(2, z1, z2 + 1, SMALL_BOUND).value == base
    assert global_green(2, z1 - 2, z2, SMALL_BOUND).value == base


def test_global_green_decays_at_the_cusp():
    near = global_green(2, mpmath.mpc(0, 2), 1j, 20).value
    far = global_green(2, mpmath.mpc(0, 8), 1j, 20).value
    assert abs(far) < abs(near)


def test_global_green_refuses_the_orbit():
    with pytest.raises(OrbitCollision):
        global_green(2, mpmath.mpc(0.2, 1.5), mpmath.mpc(1.2, 1.5), SMALL_BOUND)
    with pytest.raises(DomainError):
        global_green(2, 1j, 2j, 2)
    with pytest.raises(DomainError):
        global_green(1, 1j, 2j, SMALL_BOUND)


def test_global_green_of_higher_weight_converges():
    res = global_green(3, mpmath.mpc(0.1, 1.3), mpmath.mpc(0.3, 2.1), SMALL_BOUND)
    assert res.terms > 0
    assert mpmath.isfinite(res.value)


def test_extended_green_pairs_back_to_green():
    z, z0 = mpmath.mpc(0.15, 1.25), 1j
    lifted = extended_G(z, z0, SMALL_BOUND)
    g = global_green(2, z, z0, SMALL_BOUND).value
    assert abs(lifted.pair(q_form_poly(z)) - g) < 1e-20
    for c in lifted.coeffs:
        assert abs(mpmath.im(1j * c)) < 1e-20


def test_first_derivative_anchor():
    # δ1 G_2 = -2 Q_1'(t) ∂t/∂z1 with t = 5/3 and ∂t/∂z1 = -2i/9 at (3i, i)
    want = 4 * (mpmath.log(4) / 2 - mpmath.mpf(15) / 16) * 1j / 9
    assert abs(local_green_deriv(2, 1, 0, 3j, 1j) - want) < mpmath.mpf(10) ** -50
    assert abs(want + mpmath.mpf("0.10860125308") * 1j) < 1e-10


def test_first_derivative_term_matches_the_general_formula(rng):
    special = _deriv_term(2, 1, 0, 256)
    eps = mpmath.ldexp(1, -128)
    for _ in range(5):
        z1, z2 = _random_point(rng), _random_point(rng)
        general = local_green_deriv(2, 1, 0, z1, z2)
        assert abs(special(z1, z2, eps) - general) < mpmath.mpf(10) ** -50 * (1 + abs(general))


@pytest.mark.slow
def test_headline_value():
    with mpmath.workprec(256):
        tau7 = mpmath.mpc(-0.5, mpmath.sqrt(7) / 2)
        want = 8 / mpmath.sqrt(7) * mpmath.log(8 - 3 * mpmath.sqrt(7))
    res = global_green(2, tau7, 1j)
    assert res.tail < 1e-2
    assert abs(res.value - want) < res.tail
    assert abs(want - mpmath.mpf("-8.37164")) < 1e-4


def test_capped_precision_is_reported(caplog):
    z1, z2 = mpmath.mpc(0.1, 1.3), mpmath.mpc(0.3, 2.1)
    with caplog.at_level(logging.WARNING, logger="cmgreen"):
        res = global_green(2, z1, z2, SMALL_BOUND, prec=poincare_prec + 64)
    assert res.prec == poincare_prec
    assert "CMG_POINCARE_PREC" in caplog.text


def test_precision_below_the_cap_is_kept(caplog):
    z1, z2 = mpmath.mpc(0.1, 1.3), mpmath.mpc(0.3, 2.1)
    with caplog.at_level(logging.WARNING, logger="cmgreen"):
        res = global_green(2, z1, z2, SMALL_BOUND, prec=64)
    assert res.prec == min(64, poincare_prec)
    if poincare_prec >= 64:
        assert "CMG_POINCARE_PREC" not in caplog.text


def test_dbar_of_the_lift_vanishes_twice_at_zbar():
    z, z0 = mpmath.mpc(0.15, 1.25), 1j
    h = mpmath.ldexp(1, -poincare_prec // 3)

    def lift(w):
        return extended_G(w, z0, 5, poincare_prec)

    dx = (lift(z + h) - lift(z - h)) * (1 / (2 * h))
    dy = (lift(z + 1j * h) - lift(z - 1j * h)) * (1 / (2 * h))
    dbar = (dx + dy * 1j) * mpmath.mpf(0.5)
    zb = mpmath.conj(z)
    scale = 1 + max(abs(c) for c in dbar.coeffs)
    assert abs(dbar(zb)) < 1e-10 * scale
    assert abs(dbar.p1 + 2 * dbar.p2 * zb) < 1e-10 * scale
