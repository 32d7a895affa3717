from fractions import Fraction

import pytest

from scripts.cmgreen.commands import COEFFICIENT_TABLE, coefficient_checks
from scripts.cmgreen.errors import DomainError, UnknownWeight
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.exact.scalars import I
from scripts.cmgreen.weierstrass import (
    A,
    B,
    WSeries,
    base_vector_fields_check,
    bernoulli_check,
    d_function,
    derive,
    expand_basic,
    lifted_delta_e,
    lifted_delta_s,
    mu_commutes_check,
    relation_check,
    series_verify,
    total_differential,
)


def test_x_coefficients():
    x = expand_basic("x", 10)
    assert x.weight == 2
    assert x.coeff(-2) == 1
    assert x.coeff(0) == 0
    assert x.coeff(2) == -A / 5
    assert x.coeff(4) == -B / 7
    assert x.coeff(6) == A * A / 75


def test_v0_coefficients():
    v0 = expand_basic("v0", 10)
    assert v0.coeff(-1) == 1
    assert v0.coeff(3) == A / 15
    assert v0.coeff(9) == -A * B / 1155


def test_z_of_t_inverts_t():
    t = expand_basic("t", 16).series
    z_of_t = expand_basic("z_of_t", 16).series
    assert z_of_t.coeff(5) == A * Fraction(2, 5)
    assert z_of_t.coeff(7) == B * Fraction(3, 7)
    assert z_of_t.compose(t).first_disagreement(TruncatedLaurent.z()) is None


def test_order_below_floor_is_refused():
    with pytest.raises(DomainError):
        expand_basic("x", 8)
    with pytest.raises(DomainError):
        expand_basic("w", 12)


def test_parity_is_enforced():
    with pytest.raises(ValueError):
        WSeries(TruncatedLaurent({0: 1, 1: 1}), 0, 0)


def test_curve_relation_holds():
    assert relation_check(20).passed


def test_serre_derivation_of_x():
    x = expand_basic("x", 20).series
    lhs = lifted_delta_s(x)
    rhs = 2 * x.mul(x) + A * Fraction(4, 3)
    assert lhs.first_disagreement(rhs) is None


def test_euler_derivation_kills_constants():
    one = TruncatedLaurent.const(1)
    assert lifted_delta_e(one).known_zero()


def test_derive_needs_weight():
    s = WSeries(expand_basic("x", 10).series)
    with pytest.raises(UnknownWeight):
        derive("ds_star", s)
    assert derive("ddz", expand_basic("x", 10)).weight == 3


def test_total_differential_of_x():
    x = expand_basic("x", 16).series
    y = expand_basic("y", 16).series
    dx = total_differential("x", 16)
    assert (dx.dz - 2 * y).known_zero()
    assert (dx.de - 2 * y.mul(TruncatedLaurent.z()) - 2 * x).known_zero()


def test_total_differential_of_y():
    x = expand_basic("x", 16).series
    y = expand_basic("y", 16).series
    v0 = expand_basic("v0", 16).series
    dy = total_differential("y", 16)
    lead = 3 * x.mul(x) + A
    assert (dy.ds - lead.mul(v0) - 3 * x.mul(y)).known_zero()


def test_d_function_on_x_matches_coefficientwise_derivations():
    x = expand_basic("x", 12).series
    form = d_function(x)
    assert form.dz.first_disagreement(x.derive()) is None
    assert form.de.coeff(2) == -4 * A / 5


def test_base_vector_fields():
    assert all(item.passed for item in base_vector_fields_check())


def test_bernoulli_specialisation():
    assert bernoulli_check(16).passed


def test_series_verify_passes_at_order_20():
    items = series_verify(20)
    assert items
    assert all(item.passed for item in items), [i.name for i in items if not i.passed]


def test_coefficient_table_at_default_order(order):
    items = coefficient_checks(order)
    assert len(items) == len(COEFFICIENT_TABLE)
    assert all(item.passed for item in items), [i.detail for i in items if not i.passed]


def test_short_order_reports_exhausted_coefficients():
    items = coefficient_checks(8)
    failed = [i for i in items if not i.passed]
    assert failed
    assert all("TruncationExhausted" in i.detail for i in failed)
    assert any(i.name == "v0: z^9 coefficient" for i in failed)


def test_coefficient_table_covers_every_displayed_series():
    labels = {label for label, *_ in COEFFICIENT_TABLE}
    assert {"x", "y", "v0", "z(t)", "z2 case 1", "z2 case 2", "f case 1", "f case 2"} <= labels
    assert {"df/f case 1 dz", "df/f case 2 dz", "df/f case 2 d_e", "df/f case 2 d_s"} <= labels


def test_second_branch_point_coefficients(branches):
    case1, case2 = branches
    assert case1.z2.coeff(11) == I * A * B * Fraction(-2, 55)
    assert case2.z2.coeff(11) == -(I * A * B * Fraction(-2, 55))
    assert case1.dlog.dz.coeff(3) == A * Fraction(4, 5)


def test_mu_commutes_with_serre_derivation():
    items = mu_commutes_check()
    assert [i.name.rsplit(" ", 1)[-1] for i in items] == ["1", "a", "b", "E2"]
    assert all(i.passed for i in items), [i.detail for i in items if not i.passed]


def test_x_and_y_in_the_local_coordinate_t():
    x_t = expand_basic("x_of_t", 12)
    y_t = expand_basic("y_of_t", 12)
    assert x_t.coeff(-2) == 1
    assert y_t.coeff(-3) == -1
    assert (x_t.weight, y_t.weight) == (2, 3)
