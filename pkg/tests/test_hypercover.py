from fractions import Fraction

import pytest
import sympy

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.exact.scalars import I
from scripts.cmgreen.hypercover.branches import dlog_f_direct
from scripts.cmgreen.hypercover.dmodule import (
    ACTION,
    DModElem,
    apply_b,
    dmod_apply,
    eval_B,
    expected_modform,
    j_form_identity,
    theta_hyperforms,
)
from scripts.cmgreen.hypercover.hyperforms import Embedding, hproduct, make_omega_eta, unit_hyperform
from scripts.cmgreen.hypercover.psi import psi0, psi1, dz_residue_sum
from scripts.cmgreen.hypercover.trace import gauss_manin_check, poincare_pairing, trace_diagonal
from scripts.cmgreen.weierstrass import A, B, d_relative, expand_basic, mu

theta = DModElem.basis


def test_hyperform_order_floor():
    with pytest.raises(DomainError):
        make_omega_eta(12)


def test_omega_and_eta_components(omega_eta):
    omega, eta = omega_eta
    assert omega.comp_int.known_zero()
    # x v0 + y has no pole
    assert eta.comp0.ds.ord >= 1
    assert eta.comp1.ds.coeff(1) == -A / 3


def test_differential_of_omega_on_u0(omega_eta, order):
    omega, _ = omega_eta
    de_dz, ds_dz = d_relative(omega.comp0)
    # dω0 = -d_e∧dz + x d_s∧dz
    assert (de_dz + omega.comp0.dz).known_zero()
    assert (ds_dz - expand_basic("x", order + 2).series).known_zero()


def test_product_sign_rule(omega_eta):
    omega, eta = omega_eta
    diag = Embedding.diagonal()
    h = hproduct(omega, eta)
    # (int, 1) component is -ω_int η_1 and ω_int = 0
    part = h.restrict(("int", "1"), diag)
    assert all(p.known_zero() for p in part.parts)


def test_poincare_pairing(omega_eta):
    omega, eta = omega_eta
    pairing = poincare_pairing(omega, eta)
    assert pairing.power == 1
    assert pairing.scalar == 1
    assert str(pairing) == "(2πi)·(1)"


def test_pairing_is_skew(omega_eta):
    omega, eta = omega_eta
    assert poincare_pairing(omega, omega).scalar == 0
    assert poincare_pairing(eta, omega).scalar == -1


def test_trace_needs_degree_two(omega_eta):
    omega, _ = omega_eta
    with pytest.raises(DomainError):
        trace_diagonal(hproduct(omega, unit_hyperform()))


def test_gauss_manin_table(order):
    items = gauss_manin_check(order)
    assert len(items) == 14
    assert all(item.passed for item in items), [(i.name, i.detail) for i in items if not i.passed]


def test_dlog_residues(branches):
    case1, case2 = branches
    assert case1.multiplicity == -3
    assert case2.multiplicity == 3
    assert case1.dlog.dz.residue() == -3
    assert case2.dlog.dz.residue() == 3
    assert dz_residue_sum(branches) == 0


def test_dlog_base_coefficients(branches):
    case1, case2 = branches
    assert case1.dlog.de.coeff(0) == 0
    assert case2.dlog.de.coeff(0) == 6
    assert case2.dlog.ds.coeff(0) == A * A * Fraction(-4, 3) / B


def test_dlog_chain_rule_matches_direct_expansion(branches):
    for branch in branches:
        direct = dlog_f_direct(branch)
        assert branch.dlog.dz.first_disagreement(direct.dz) is None


def test_branch_product(branches):
    f1, f2 = (b.f for b in branches)
    assert (f1.mul(f2) - 2 * B).ord is None


def test_psi1_values(omega_eta, branches):
    omega, eta = omega_eta
    thetas = theta_hyperforms(omega, eta)
    assert psi1(thetas["θ0"], branches) == (0, 0)
    assert psi1(thetas["θ1"], branches) == (0, I * A * A * Fraction(-8, 3) / B)
    assert psi1(thetas["θ2"], branches) == (0, 4 * I * A)


def test_psi1_is_linear(omega_eta, branches):
    omega, eta = omega_eta
    thetas = theta_hyperforms(omega, eta)
    combined = psi1(thetas["θ1"].scale(3) + thetas["θ2"], branches)
    want = psi1(thetas["θ1"], branches).scale(3) + psi1(thetas["θ2"], branches)
    assert combined == want


def test_psi_degree_checks(omega_eta, branches):
    omega, _ = omega_eta
    with pytest.raises(DomainError):
        psi1(hproduct(omega, unit_hyperform()), branches)
    with pytest.raises(DomainError):
        psi0(hproduct(omega, omega), branches)


def test_psi0_on_degree_one(omega_eta, branches):
    omega, eta = omega_eta
    one = unit_hyperform()
    assert psi0(hproduct(omega, one), branches) == 0
    # f and v0 are odd in z on both branches, so (df/f) v0 has no z^-1 term
    assert psi0(hproduct(eta, one), branches) == 0


@pytest.mark.parametrize("name", ["θ0", "θ1", "θ2"])
def test_psi0_on_a_wedge_matches_psi1(omega_eta, branches, name):
    omega, eta = omega_eta
    th = theta_hyperforms(omega, eta)[name]
    value = psi1(th, branches)
    # minus the d_e∧d_s coefficient of u ∧ Ψ1(θ)
    assert psi0(th.wedge("ds"), branches) == value.de
    assert psi0(th.wedge("de"), branches) == -value.ds


def test_psi0_on_a_wedge_of_omega_times_eta(omega_eta, branches):
    omega, eta = omega_eta
    th = hproduct(omega, eta)
    value = psi1(th, branches)
    assert psi0(th.wedge("ds"), branches) == value.de
    assert psi0(th.wedge("de"), branches) == -value.ds


def test_psi0_vanishes_on_the_top_hodge_piece(omega_eta, branches):
    omega, _ = omega_eta
    assert psi0(hproduct(omega, omega).wedge("de"), branches) == 0
    assert psi0(hproduct(omega, omega).wedge("ds"), branches) == 0


def test_psi0_on_wedged_theta_values(omega_eta, branches):
    omega, eta = omega_eta
    thetas = theta_hyperforms(omega, eta)
    assert psi0(thetas["θ1"].wedge("de"), branches) == I * A * A * Fraction(8, 3) / B
    assert psi0(thetas["θ1"].wedge("ds"), branches) == 0
    assert psi0(thetas["θ2"].wedge("de"), branches) == -4 * I * A


def test_psi1_of_a_wedge_is_minus_u_psi0(omega_eta, branches):
    omega, eta = omega_eta
    one = unit_hyperform()
    for f in (omega, eta):
        h = hproduct(f, one)
        assert psi1(h.wedge("de"), branches) == (-psi0(h, branches), 0)
        assert psi1(h.wedge("ds"), branches) == (0, -psi0(h, branches))


@pytest.mark.parametrize("name", ["θ0", "θ1", "θ2"])
def test_dmodule_constants_come_from_psi1(omega_eta, branches, name):
    omega, eta = omega_eta
    value = psi1(theta_hyperforms(omega, eta)[name], branches)
    assert ACTION["de"][name].coeff("1") == -value.de
    assert ACTION["ds"][name].coeff("1") == -value.ds


def test_dmodule_derivatives():
    assert dmod_apply("de", theta("1")) == DModElem()
    d2 = dmod_apply("ds", dmod_apply("ds", theta("θ0")))
    assert d2 == theta("θ2").scale(2) + theta("θ0").scale(A * Fraction(2, 3)) + theta("1").scale(
        I * A * A * Fraction(8, 3) / B
    )
    d3 = dmod_apply("ds", d2)
    assert d3.coeff("θ1") == A * Fraction(4, 3)
    assert d3.coeff("θ0") == 4 * B
    assert d3.coeff("1") == 24 * I * A + I * A ** 4 * Fraction(32, 9) / (B * B)
    with pytest.raises(DomainError):
        dmod_apply("dx", theta("θ0"))


def test_b_kills_every_theta_part():
    res = apply_b(theta("θ0"))
    assert set(res.coeffs) == {"1"}


def test_eval_b():
    b = eval_B()
    assert b.scalar == 24 * I * A + I * A ** 4 * Fraction(32, 9) / (B * B)
    assert b.modform == mu(b.scalar)
    assert b.multiplier.power == -3
    assert sympy.simplify(b.analytic - expected_modform()) == 0
    assert sympy.simplify(b.j_form - expected_modform()) == 0
    assert b.scalar.evaluate(a=-35, b=-98) == I * Fraction(-2560, 9)


def test_j_form_identity():
    assert j_form_identity()


def test_unknown_basis_element():
    with pytest.raises(DomainError):
        DModElem({"θ3": 1})


def test_unit_hyperform():
    one = unit_hyperform()
    assert one.degree == 0
    assert isinstance(one.comp_int, TruncatedLaurent)
