"""
Eisenstein series, j and the weight 4 form g(τ) = δ²G₂(τ, i), evaluated at
explicit binary precision after reduction to the fundamental domain.
"""
from fractions import Fraction
from typing import NamedTuple, Tuple

import mpmath

from scripts.cmgreen.errors import DegenerateCurve, DomainError, PoleAtI, PrecisionUnreachable
from scripts.cmgreen.tool import default_prec, qseries_max_terms
from scripts.cmgreen.v2 import IDENTITY, S, Matrix, mat_mul

_EISENSTEIN_COEFF = {2: -24, 4: 240, 6: -504}
_GUARD_BITS = 20


class TauPoint(NamedTuple):
    """A point of the upper half plane with the matrix that moved it there."""

    tau: mpmath.mpc
    witness: Matrix = IDENTITY


def _to_mpc(tau) -> mpmath.mpc:
    z = mpmath.mpc(tau)
    if z.imag <= 0:
        raise DomainError(f"τ = {mpmath.nstr(z, 10)} is not in the upper half plane")
    return z


def reduce_fundamental(tau, prec: int = default_prec) -> TauPoint:
    """τ' = γτ with |Re τ'| <= 1/2 and |τ'| >= 1."""
    with mpmath.workprec(prec):
        z = _to_mpc(tau)
        gamma = IDENTITY
        for _ in range(10000):
            n = int(mpmath.nint(z.real))
            if n:
                z = z - n
                gamma = mat_mul((1, -n, 0, 1), gamma)
            if abs(z) < 1:
                z = -1 / z
                gamma = mat_mul(S, gamma)
            else:
                break
        return TauPoint(z, gamma)


def _q_series(k: int, tau: mpmath.mpc, prec: int) -> mpmath.mpc:
    q = mpmath.expj(2 * mpmath.pi * tau)
    tol = mpmath.ldexp(1, -prec - 8)
    total = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, qseries_max_terms + 1):
        qn *= q
        head = mpmath.mpf(n) ** (k - 1) * qn
        total += head / (1 - qn)
        if abs(head) < tol:
            return 1 + _EISENSTEIN_COEFF[k] * total
    raise PrecisionUnreachable(f"E{k} q-series did not reach 2^-{prec} in {qseries_max_terms} terms")


def _automorphy(gamma: Matrix, tau: mpmath.mpc) -> mpmath.mpc:
    _, _, c, d = gamma
    return c * tau + d


def eisenstein(k: int, tau, prec: int = default_prec) -> mpmath.mpc:
    """E2, E4 or E6 at τ; E2 is the quasi-modular series."""
    if k not in _EISENSTEIN_COEFF:
        raise DomainError(f"only E2, E4, E6 are available, not E{k}")
    with mpmath.workprec(prec + _GUARD_BITS):
        z = _to_mpc(tau)
        reduced, gamma = reduce_fundamental(z, prec + _GUARD_BITS)
        val = _q_series(k, reduced, prec + _GUARD_BITS)
        j = _automorphy(gamma, z)
        if k == 2:
            c = gamma[2]
            val = (val - 12 * c * j / (2j * mpmath.pi)) / j ** 2
        else:
            val = val / j ** k
    with mpmath.workprec(prec):
        return +val


def j_invariant(tau, prec: int = default_prec) -> mpmath.mpc:
    with mpmath.workprec(prec + _GUARD_BITS):
        e4 = eisenstein(4, tau, prec + _GUARD_BITS)
        e6 = eisenstein(6, tau, prec + _GUARD_BITS)
        val = 1728 * e4 ** 3 / (e4 ** 3 - e6 ** 2)
    with mpmath.workprec(prec):
        return +val


def j_from_ab(a, b):
    """j = -2^12 3^3 a^3 / Δ with Δ = -16(4a^3 + 27b^2); exact for rational input."""
    exact = all(isinstance(v, (int, Fraction)) for v in (a, b))
    if exact:
        a, b = Fraction(a), Fraction(b)
    disc = -16 * (4 * a ** 3 + 27 * b ** 2)
    if disc == 0:
        raise DegenerateCurve(f"Δ = 0 for a = {a}, b = {b}")
    return -(2 ** 12) * 27 * a ** 3 / disc


def _g_reduced(reduced: mpmath.mpc, prec: int) -> mpmath.mpc:
    e4 = _q_series(4, reduced, prec)
    e6 = _q_series(6, reduced, prec)
    return 2 * mpmath.pi ** 2 * e4 * (e4 ** 3 - e6 ** 2) / e6 ** 2


def g_target(tau, prec: int = default_prec) -> mpmath.mpc:
    """
    δ²G₂(τ, i) = -864 (2πi)^2 E4/(j - 1728) = 2π² E4 (E4³ - E6²)/E6², weight 4,
    with a double pole on the orbit of i.
    """
    with mpmath.workprec(prec + _GUARD_BITS):
        z = _to_mpc(tau)
        reduced, gamma = reduce_fundamental(z, prec + _GUARD_BITS)
        if abs(reduced - 1j) < mpmath.ldexp(1, -prec // 3):
            raise PoleAtI(f"τ = {mpmath.nstr(z, 15)} is equivalent to i")
        val = _g_reduced(reduced, prec + _GUARD_BITS) / _automorphy(gamma, z) ** 4
    with mpmath.workprec(prec):
        return +val


def psi_prime_an(tau, prec: int = default_prec) -> mpmath.mpc:
    return -1j * g_target(tau, prec)


def curve_from_tau(tau, prec: int = default_prec) -> Tuple[mpmath.mpc, mpmath.mpc]:
    """(a, b) = (-π⁴E4/3, -2π⁶E6/27), the curve C/(Z + τZ) in Weierstrass form."""
    with mpmath.workprec(prec + _GUARD_BITS):
        e4 = eisenstein(4, tau, prec + _GUARD_BITS)
        e6 = eisenstein(6, tau, prec + _GUARD_BITS)
        a = -mpmath.pi ** 4 * e4 / 3
        b = -2 * mpmath.pi ** 6 * e6 / 27
    with mpmath.workprec(prec):
        return +a, +b
