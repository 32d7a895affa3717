"""
Green functions of weight 2k on the upper half plane and on PSL2(Z)\\H.

    G_k^H(z1, z2)     = -2 Q_{k-1}(t),  t = 1 + |z1 - z2|^2 / (2 y1 y2)
    G_k^{H/Γ}(z1, z2) = Σ_{γ ∈ PSL2(Z)} G_k^H(z1, γ z2)

The Poincaré sum runs over cosets (c, d) with c, |d| <= M and a window of
translates around Re z1; the part left out is bounded by comparison with
Σ t^-2.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from math import factorial, gcd
from typing import Iterator, List, NamedTuple, Tuple

import mpmath

from scripts.cmgreen.errors import CoincidentPoints, DomainError, NonConvergent, OrbitCollision
from scripts.cmgreen.logger import logger, timed
from scripts.cmgreen.numeric.modular import reduce_fundamental
from scripts.cmgreen.tool import default_prec, max_workers, poincare_bound, poincare_prec
from scripts.cmgreen.v2 import Matrix, V2Poly, mat_inv, mobius

# orbit representatives of i meeting the closure of the fundamental domain
_I_REPRESENTATIVES = ((0, 1), (1, 1), (-1, 1), (0.5, 0.5), (-0.5, 0.5))


class GreenSum(NamedTuple):
    value: mpmath.mpc
    tail: mpmath.mpf
    terms: int
    # bits the terms were summed at, at most CMG_POINCARE_PREC
    prec: int


def hyp_t(z1, z2, prec: int = default_prec) -> mpmath.mpf:
    """Hyperbolic cosine of the hyperbolic distance."""
    with mpmath.workprec(prec):
        z1, z2 = mpmath.mpc(z1), mpmath.mpc(z2)
        if z1.imag <= 0 or z2.imag <= 0:
            raise DomainError("both points must lie in the upper half plane")
        if z1 == z2:
            raise CoincidentPoints(f"z1 = z2 = {mpmath.nstr(z1, 15)}")
        return 1 + abs(z1 - z2) ** 2 / (2 * z1.imag * z2.imag)


def hyp_distance(z1, z2, prec: int = default_prec) -> mpmath.mpf:
    with mpmath.workprec(prec):
        if mpmath.mpc(z1) == mpmath.mpc(z2):
            return mpmath.mpf(0)
        return mpmath.acosh(hyp_t(z1, z2, prec))


def orbit_distance_to_i(tau, prec: int = default_prec) -> Tuple[mpmath.mpf, mpmath.mpc]:
    """Hyperbolic distance from τ to PSL2(Z)·i, and the nearest orbit point."""
    with mpmath.workprec(prec):
        reduced, gamma = reduce_fundamental(tau, prec)
        best = None
        for x, y in _I_REPRESENTATIVES:
            p = mpmath.mpc(x, y)
            dist = hyp_distance(reduced, p, prec)
            if best is None or dist < best[0]:
                best = (dist, p)
        dist, p = best
        return dist, mobius(mat_inv(gamma), p)


def gauss_2f1(a, b, c, x, prec: int = default_prec) -> mpmath.mpc:
    """F(a, b; c; x) on the unit disc."""
    if isinstance(c, int) and c <= 0:
        raise DomainError(f"c = {c} is a nonpositive integer")
    with mpmath.workprec(prec):
        x = mpmath.mpmathify(x)
        if abs(x) >= 1:
            raise NonConvergent(f"|x| = {mpmath.nstr(abs(x), 10)} >= 1, the series does not converge")
        return mpmath.hyp2f1(a, b, c, x)


def legendre_q(nu: int, t, prec: int = default_prec) -> mpmath.mpf:
    """
    Legendre function of the second kind, as
    Q_nu(t) = 2^nu nu!^2 / (2nu+1)! * (t+1)^(-nu-1) * F(nu+1, nu+1; 2nu+2; 2/(1+t)).
    """
    if nu < 1:
        raise DomainError(f"Q_{nu} is only used for nu >= 1")
    k = nu + 1
    with mpmath.workprec(prec):
        t = mpmath.mpf(t)
        if t <= 1:
            raise DomainError(f"t = {mpmath.nstr(t, 15)} <= 1")
        head = mpmath.mpf(2) ** nu * factorial(nu) ** 2 / mpmath.mpf(factorial(2 * nu + 1))
        return mpmath.re(head * (t + 1) ** (-k) * gauss_2f1(k, k, 2 * k, 2 / (1 + t), prec))


def legendre_q1_closed(t, prec: int = default_prec) -> mpmath.mpf:
    """Q_1(t) = (t/2) log((t+1)/(t-1)) - 1"""
    with mpmath.workprec(prec):
        t = mpmath.mpf(t)
        if t <= 1:
            raise DomainError(f"t = {mpmath.nstr(t, 15)} <= 1")
        return t / 2 * mpmath.log1p(2 / (t - 1)) - 1


def local_green(k: int, z1, z2, prec: int = default_prec) -> mpmath.mpf:
    return -2 * legendre_q(k - 1, hyp_t(z1, z2, prec), prec)


def q_form(z, x):
    """Q_z(X) = (X - z)(X - z̄)/(z - z̄)"""
    zb = mpmath.conj(z)
    return (x - z) * (x - zb) / (z - zb)


def q_form_poly(z) -> V2Poly:
    zb = mpmath.conj(z)
    y2 = z - zb
    return V2Poly(z * zb / y2, -(z + zb) / y2, 1 / y2)


def local_green_deriv(k: int, n: int, m: int, z1, z2, prec: int = default_prec, cross_check: bool = True):
    """
    δ2^m δ1^n G_k^H(z1, z2) =
        (-1)^(m+n+1) (k+m-1)! (k+n-1)! / (2k-1)!
        * ((t+1)/2)^-k ((t-1)/2)^(m+n) F(k+m, k+n; 2k; 2/(t+1))
        * Q_{z2}(z1)^-n Q_{z1}(z2)^-m

    For n = k the result is compared with the closed form.
    """
    if n < 1 - k or m < 1 - k:
        raise DomainError(f"derivative orders n = {n}, m = {m} must be >= {1 - k}")
    with mpmath.workprec(prec):
        z1, z2 = mpmath.mpc(z1), mpmath.mpc(z2)
        t = hyp_t(z1, z2, prec)
        head = (-1) ** (m + n + 1) * mpmath.mpf(factorial(k + m - 1) * factorial(k + n - 1)) / factorial(2 * k - 1)
        value = (
            head
            * ((t + 1) / 2) ** (-k)
            * ((t - 1) / 2) ** (m + n)
            * gauss_2f1(k + m, k + n, 2 * k, 2 / (t + 1), prec)
            * q_form(z2, z1) ** (-n)
            * q_form(z1, z2) ** (-m)
        )
        if cross_check and n == k:
            closed = local_green_deriv_closed(k, m, z1, z2, prec)
            if abs(value - closed) > mpmath.ldexp(1, -prec // 2) * (1 + abs(closed)):
                raise NonConvergent(
                    f"hypergeometric and closed forms of δ^{k} G disagree: "
                    f"{mpmath.nstr(value, 15)} vs {mpmath.nstr(closed, 15)}"
                )
        return value


def local_green_deriv_closed(k: int, m: int, z1, z2, prec: int = default_prec):
    """δ2^m δ1^k G_k^H = (-1)^(k-1) (k+m-1)! (z2 - z̄2)^(k-m) / ((z1 - z2)^(k+m) (z1 - z̄2)^(k-m))"""
    with mpmath.workprec(prec):
        z1, z2 = mpmath.mpc(z1), mpmath.mpc(z2)
        hyp_t(z1, z2, prec)
        z2b = mpmath.conj(z2)
        return (
            (-1) ** (k - 1)
            * factorial(k + m - 1)
            * (z2 - z2b) ** (k - m)
            / ((z1 - z2) ** (k + m) * (z1 - z2b) ** (k - m))
        )


def _cosets(bound: int) -> Iterator[Tuple[int, List[Matrix]]]:
    yield 0, [(1, 0, 0, 1)]
    for c in range(1, bound + 1):
        row = []
        for d in range(-bound, bound + 1):
            if gcd(c, d) != 1:
                continue
            a = pow(d, -1, c) if c > 1 else 0
            row.append((a, (a * d - 1) // c, c, d))
        yield c, row


def tail_estimate(y1, z2, bound: int, window: int, cosets) -> mpmath.mpf:
    """
    Upper estimate of the left out terms: translates beyond the window for every
    enumerated coset, plus whole cosets outside the box, both compared with
    G_2^H ~ 2/(3 t^2).
    """
    x2, y2 = z2.real, z2.imag
    r2 = x2 * x2 + y2 * y2
    lam = ((r2 + 1) - mpmath.sqrt((r2 - 1) ** 2 + 4 * x2 * x2)) / 2
    window_part = mpmath.mpf(0)
    for gamma in cosets:
        big_y = y2 / abs(gamma[2] * z2 + gamma[3]) ** 2
        window_part += 8 * y1 ** 2 * big_y ** 2 / 3
    window_part *= mpmath.mpf(2) / (3 * (window - 1) ** 3)
    coset_part = (
        mpmath.mpf(8) / 3 * (mpmath.pi / (2 * y1) + 1 / y1 ** 2) * y2 ** 2 / lam ** 2 * mpmath.pi / (2 * (bound - 1) ** 2)
    )
    return window_part + coset_part


def _poincare(term, z1, z2, m: int, bound: int, prec: int) -> GreenSum:
    """Σ_γ term(z1, γ z2) (c z2 + d)^(-2m), deterministic summation order."""
    if bound < 3:
        raise DomainError(f"bound M = {bound} is too small, use M >= 3")
    window = bound
    with mpmath.workprec(prec):
        eps = mpmath.ldexp(1, -prec // 2)

        def row_terms(item):
            # runs inside the caller's workprec, the mpmath context is process wide
            _, row = item
            out = []
            for gamma in row:
                _, _, c, d = gamma
                w = mobius(gamma, z2)
                factor = (c * z2 + d) ** (-2 * m) if m else 1
                n0 = int(mpmath.nint(z1.real - w.real))
                for n in range(n0 - window, n0 + window + 1):
                    out.append(term(z1, w + n, eps) * factor)
            return out

        rows = list(_cosets(bound))
        with timed(f"Poincaré sum over {len(rows)} coset rows", logging.DEBUG):
            with ThreadPoolExecutor(max_workers=max_workers) as executor:
                chunks = list(executor.map(row_terms, rows))
        terms = [x for chunk in chunks for x in chunk]
        value = mpmath.fsum(terms)
        tail = tail_estimate(z1.imag, z2, bound, window, [g for _, row in rows for g in row])
    logger.debug("Poincaré sum M=%d: %d terms, tail %s", bound, len(terms), mpmath.nstr(tail, 5))
    return GreenSum(value, tail, len(terms), prec)


def _checked_t(z1, w, eps):
    t = 1 + abs(z1 - w) ** 2 / (2 * z1.imag * w.imag)
    if t - 1 < eps:
        raise OrbitCollision(f"{mpmath.nstr(z1, 15)} lies on the orbit of {mpmath.nstr(w, 15)}")
    return t


def _value_term(k: int, prec: int):
    if k == 2:

        def term(z1, w, eps):
            t = _checked_t(z1, w, eps)
            return -2 * (t / 2 * mpmath.log1p(2 / (t - 1)) - 1)

    else:

        def term(z1, w, eps):
            return -2 * legendre_q(k - 1, _checked_t(z1, w, eps), prec)

    return term


def _deriv_term(k: int, n: int, m: int, prec: int):
    if (k, n, m) == (2, 1, 0):

        def term(z1, w, eps):
            # δ1 G_2^H = -2 Q_1'(t) ∂t/∂z1
            t = _checked_t(z1, w, eps)
            y1, yw = z1.imag, w.imag
            dist2 = abs(z1 - w) ** 2
            q1p = mpmath.log1p(2 / (t - 1)) / 2 - t / (t * t - 1)
            dt = mpmath.conj(z1 - w) / (2 * y1 * yw) + 1j * dist2 / (4 * y1 * y1 * yw)
            return -2 * q1p * dt

    else:

        def term(z1, w, eps):
            _checked_t(z1, w, eps)
            return local_green_deriv(k, n, m, z1, w, prec, cross_check=False)

    return term


def _internal_prec(prec: int) -> int:
    if prec > poincare_prec:
        logger.warning(
            "Poincaré terms are summed at %d bits instead of the requested %d, raise CMG_POINCARE_PREC to lift the cap",
            poincare_prec,
            prec,
        )
        return poincare_prec
    return prec


def global_green(k: int, z1, z2, bound: int = poincare_bound, prec: int = default_prec) -> GreenSum:
    """G_k^{H/Γ}(z1, z2) with both points moved to the fundamental domain first."""
    if k < 2:
        raise DomainError(f"the Poincaré sum needs k >= 2, got {k}")
    inner = _internal_prec(prec)
    with mpmath.workprec(inner):
        r1, _ = reduce_fundamental(z1, inner)
        r2, _ = reduce_fundamental(z2, inner)
        res = _poincare(_value_term(k, inner), r1, r2, 0, bound, inner)
    return GreenSum(mpmath.re(res.value), res.tail, res.terms, res.prec)


def global_green_deriv(k: int, n: int, m: int, z1, z2, bound: int = poincare_bound, prec: int = default_prec) -> GreenSum:
    """
    δ2^m δ1^n G_k^{H/Γ}(z1, z2). Only z2 is reduced, the weight 2m factor of the
    reduction is divided out. The tail is the one of the undifferentiated sum.
    """
    if n < 1 - k or m < 1 - k:
        raise DomainError(f"derivative orders n = {n}, m = {m} must be >= {1 - k}")
    inner = _internal_prec(prec)
    with mpmath.workprec(inner):
        z1, z2 = mpmath.mpc(z1), mpmath.mpc(z2)
        r2, gamma = reduce_fundamental(z2, inner)
        res = _poincare(_deriv_term(k, n, m, inner), z1, r2, m, bound, inner)
        value = res.value
        if m:
            _, _, c, d = gamma
            value = value / (c * z2 + d) ** (2 * m)
    return GreenSum(value, res.tail, res.terms, res.prec)


def q_derivative_polys(z) -> Tuple[V2Poly, V2Poly, V2Poly]:
    """(δ^-1 Q_z, Q_z, δ Q_z) = (-(X - z)^2/2, Q_z, -((X - z̄)/(z - z̄))^2)"""
    zb = mpmath.conj(z)
    y2 = z - zb
    lower = V2Poly(-z * z / 2, z, mpmath.mpf(-1) / 2)
    upper = V2Poly(-zb * zb / y2 ** 2, 2 * zb / y2 ** 2, -1 / y2 ** 2)
    return lower, q_form_poly(z), upper


def extended_G(z, z0, bound: int = poincare_bound, prec: int = default_prec) -> V2Poly:
    """
    V2 valued lift of G_2^{H/Γ}(·, z0) at z:

        𝔊 = -2 Σ_{l=-1}^{1} (-1)^l δ^{-l}(Q_z) δ^l G,   δ^-1 G = -(z - z̄)^2 conj(δG)/2

    so that (𝔊, Q_z) = G.
    """
    with mpmath.workprec(_internal_prec(prec)):
        z = mpmath.mpc(z)
        g = global_green(2, z, z0, bound, prec).value
        dg = global_green_deriv(2, 1, 0, z, z0, bound, prec).value
        lower_g = -((z - mpmath.conj(z)) ** 2) * mpmath.conj(dg) / 2
        q_lower, q_mid, q_upper = q_derivative_polys(z)
        return (q_upper * (-lower_g) + q_mid * g - q_lower * dg) * (-2)
