"""
The lifted value Ĝ_2(z, i) at a CM point z from Eichler integrals of
g(τ) = δ²G_2(τ, i):

    2√D Q_z = Σ_i (γ_i u_i - u_i)
    Ĝ = -1/(2√D) Σ_i (∫_z^{γ_i^-1 z} (X - τ)^2 g(τ) dτ, u_i)

Only defined modulo πi; the real part is G_2(z, i)/2.
"""
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, NamedTuple, Tuple

import mpmath

from scripts.cmgreen.errors import DomainError, NotInBoundaryLattice, PathTooClosePole, PrecisionUnreachable
from scripts.cmgreen.logger import logger, timed
from scripts.cmgreen.numeric.green import orbit_distance_to_i
from scripts.cmgreen.numeric.modular import g_target
from scripts.cmgreen.tool import default_prec, path_clearance
from scripts.cmgreen.v2 import S, T, Matrix, V2Poly, mat_inv, mobius

GENERATORS: Dict[str, Matrix] = {"S": S, "T": T}
Decomposition = List[Tuple[str, V2Poly]]

_SAMPLES = 32
_MAX_DETOURS = 8
_MAX_SPLITS = 12
_SCAN_PREC = 53


@dataclass(frozen=True)
class CMPoint:
    """Root τ = (-B + √D)/(2A) of A X^2 + B X + C in the upper half plane."""

    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.A <= 0:
            raise DomainError(f"A = {self.A} must be positive")
        if gcd(gcd(self.A, self.B), self.C) != 1:
            raise DomainError(f"form ({self.A}, {self.B}, {self.C}) is not primitive")
        if self.disc >= 0:
            raise DomainError(f"D = {self.disc} is not negative")

    @classmethod
    def from_disc(cls, disc: int) -> "CMPoint":
        """The principal reduced form of discriminant D."""
        if disc >= 0 or disc % 4 not in (0, 1):
            raise DomainError(f"{disc} is not a negative discriminant")
        if disc % 4 == 0:
            return cls(1, 0, -disc // 4)
        return cls(1, 1, (1 - disc) // 4)

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def sqrt_disc(self, prec: int = default_prec) -> mpmath.mpc:
        with mpmath.workprec(prec):
            return mpmath.mpc(0, mpmath.sqrt(-self.disc))

    def tau(self, prec: int = default_prec) -> mpmath.mpc:
        with mpmath.workprec(prec):
            return (-self.B + self.sqrt_disc(prec)) / (2 * self.A)

    def boundary_poly(self) -> V2Poly:
        """2√D Q_τ = 2(A X^2 + B X + C)"""
        return V2Poly(2 * self.C, 2 * self.B, 2 * self.A)

    def __str__(self):
        return f"[{self.A}, {self.B}, {self.C}] (D = {self.disc})"


def boundary_decompose(p: V2Poly, variant: int = 1) -> Decomposition:
    """
    p = Σ (γ u - u) with γ ∈ {S, T}. Variant 1 ends with (T, -(p0 + p2) X);
    variant 2 replaces it by (T, c X^2) and (S, -c X), c = p0 + p2.
    """
    coeffs = p.coeffs
    if any(int(c) != c for c in coeffs):
        raise NotInBoundaryLattice(f"{p} has non integral coefficients")
    p0, p1, p2 = (int(c) for c in coeffs)
    if p1 % 2:
        raise NotInBoundaryLattice(f"{p}: the X coefficient must be even")
    c = p0 + p2
    terms = [("S", V2Poly(p2, 0, 0)), ("S", V2Poly(0, -p1 // 2, 0))]
    if variant == 1:
        terms.append(("T", V2Poly(0, -c, 0)))
    elif variant == 2:
        terms += [("T", V2Poly(0, 0, c)), ("S", V2Poly(0, -c, 0))]
    else:
        raise DomainError(f"unknown decomposition variant {variant}")
    return [(g, u) for g, u in terms if not u.is_zero()]


def decomposition_boundary(terms: Decomposition) -> V2Poly:
    total = V2Poly()
    for g, u in terms:
        total = total + (u.act(GENERATORS[g]) - u)
    return total


def _detour_point(s, p, radius):
    """Push s radially onto the hyperbolic circle of the given radius about p."""
    center = mpmath.mpc(p.real, p.imag * mpmath.cosh(radius))
    r_euc = p.imag * mpmath.sinh(radius)
    direction = s - center
    if abs(direction) == 0:
        direction = mpmath.mpc(0, 1)
    return center + r_euc * direction / abs(direction)


def _clear_segment(a, b, clearance, depth: int = 0) -> List[mpmath.mpc]:
    """Vertices after a (exclusive) up to b (inclusive) keeping away from the orbit of i."""
    for j in range(1, _SAMPLES):
        s = a + (b - a) * j / _SAMPLES
        dist, p = orbit_distance_to_i(s, _SCAN_PREC)
        if dist < clearance:
            if depth >= _MAX_DETOURS:
                raise PathTooClosePole(f"no clear path near {mpmath.nstr(p, 10)} after {depth} detours")
            q = _detour_point(s, p, 2 * clearance)
            return _clear_segment(a, q, clearance, depth + 1) + _clear_segment(q, b, clearance, depth + 1)
    return [b]


def integration_path(z, w, clearance: float = path_clearance, height_offset=0) -> List[mpmath.mpc]:
    """z -> Re z + iH -> Re w + iH -> w, detoured around the orbit of i."""
    for end in (z, w):
        dist, p = orbit_distance_to_i(end, _SCAN_PREC)
        if dist < clearance:
            raise PathTooClosePole(f"endpoint {mpmath.nstr(end, 10)} is within {clearance} of {mpmath.nstr(p, 10)}")
    h = max(z.imag, w.imag) + 1 + height_offset
    corners = [z, mpmath.mpc(z.real, h), mpmath.mpc(w.real, h), w]
    path = [z]
    for a, b in zip(corners, corners[1:]):
        if a != b:
            path += _clear_segment(a, b, clearance)
    return path


class _Integrand:
    """τ^power g(τ) with g cached across the three moments."""

    def __init__(self, prec: int):
        self.prec = prec
        self.cache = {}

    def g(self, tau):
        key = (tau.real, tau.imag)
        if key not in self.cache:
            self.cache[key] = g_target(tau, self.prec)
        return self.cache[key]

    def moment(self, power: int):
        return lambda tau: tau ** power * self.g(tau)


def _integrate(f, a, b, tol, depth: int = 0):
    value, err = mpmath.quad(f, [a, b], method="gauss-legendre", error=True)
    if err <= tol:
        return value, err
    if depth >= _MAX_SPLITS:
        raise PrecisionUnreachable(f"quadrature on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}] stuck at error {mpmath.nstr(err, 5)}")
    mid = (a + b) / 2
    v1, e1 = _integrate(f, a, mid, tol / 2, depth + 1)
    v2, e2 = _integrate(f, mid, b, tol / 2, depth + 1)
    return v1 + v2, e1 + e2


def eichler_period(gamma: Matrix, z, prec: int = default_prec, clearance: float = path_clearance, height_offset=0):
    """
    ∫_z^{γ^-1 z} (X - τ)^2 g(τ) dτ as a V2Poly, with the accumulated quadrature
    error.
    """
    with mpmath.workprec(prec):
        z = mpmath.mpc(z)
        w = mobius(mat_inv(gamma), z)
        path = integration_path(z, w, clearance, height_offset)
        tol = mpmath.ldexp(1, -prec // 2)
        integrand = _Integrand(prec)
        moments = []
        error = mpmath.mpf(0)
        for power in (2, 1, 0):
            f = integrand.moment(power)
            total = mpmath.mpc(0)
            for a, b in zip(path, path[1:]):
                v, e = _integrate(f, a, b, tol)
                total += v
                error += e
            moments.append(total)
        logger.debug("period for %s: %d vertices, %d g evaluations", gamma, len(path), len(integrand.cache))
        m2, m1, m0 = moments
        return V2Poly(m2, -2 * m1, m0), error


class LiftResult(NamedTuple):
    value: mpmath.mpc
    error: mpmath.mpf
    decomposition: Decomposition
    modulus: str = "πi·Z"


def eichler_lift(
    point: CMPoint,
    prec: int = default_prec,
    variant: int = 1,
    clearance: float = path_clearance,
    height_offset=0,
) -> LiftResult:
    terms = boundary_decompose(point.boundary_poly(), variant)
    with mpmath.workprec(prec):
        z = point.tau(prec)
        periods = {}
        for g, _ in terms:
            if g in periods:
                continue
            with timed(f"Eichler period for {g} at {point}"):
                periods[g] = eichler_period(GENERATORS[g], z, prec, clearance, height_offset)
        total = mpmath.mpc(0)
        error = mpmath.mpf(0)
        for g, u in terms:
            period, err = periods[g]
            total += period.pair(u)
            error += err * sum(abs(c) for c in u.coeffs)
        scale = -1 / (2 * point.sqrt_disc(prec))
        value = total * scale
    logger.info("Ĝ at %s = %s (mod πi)", point, mpmath.nstr(value, 20))
    return LiftResult(value, error * abs(scale), terms)


def reduce_mod_pi_i(x) -> mpmath.mpc:
    """Representative with imaginary part in (-π/2, π/2]."""
    k = mpmath.nint(x.imag / mpmath.pi)
    return mpmath.mpc(x.real, x.imag - k * mpmath.pi)
