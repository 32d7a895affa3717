"""
Intersection numbers of the higher cycle (W, f), W: x1 + x2 = 0,
f = y1 - i*y2, with the algebraic cycles Z1 = [inf] x E, Z2 = E x [inf],
the diagonal and graphs of endomorphisms.

Finite points contribute products of f-values (norms over their field of
definition); the point (inf, inf) contributes the product of leading terms of
f along the two branches after a linear deformation of the cycle.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple, Union

import sympy

from scripts.cmgreen.cycles.endomorphism import CurveParams, Endomorphism, poly_eval, poly_trim
from scripts.cmgreen.errors import NonProperIntersection, SingularSystem, UnsupportedTower, UnvalidatedEndo
from scripts.cmgreen.exact.scalars import BiField, QuadExt, TowerElem, field_norm
from scripts.cmgreen.exact.wpoly import WeightedPoly
from scripts.cmgreen.hypercover.branches import make_branches
from scripts.cmgreen.logger import logger

BRANCH_ORDER = 16
BASIC_DIRECTIONS = {"Z1": (1, 0), "Z2": (0, 1)}
I_BI = BiField.i()


@lru_cache(maxsize=None)
def _branch_leads() -> Tuple[Tuple[object, int, object], ...]:
    return tuple((b.f.lead(), b.f.ord, b.z2.lead()) for b in make_branches(BRANCH_ORDER))


def _at(c, p: CurveParams) -> BiField:
    if isinstance(c, WeightedPoly):
        c = c.evaluate(a=p.a, b=p.b)
    return BiField.coerce(c)


def infinity_part(alpha, beta, p: CurveParams) -> BiField:
    """
    Contribution of (inf, inf) for the cycle alpha*z1 + beta*z2 = 0:
    prod over branches of L * (alpha + beta*lambda)^(-e), where f ~ L z^e and
    z2 ~ lambda z on the branch.
    """
    alpha, beta = BiField.coerce(alpha), BiField.coerce(beta)
    value = BiField(1)
    total_order = 0
    for lead, order, lam in _branch_leads():
        base = alpha + beta * _at(lam, p)
        if not base:
            raise NonProperIntersection("the cycle is tangent to a branch of W at infinity")
        value = value * _at(lead, p) * base ** (-order)
        total_order += order
    if total_order:
        raise NonProperIntersection(f"leading terms leave z^{total_order}, the value depends on the deformation")
    return value


def _degenerate(x) -> bool:
    if isinstance(x, TowerElem):
        return not x.norm()
    return not x


def _f_product(e: Endomorphism, p: CurveParams, t):
    """f(P) f(-P) = -(t^3 + a t + b) (1 - i Y(t))^2 at x(P) = t."""
    yden = poly_eval(e.y_den, t)
    xden = poly_eval(e.x_den, t)
    if _degenerate(yden) or _degenerate(xden):
        raise NonProperIntersection(f"intersection point x = {t} is a pole of the endomorphism")
    cubic = t ** 3 + p.a * t + p.b
    if _degenerate(cubic):
        raise NonProperIntersection(f"intersection point x = {t} is 2-torsion and lies on Div f")
    h = 1 - I_BI * (poly_eval(e.y_num, t) / yden)
    if _degenerate(h):
        raise NonProperIntersection(f"f vanishes at the intersection point x = {t}")
    return -(cubic * h * h)


def _intersection_poly(e: Endomorphism) -> List[BiField]:
    """X(x) + x, cleared of denominators: Xnum + x * Xden."""
    n = max(len(e.x_num), len(e.x_den) + 1)
    coeffs = [BiField(0)] * n
    for k, c in enumerate(e.x_num):
        coeffs[k] = coeffs[k] + c
    for k, c in enumerate(e.x_den):
        coeffs[k + 1] = coeffs[k + 1] + c
    return poly_trim(coeffs)


def finite_part(e: Endomorphism, p: CurveParams) -> BiField:
    poly = _intersection_poly(e)
    deg = len(poly) - 1
    if deg < 0:
        raise NonProperIntersection(f"{e.name}: X(x) = -x identically, W lies in the graph")
    if deg == 0:
        return BiField(1)
    if deg == 1:
        return _f_product(e, p, -poly[0] / poly[1])
    if deg == 2:
        lin, const = poly[1] / poly[2], poly[0] / poly[2]
        if not (lin * lin - 4 * const):
            raise NonProperIntersection(f"{e.name}: X(x) + x has a double root, the intersection is not transversal")
        t = TowerElem.generator(lin, const)
        return field_norm(_f_product(e, p, t))
    raise UnsupportedTower(f"{e.name}: intersection polynomial of degree {deg} needs a deeper tower")


def graph_parts(e: Endomorphism, p: CurveParams) -> Tuple[BiField, BiField]:
    """(finite part, part at infinity) of Γ_e · (W, f)."""
    e.require_valid(p)
    fin = finite_part(e, p)
    inf = infinity_part(1, -e.mu_act.inverse(), p)
    logger.debug("Γ_%s: finite %s, infinity %s", e.name, fin, inf)
    return fin, inf


def intersect_graph(e: Endomorphism, p: CurveParams) -> BiField:
    fin, inf = graph_parts(e, p)
    return fin * inf


def intersect_basic(which: str, p: CurveParams) -> BiField:
    if which in BASIC_DIRECTIONS:
        return infinity_part(*BASIC_DIRECTIONS[which], p)
    if which == "DiagE":
        return intersect_graph(Endomorphism.identity(p).validate(), p)
    raise ValueError(f"unknown basic cycle {which!r}")


def cycle_class_coeffs(e: Endomorphism) -> Tuple[Fraction, Fraction, Fraction, Union[Fraction, QuadExt]]:
    """
    [Γ] = c1 Z1 + c2 Z2 + c3 Δ + c4 (transcendental part), from the
    intersection numbers (Γ.Z1, Γ.Z2, Γ.Δ) = (1, deg, deg(φ - 1)).
    """
    n = [sympy.Integer(v) for v in e.triple]
    m = sympy.Matrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    if m.det() == 0:
        raise SingularSystem("intersection matrix of Z1, Z2, Δ is singular")
    sol = m.LUsolve(sympy.Matrix(n))
    c1, c2, c3 = (Fraction(int(s.p), int(s.q)) for s in sol)
    s = c1 * e.triple[0] + c2 * e.triple[1] + c3 * e.triple[2]
    d = e.mu_act.c1
    if d == 0:
        if s != 0:
            raise SingularSystem(f"{e.name}: rational tangent action but leftover self-intersection {s}")
        return c1, c2, c3, Fraction(0)
    return c1, c2, c3, QuadExt(0, 2 * s / (7 * d), -7)


class AlgCycle:
    """Integer combination of Z1, Z2, DiagE and graphs Γ_e."""

    def __init__(self, coeffs: Optional[Dict[str, int]] = None, endos: Optional[Dict[str, Endomorphism]] = None):
        self.endos = dict(endos or {})
        self.coeffs = {}
        for k, v in (coeffs or {}).items():
            if int(v) != v:
                raise ValueError(f"cycle coefficients are integers, got {v} for {k}")
            if v:
                self.coeffs[k] = int(v)
        for k in self.coeffs:
            if k.startswith("Gamma:") and k[len("Gamma:"):] not in self.endos:
                raise UnvalidatedEndo(f"{k} has no endomorphism attached")

    @classmethod
    def basic(cls, which: str) -> "AlgCycle":
        return cls({which: 1})

    @classmethod
    def graph(cls, e: Endomorphism) -> "AlgCycle":
        return cls({f"Gamma:{e.name}": 1}, {e.name: e})

    def __add__(self, other: "AlgCycle") -> "AlgCycle":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AlgCycle(out, {**self.endos, **other.endos})

    def __mul__(self, n: int) -> "AlgCycle":
        return AlgCycle({k: v * n for k, v in self.coeffs.items()}, self.endos)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgCycle":
        return self * -1

    def __sub__(self, other: "AlgCycle") -> "AlgCycle":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, AlgCycle):
            return NotImplemented
        return self.coeffs == other.coeffs

    def items(self) -> Iterator[Tuple[str, int]]:
        return iter(sorted(self.coeffs.items()))

    def __str__(self):
        return " + ".join(f"{v}·{k}" for k, v in self.items()) or "0"


def cm_cycle(e: Endomorphism) -> AlgCycle:
    """2 (Γ - c1 Z1 - c2 Z2 - c3 Δ); for τ7 this is 2Γ - 5Z1 - 3Z2 + Δ."""
    c1, c2, c3, _ = cycle_class_coeffs(e)
    coeffs = {"Z1": -2 * c1, "Z2": -2 * c2, "DiagE": -2 * c3}
    for k, v in coeffs.items():
        if v.denominator != 1:
            raise SingularSystem(f"{e.name}: non-integral coefficient {v} for {k}")
    return AlgCycle({k: int(v) for k, v in coeffs.items()}) + AlgCycle.graph(e) * 2


def intersect_cycle(c: AlgCycle, p: CurveParams) -> BiField:
    value = BiField(1)
    for key, n in c.items():
        if key.startswith("Gamma:"):
            part = intersect_graph(c.endos[key[len("Gamma:"):]], p)
        else:
            part = intersect_basic(key, p)
        value = value * part ** n
    return value
