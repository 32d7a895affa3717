"""
The extension of D-modules spanned by 1, θ0 = ω×ω, θ1 = η×ω + ω×η, θ2 = η×η,
and evaluation of the differential operator B on θ0.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

import sympy

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.exact.scalars import I
from scripts.cmgreen.exact.wpoly import QMPoly, WeightedPoly, as_weighted
from scripts.cmgreen.hypercover.hyperforms import ProductHyperform, hproduct
from scripts.cmgreen.hypercover.trace import TwoPiMultiple
from scripts.cmgreen.weierstrass import A, B, mu

BASIS = ("1", "θ0", "θ1", "θ2")


@dataclass(frozen=True)
class DModElem:
    coeffs: Dict[str, WeightedPoly] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.coeffs.items():
            if k not in BASIS:
                raise DomainError(f"unknown basis element {k!r}")
            c = as_weighted(c)
            if c != 0:
                clean[k] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def basis(cls, name: str) -> "DModElem":
        return cls({name: WeightedPoly.const(1)})

    def coeff(self, name: str) -> WeightedPoly:
        return self.coeffs.get(name, WeightedPoly())

    def __add__(self, other: "DModElem") -> "DModElem":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return DModElem(out)

    def __sub__(self, other: "DModElem") -> "DModElem":
        return self + other.scale(-1)

    def scale(self, c) -> "DModElem":
        return DModElem({k: v * c for k, v in self.coeffs.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, DModElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted((k, hash(v)) for k, v in self.coeffs.items())))

    def __str__(self):
        return " + ".join(f"({c})·{k}" if k != "1" else f"({c})" for k, c in self.coeffs.items()) or "0"


def _table() -> Dict[str, Dict[str, DModElem]]:
    e = DModElem.basis
    one = e("1")
    return {
        "de": {"θ0": e("θ0").scale(-2), "θ1": DModElem(), "θ2": e("θ2").scale(2)},
        "ds": {
            "θ0": e("θ1"),
            "θ1": e("θ2").scale(2) + e("θ0").scale(A * Fraction(2, 3)) + one.scale(Fraction(8, 3) * I * A * A / B),
            "θ2": e("θ1").scale(A / 3) + one.scale(-4 * I * A),
        },
    }


ACTION = _table()


def dmod_apply(d: str, x: DModElem) -> DModElem:
    """δ'_e or δ'_s by the table on the basis and the Leibniz rule on coefficients."""
    if d not in ACTION:
        raise DomainError(f"unknown derivation {d!r}")
    out = DModElem()
    for k, c in x.coeffs.items():
        dc = c.delta_e() if d == "de" else c.delta_s()
        out = out + DModElem({k: dc})
        if k != "1":
            out = out + ACTION[d][k].scale(c)
    return out


def theta_hyperforms(omega, eta) -> Dict[str, ProductHyperform]:
    return {
        "θ0": hproduct(omega, omega),
        "θ1": hproduct(eta, omega) + hproduct(omega, eta),
        "θ2": hproduct(eta, eta),
    }


@dataclass(frozen=True)
class BValue:
    scalar: WeightedPoly
    modform: QMPoly
    multiplier: TwoPiMultiple
    analytic: object
    j_form: object


def apply_b(x: DModElem) -> DModElem:
    """(δ's^3 - (4a/3) δ's - 4b) x"""
    d1 = dmod_apply("ds", x)
    d3 = dmod_apply("ds", dmod_apply("ds", d1))
    return d3 - d1.scale(A * Fraction(4, 3)) - x.scale(4 * B)


def eval_B() -> BValue:
    """
    B θ0 has no θ part; its scalar is 24ia + 32ia^4/(9b^2). Through mu and a
    factor 2πi it is -π E4 (E4^3 - E6^2)/E6^2 = -1728 π E4/(j - 1728).
    """
    res = apply_b(DModElem.basis("θ0"))
    leftover = {k: v for k, v in res.coeffs.items() if k != "1"}
    if leftover:
        raise DomainError(f"B θ0 keeps a θ part: {DModElem(leftover)}")
    scalar = res.coeff("1")
    modform = mu(scalar)
    e4, e6 = sympy.symbols("E4 E6")
    analytic = sympy.cancel(2 * sympy.pi * sympy.I * modform.to_sympy())
    j = 1728 * e4 ** 3 / (e4 ** 3 - e6 ** 2)
    j_form = -1728 * sympy.pi * e4 / (j - 1728)
    return BValue(scalar, modform, TwoPiMultiple(-3, "[ω]^4"), analytic, sympy.cancel(j_form))


def expected_modform():
    e4, e6 = sympy.symbols("E4 E6")
    return -sympy.pi * e4 * (e4 ** 3 - e6 ** 2) / e6 ** 2


def j_form_identity() -> bool:
    """j - 1728 = 1728 E6^2 / (E4^3 - E6^2) as rational functions."""
    e4, e6 = sympy.symbols("E4 E6")
    j = 1728 * e4 ** 3 / (e4 ** 3 - e6 ** 2)
    return sympy.cancel(j - 1728 - 1728 * e6 ** 2 / (e4 ** 3 - e6 ** 2)) == 0

