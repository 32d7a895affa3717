"""
Curves y^2 = x^3 + a x + b over Q and endomorphisms given as input data:
(x, y) -> (X(x), y * Y(x)) with X, Y rational functions over Q(mu).
"""
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import sympy
from pydantic import BaseModel, ValidationError

from scripts.cmgreen.errors import DegenerateCurve, InputError, UnvalidatedEndo
from scripts.cmgreen.exact.scalars import BiField
from scripts.cmgreen.logger import logger
from scripts.cmgreen.tool import data_dir, to_fraction

Poly = List[BiField]

Q_MU_MINPOLY = [1, 1, 2]


@dataclass(frozen=True)
class CurveParams:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))
        if self.discriminant == 0:
            raise DegenerateCurve(f"curve a={self.a}, b={self.b} is singular")
        if self.b == 0:
            raise DegenerateCurve("the higher cycle needs b != 0")

    @classmethod
    def parse(cls, text: str) -> "CurveParams":
        try:
            a, b = text.split(",")
        except ValueError:
            raise InputError(f"expected 'a,b', got {text!r}")
        try:
            return cls(to_fraction(a), to_fraction(b))
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad curve coefficients {text!r}: {e}")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})x + ({self.b})"


class EndomorphismFile(BaseModel):
    name: str
    field_minpoly: List[int]
    curve: Dict[str, str]
    x_num: List[Tuple[str, str]]
    x_den: List[Tuple[str, str]]
    y_num: List[Tuple[str, str]]
    y_den: List[Tuple[str, str]]
    tangent: Tuple[str, str]
    degree: int
    intersection_triple: Tuple[int, int, int]


def poly_trim(p: Sequence) -> Poly:
    out = [BiField.coerce(c) for c in p]
    while out and not out[-1]:
        out.pop()
    return out


def poly_eval(p: Sequence, t):
    """Horner evaluation; t may be a BiField or a TowerElem."""
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _to_sympy(p: Sequence[BiField], x):
    return sum((c.to_sympy() * x ** k for k, c in enumerate(p)), sympy.Integer(0))


class Endomorphism:
    def __init__(
        self,
        name: str,
        curve: CurveParams,
        x_num: Sequence,
        x_den: Sequence,
        y_num: Sequence,
        y_den: Sequence,
        tangent: BiField,
        degree: int,
        triple: Tuple[int, int, int],
    ):
        self.name = name
        self.curve = curve
        self.x_num = poly_trim(x_num)
        self.x_den = poly_trim(x_den)
        self.y_num = poly_trim(y_num)
        self.y_den = poly_trim(y_den)
        self.tangent = BiField.coerce(tangent)
        self.degree = degree
        self.triple = tuple(triple)
        self.validated = False

    @classmethod
    def from_model(cls, m: EndomorphismFile) -> "Endomorphism":
        if list(m.field_minpoly) != Q_MU_MINPOLY:
            raise UnvalidatedEndo(f"only Q(mu) with mu^2 + mu + 2 = 0 is supported, got {m.field_minpoly}")
        try:
            curve = CurveParams(to_fraction(m.curve["a"]), to_fraction(m.curve["b"]))
        except KeyError as e:
            raise InputError(f"curve is missing {e}")
        pairs = lambda ps: [BiField.from_pair(p) for p in ps]
        return cls(
            m.name,
            curve,
            pairs(m.x_num),
            pairs(m.x_den),
            pairs(m.y_num),
            pairs(m.y_den),
            BiField.from_pair(m.tangent),
            m.degree,
            m.intersection_triple,
        )

    @classmethod
    def load(cls, path: str) -> "Endomorphism":
        if not os.path.exists(path):
            raise InputError(f"endomorphism file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            try:
                model = EndomorphismFile.model_validate(json.load(f))
            except (ValidationError, json.JSONDecodeError) as e:
                raise InputError(f"malformed endomorphism file {path}: {e}")
        return cls.from_model(model)

    @classmethod
    def builtin(cls, name: str) -> "Endomorphism":
        path = os.path.join(data_dir, f"{name}.json")
        if not os.path.exists(path):
            raise InputError(f"no builtin endomorphism named {name!r}")
        return cls.load(path)

    @classmethod
    def identity(cls, curve: CurveParams) -> "Endomorphism":
        return cls("identity", curve, [0, 1], [1], [1], [1], BiField(1), 1, (1, 1, 0))

    @classmethod
    def negation(cls, curve: CurveParams) -> "Endomorphism":
        return cls("negation", curve, [0, 1], [1], [-1], [1], BiField(-1), 1, (1, 1, 4))

    def __repr__(self):
        return f"Endomorphism({self.name}, {self.curve}, validated={self.validated})"

    @property
    def mu_act(self) -> BiField:
        """Action on the tangent space at the origin, lead(X) / lead(Y)."""
        if len(self.x_num) != len(self.x_den) + 1 or len(self.y_num) != len(self.y_den):
            raise UnvalidatedEndo(f"{self.name}: X must grow like x and Y must tend to a constant")
        return (self.x_num[-1] / self.x_den[-1]) / (self.y_num[-1] / self.y_den[-1])

    def preserves_curve(self) -> bool:
        """(x^3+ax+b) Ynum^2 Xden^3 = (Xnum^3 + a Xnum Xden^2 + b Xden^3) Yden^2."""
        x = sympy.Symbol("x")
        a = sympy.Rational(self.curve.a.numerator, self.curve.a.denominator)
        b = sympy.Rational(self.curve.b.numerator, self.curve.b.denominator)
        xn, xd = _to_sympy(self.x_num, x), _to_sympy(self.x_den, x)
        yn, yd = _to_sympy(self.y_num, x), _to_sympy(self.y_den, x)
        lhs = (x ** 3 + a * x + b) * yn ** 2 * xd ** 3
        rhs = (xn ** 3 + a * xn * xd ** 2 + b * xd ** 3) * yd ** 2
        return sympy.expand(lhs - rhs) == 0

    def validate(self) -> "Endomorphism":
        mu_act = self.mu_act
        if not mu_act.in_q_mu():
            raise UnvalidatedEndo(f"{self.name}: tangent action {mu_act} is not in Q(mu)")
        if mu_act != self.tangent:
            raise UnvalidatedEndo(f"{self.name}: tangent {self.tangent} but lead(X)/lead(Y) = {mu_act}")
        norm = mu_act.norm_mu()
        if norm != self.degree:
            raise UnvalidatedEndo(f"{self.name}: degree {self.degree} but Norm(mu) = {norm}")
        triple = (1, int(norm), int((mu_act - 1).norm_mu()))
        if triple != self.triple:
            raise UnvalidatedEndo(f"{self.name}: intersection triple {self.triple}, expected {triple}")
        if not self.preserves_curve():
            raise UnvalidatedEndo(f"{self.name}: map does not preserve {self.curve}")
        self.validated = True
        logger.debug("endomorphism %s validated, mu = %s", self.name, mu_act)
        return self

    def require_valid(self, p: CurveParams) -> None:
        if not self.validated:
            raise UnvalidatedEndo(f"{self.name} has not been validated")
        if p != self.curve:
            raise UnvalidatedEndo(f"{self.name} is defined on {self.curve}, not on {p}")
