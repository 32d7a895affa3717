"""
Weighted polynomial rings used as series coefficients.

WeightedPoly lives in Q(i)[a, b, b^-1, E2] with weights 4, 6, 2 and QMPoly in
Q(i)[E2, E4, E6, E6^-1] with weights 2, 4, 6. Terms are kept in a dict keyed
by exponent triples.
"""
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

import sympy

from scripts.cmgreen.errors import NonInvertibleLead
from scripts.cmgreen.exact.scalars import BiField, QuadExt, sqrt_exact

Key = Tuple[int, int, int]
_SCALARS = (int, Fraction, QuadExt, BiField)


def _add_into(out: Dict[Key, object], key: Key, c) -> None:
    v = out.get(key)
    out[key] = c if v is None else v + c


class _GradedPoly:
    weights: Tuple[int, int, int]
    names: Tuple[str, str, str]
    laurent_slot: int

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Key, object]] = None):
        clean = {}
        for key, c in (terms or {}).items():
            if isinstance(c, bool) or not isinstance(c, _SCALARS):
                raise TypeError(f"unsupported coefficient {c!r}")
            if c == 0:
                continue
            for slot, e in enumerate(key):
                if e < 0 and slot != self.laurent_slot:
                    raise ValueError(f"negative power of {self.names[slot]} in {self.__class__.__name__}")
            clean[tuple(key)] = c
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def gen(cls, slot: int, power: int = 1):
        key = [0, 0, 0]
        key[slot] = power
        return cls({tuple(key): 1})

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = {k: v for k, v in terms.items() if v != 0}
        return obj

    def _coerce(self, other):
        if isinstance(other, self.__class__):
            return other
        if isinstance(other, _SCALARS) and not isinstance(other, bool):
            return self.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(out, k, c)
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, _SCALARS) and not isinstance(other, bool):
            if other == 0:
                return self._raw({})
            return self._raw({k: c * other for k, c in self.terms.items()})
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out: Dict[Key, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                _add_into(out, (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]), c1 * c2)
        return self._raw(out)

    __rmul__ = __mul__

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def inverse(self):
        if not self.is_monomial():
            raise NonInvertibleLead(f"{self} is not a monomial and has no inverse in {self.__class__.__name__}")
        (key, c), = self.terms.items()
        if any(e != 0 for slot, e in enumerate(key) if slot != self.laurent_slot):
            raise NonInvertibleLead(f"{self} has a non-invertible variable")
        neg = tuple(-e for e in key)
        inv = Fraction(1) / c if isinstance(c, (int, Fraction)) else c.inverse()
        return self.__class__({neg: inv})

    def __truediv__(self, other):
        if isinstance(other, _SCALARS) and not isinstance(other, bool):
            inv = Fraction(1) / other if isinstance(other, (int, Fraction)) else other.inverse()
            return self * inv
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.const(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if list(self.terms) == [(0, 0, 0)]:
            return hash(self.terms[(0, 0, 0)])
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def monomial_weight(self, key: Key) -> int:
        return sum(w * e for w, e in zip(self.weights, key))

    def weight(self) -> Optional[int]:
        """Common weight of all monomials, None if mixed or zero."""
        ws = {self.monomial_weight(k) for k in self.terms}
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({self.monomial_weight(k) for k in self.terms}) <= 1

    def sqrt_exact(self):
        if not self.is_monomial():
            raise NonInvertibleLead(f"no exact square root of {self}")
        (key, c), = self.terms.items()
        if any(e % 2 for e in key):
            raise NonInvertibleLead(f"{self} is not an even monomial")
        return self.__class__({tuple(e // 2 for e in key): sqrt_exact(c)})

    def map_coeffs(self, fn: Callable):
        return self._raw({k: fn(c) for k, c in self.terms.items()})

    def scale_by_weight(self):
        """Euler derivation: each monomial times its weight."""
        return self._raw({k: c * self.monomial_weight(k) for k, c in self.terms.items()})

    def derivation(self, images: Sequence):
        """The derivation sending generator slot s to images[s]."""
        out = self._raw({})
        for key, c in self.terms.items():
            for slot, img in enumerate(images):
                e = key[slot]
                if e == 0 or img is None:
                    continue
                lowered = list(key)
                lowered[slot] -= 1
                out = out + self._raw({tuple(lowered): c * e}) * img
        return out

    def evaluate(self, *values):
        values = [Fraction(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in values]
        total = 0
        for key, c in self.terms.items():
            term = c
            for v, e in zip(values, key):
                if e:
                    term = term * (v ** e if e > 0 else 1 / (v ** (-e)))
            total = total + term
        return total

    def _symbols(self):
        return sympy.symbols(" ".join(self.names))

    def to_sympy(self):
        syms = self._symbols()
        expr = sympy.Integer(0)
        for key, c in self.terms.items():
            coef = c.to_sympy() if hasattr(c, "to_sympy") else sympy.Rational(c.numerator, c.denominator)
            mono = sympy.Integer(1)
            for s, e in zip(syms, key):
                mono *= s ** e
            expr += coef * mono
        return expr

    def __str__(self):
        return str(self.to_sympy()) if self.terms else "0"

    def __repr__(self):
        return f"{self.__class__.__name__}({self})"


class WeightedPoly(_GradedPoly):
    """Polynomials in a, b, E2 (weights 4, 6, 2), Laurent in b."""

    weights = (4, 6, 2)
    names = ("a", "b", "E2")
    laurent_slot = 1
    __slots__ = ()

    @classmethod
    def a(cls) -> "WeightedPoly":
        return cls.gen(0)

    @classmethod
    def b(cls) -> "WeightedPoly":
        return cls.gen(1)

    @classmethod
    def e2(cls) -> "WeightedPoly":
        return cls.gen(2)

    def delta_e(self) -> "WeightedPoly":
        return self.scale_by_weight()

    def delta_s(self) -> "WeightedPoly":
        a, b, e2 = self.a(), self.b(), self.e2()
        return self.derivation((6 * b, Fraction(-4, 3) * a * a, Fraction(-1, 12) * e2 * e2 + 4 * a))

    def evaluate(self, a=None, b=None, E2=None):
        used = [slot for key in self.terms for slot, e in enumerate(key) if e]
        for slot, v in zip(range(3), (a, b, E2)):
            if v is None and slot in used:
                raise ValueError(f"{self.names[slot]} is needed to evaluate {self}")
        return super().evaluate(a, b, E2)


class QMPoly(_GradedPoly):
    """Quasi-modular forms: polynomials in E2, E4, E6 (weights 2, 4, 6), Laurent in E6."""

    weights = (2, 4, 6)
    names = ("E2", "E4", "E6")
    laurent_slot = 2
    __slots__ = ()

    @classmethod
    def e2(cls) -> "QMPoly":
        return cls.gen(0)

    @classmethod
    def e4(cls) -> "QMPoly":
        return cls.gen(1)

    @classmethod
    def e6(cls) -> "QMPoly":
        return cls.gen(2)

    def delta_e(self) -> "QMPoly":
        return self.scale_by_weight()

    def delta_s(self) -> "QMPoly":
        e2, e4, e6 = self.e2(), self.e4(), self.e6()
        return self.derivation(
            (Fraction(-1, 12) * (e2 * e2 + e4), Fraction(-1, 3) * e6, Fraction(-1, 2) * e4 * e4)
        )


def as_weighted(c) -> WeightedPoly:
    if isinstance(c, WeightedPoly):
        return c
    return WeightedPoly.const(c)
