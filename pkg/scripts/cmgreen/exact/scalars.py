"""
Exact scalars: rationals (fractions.Fraction), quadratic fields Q(sqrt d),
the biquadratic field Q(mu, i) with mu^2 + mu + 2 = 0, and one quadratic tower
level over it for intersection points.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Tuple, Union

import mpmath
import sympy

from scripts.cmgreen.errors import NonInvertibleLead

Rational = Fraction
RationalLike = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _mpf(q) -> mpmath.mpf:
    # mpmath.mpf does not accept Fraction; build it from the exact parts.
    q = _frac(q)
    return mpmath.mpf(q.numerator) / q.denominator


@lru_cache(maxsize=None)
def _check_squarefree(d: int) -> None:
    if d in (0, 1):
        raise ValueError(f"Q(sqrt {d}) is not a quadratic field")
    if any(e > 1 for e in sympy.factorint(abs(d)).values()):
        raise ValueError(f"{d} is not squarefree")


def rational_sqrt(q: Fraction):
    """Exact square root of a rational, None when it is not a square."""
    q = _frac(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True, eq=False)
class QuadExt:
    """x + y*sqrt(d) with d squarefree. d = -1 gives the Gaussian rationals."""

    x: Fraction
    y: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "x", _frac(self.x))
        object.__setattr__(self, "y", _frac(self.y))
        _check_squarefree(self.d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt {self.d}) and Q(sqrt {other.d})")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.x - o.x, self.y - o.y, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.x * o.x + self.d * self.y * o.y, self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def conj(self) -> "QuadExt":
        return QuadExt(self.x, -self.y, self.d)

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        c = self.conj()
        return QuadExt(c.x / n, c.y / n, self.d)

    def __truediv__(self, other):
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
        out, base = QuadExt(1, 0, self.d), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.x == other.x and self.y == other.y
        if isinstance(other, (int, Fraction)):
            return self.y == 0 and self.x == other
        return NotImplemented

    def __hash__(self):
        if self.y == 0:
            return hash(self.x)
        return hash((self.x, self.y, self.d))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def sqrt_exact(self):
        if self.y == 0:
            return sqrt_exact(self.x, self.d)
        raise NonInvertibleLead(f"no exact square root implemented for {self}")

    def to_sympy(self):
        return sympy.Rational(self.x.numerator, self.x.denominator) + sympy.Rational(
            self.y.numerator, self.y.denominator
        ) * sympy.sqrt(self.d)

    def to_complex(self, prec: int = 53) -> mpmath.mpc:
        with mpmath.workprec(prec):
            return _mpf(self.x) + _mpf(self.y) * mpmath.sqrt(mpmath.mpc(self.d))

    def __str__(self):
        unit = "i" if self.d == -1 else f"sqrt({self.d})"
        if self.y == 0:
            return str(self.x)
        if self.x == 0:
            return f"{self.y}*{unit}"
        return f"{self.x} + {self.y}*{unit}"

    __repr__ = __str__


def gaussian(x: RationalLike, y: RationalLike = 0) -> QuadExt:
    return QuadExt(x, y, -1)


I = gaussian(0, 1)


def sqrt_exact(c, d_hint: int = -1):
    """
    Square root of a rational inside Q or Q(sqrt d_hint). Negative rationals go
    to the +i branch first.
    """
    if isinstance(c, QuadExt):
        return c.sqrt_exact()
    c = _frac(c)
    r = rational_sqrt(c)
    if r is not None:
        return r
    r = rational_sqrt(-c)
    if r is not None and d_hint == -1:
        return QuadExt(0, r, -1)
    raise NonInvertibleLead(f"{c} is not a square in Q or Q(i)")


# Q(mu) as pairs (c, d) = c + d*mu, mu^2 = -mu - 2
def _qmul(p, q):
    return (p[0] * q[0] - 2 * p[1] * q[1], p[0] * q[1] + p[1] * q[0] - p[1] * q[1])


def _qadd(p, q):
    return (p[0] + q[0], p[1] + q[1])


def _qsub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def _qnorm(p) -> Fraction:
    c, d = p
    return c * c - c * d + 2 * d * d


def _qinv(p):
    n = _qnorm(p)
    if n == 0:
        raise ZeroDivisionError("inverse of zero in Q(mu)")
    c, d = p
    return ((c - d) / n, -d / n)


@dataclass(frozen=True, eq=False)
class BiField:
    """
    c0 + c1*mu + c2*i + c3*i*mu in Q(mu, i), mu = (-1 + sqrt(-7))/2.
    """

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    c3: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c0", "c1", "c2", "c3"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @classmethod
    def mu(cls) -> "BiField":
        return cls(0, 1, 0, 0)

    @classmethod
    def i(cls) -> "BiField":
        return cls(0, 0, 1, 0)

    @classmethod
    def sqrt_m7(cls) -> "BiField":
        # sqrt(-7) = 2 mu + 1
        return cls(1, 2, 0, 0)

    @classmethod
    def sqrt_7(cls) -> "BiField":
        # sqrt(7) = -i (2 mu + 1)
        return cls(0, 0, -1, -2)

    @classmethod
    def from_pair(cls, pair) -> "BiField":
        """An element c + d*mu of Q(mu) given as strings or rationals."""
        return cls(_frac(pair[0]), _frac(pair[1]))

    @classmethod
    def coerce(cls, other):
        if isinstance(other, BiField):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return cls(other)
        if isinstance(other, QuadExt):
            if other.d == -1:
                return cls(other.x, 0, other.y, 0)
            if other.d == -7:
                return cls(other.x + other.y, 2 * other.y, 0, 0)
        return NotImplemented

    @property
    def real_part(self) -> Tuple[Fraction, Fraction]:
        return (self.c0, self.c1)

    @property
    def imag_part(self) -> Tuple[Fraction, Fraction]:
        return (self.c2, self.c3)

    @classmethod
    def _from_parts(cls, a, b) -> "BiField":
        return cls(a[0], a[1], b[0], b[1])

    def __add__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        return BiField(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)

    __radd__ = __add__

    def __neg__(self):
        return BiField(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.real_part, self.imag_part
        c, d = o.real_part, o.imag_part
        return BiField._from_parts(
            _qsub(_qmul(a, c), _qmul(b, d)),
            _qadd(_qmul(a, d), _qmul(b, c)),
        )

    __rmul__ = __mul__

    def conj_i(self) -> "BiField":
        """i -> -i"""
        return BiField(self.c0, self.c1, -self.c2, -self.c3)

    def conj_mu(self) -> "BiField":
        """mu -> mu' = -1 - mu"""
        return BiField(self.c0 - self.c1, -self.c1, self.c2 - self.c3, -self.c3)

    def inverse(self) -> "BiField":
        a, b = self.real_part, self.imag_part
        # (A + iB)^{-1} = (A - iB) / (A^2 + B^2)
        n = _qadd(_qmul(a, a), _qmul(b, b))
        ninv = _qinv(n)
        return BiField._from_parts(_qmul(a, ninv), _qmul((-b[0], -b[1]), ninv))

    def __truediv__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = BiField(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def norm(self) -> Fraction:
        """Total norm from Q(mu, i) down to Q."""
        a, b = self.real_part, self.imag_part
        return _qnorm(_qadd(_qmul(a, a), _qmul(b, b)))

    def norm_mu(self) -> Fraction:
        """Norm from Q(mu) to Q, only for elements without an i part."""
        if self.c2 or self.c3:
            raise ValueError(f"{self} is not in Q(mu)")
        return _qnorm(self.real_part)

    def in_q_mu(self) -> bool:
        return not (self.c2 or self.c3)

    def is_rational(self) -> bool:
        return not (self.c1 or self.c2 or self.c3)

    def __eq__(self, other):
        o = BiField.coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.c0, self.c1, self.c2, self.c3) == (o.c0, o.c1, o.c2, o.c3)

    def __hash__(self):
        if self.is_rational():
            return hash(self.c0)
        return hash((self.c0, self.c1, self.c2, self.c3))

    def __bool__(self):
        return bool(self.c0 or self.c1 or self.c2 or self.c3)

    def to_sympy(self):
        mu = (-1 + sympy.sqrt(-7)) / 2
        r = lambda q: sympy.Rational(q.numerator, q.denominator)
        return sympy.expand(r(self.c0) + r(self.c1) * mu + sympy.I * (r(self.c2) + r(self.c3) * mu))

    def to_complex(self, prec: int = 53) -> mpmath.mpc:
        with mpmath.workprec(prec + 10):
            mu = (mpmath.mpf(-1) + mpmath.sqrt(7) * 1j) / 2
            val = (
                _mpf(self.c0)
                + _mpf(self.c1) * mu
                + 1j * (_mpf(self.c2) + _mpf(self.c3) * mu)
            )
        with mpmath.workprec(prec):
            return +val

    def __str__(self):
        parts = []
        for coef, unit in ((self.c0, ""), (self.c1, "mu"), (self.c2, "i"), (self.c3, "i*mu")):
            if coef == 0:
                continue
            if unit == "":
                parts.append(str(coef))
            elif coef == 1:
                parts.append(unit)
            elif coef == -1:
                parts.append(f"-{unit}")
            else:
                parts.append(f"{coef}*{unit}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


@dataclass(frozen=True, eq=False)
class TowerElem:
    """lo + hi*t with t^2 + p*t + q = 0 over Q(mu, i)."""

    lo: BiField
    hi: BiField
    p: BiField
    q: BiField

    def __post_init__(self):
        for name in ("lo", "hi", "p", "q"):
            object.__setattr__(self, name, BiField.coerce(getattr(self, name)))

    @classmethod
    def generator(cls, p, q) -> "TowerElem":
        return cls(BiField(0), BiField(1), p, q)

    def _coerce(self, other):
        if isinstance(other, TowerElem):
            if other.p != self.p or other.q != self.q:
                raise ValueError("mixing elements of different towers")
            return other
        base = BiField.coerce(other)
        if base is NotImplemented:
            return base
        return TowerElem(base, BiField(0), self.p, self.q)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return TowerElem(self.lo + o.lo, self.hi + o.hi, self.p, self.q)

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(-self.lo, -self.hi, self.p, self.q)

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
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        bd = b * d
        return TowerElem(a * c - bd * self.q, a * d + b * c - bd * self.p, self.p, self.q)

    __rmul__ = __mul__

    def conj(self) -> "TowerElem":
        # the other root is t' = -p - t
        return TowerElem(self.lo - self.hi * self.p, -self.hi, self.p, self.q)

    def norm(self) -> BiField:
        return self.lo * self.lo - self.lo * self.hi * self.p + self.hi * self.hi * self.q

    def inverse(self) -> "TowerElem":
        n = self.norm()
        if not n:
            raise ZeroDivisionError(f"{self} has zero norm")
        c = self.conj()
        ninv = n.inverse()
        return TowerElem(c.lo * ninv, c.hi * ninv, self.p, self.q)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = TowerElem(BiField(1), BiField(0), self.p, self.q), self
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
        return self.lo == o.lo and self.hi == o.hi

    def __hash__(self):
        return hash((self.lo, self.hi, self.p, self.q))

    def __bool__(self):
        return bool(self.lo) or bool(self.hi)

    def __str__(self):
        return f"({self.lo}) + ({self.hi})*t"

    __repr__ = __str__


def field_norm(x: TowerElem) -> BiField:
    """Norm down to Q(mu, i): lo^2 - lo*hi*p + hi^2*q."""
    if isinstance(x, TowerElem):
        return x.norm()
    # a base element is a degree-two constant in the tower
    x = BiField.coerce(x)
    return x * x
