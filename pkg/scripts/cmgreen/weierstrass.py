"""
Power series on the Weierstrass family y^2 = x^3 + a x + b around the origin
at infinity, the derivations delta_e / delta_s and the dictionary mu into
quasi-modular forms.

Coefficients are WeightedPoly in a, b (and a formal E2 for v).
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

import sympy

from scripts.cmgreen.errors import DomainError, UnknownWeight
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.exact.wpoly import QMPoly, WeightedPoly
from scripts.cmgreen.logger import logger
from scripts.cmgreen.records import CheckItem

A = WeightedPoly.a()
B = WeightedPoly.b()
E2 = WeightedPoly.e2()
ONE = WeightedPoly.const(1)

BASIC_NAMES = ("x", "y", "u", "t", "z_of_t", "v0", "v")

EVEN, ODD = 0, 1


@dataclass(frozen=True)
class WSeries:
    """A series tagged with its G_m weight and z-parity (None when unknown)."""

    series: TruncatedLaurent
    weight: Optional[int] = None
    parity: Optional[int] = None

    def __post_init__(self):
        if self.parity is not None:
            bad = [k for k in self.series.terms if k % 2 != self.parity]
            if bad:
                raise ValueError(f"parity {self.parity} violated at z^{bad[0]}")

    def coeff(self, k: int):
        return self.series.coeff(k)

    def __mul__(self, other: "WSeries") -> "WSeries":
        w = None if self.weight is None or other.weight is None else self.weight + other.weight
        p = None if self.parity is None or other.parity is None else (self.parity + other.parity) % 2
        return WSeries(self.series.mul(other.series), w, p)

    def __add__(self, other: "WSeries") -> "WSeries":
        w = self.weight if self.weight == other.weight else None
        p = self.parity if self.parity == other.parity else None
        return WSeries(self.series + other.series, w, p)


@lru_cache(maxsize=None)
def _x_series(n: int) -> TruncatedLaurent:
    # x = z^-2 + sum_{k>=2} c_k z^{2k-2}
    c = {2: -A / 5, 3: -B / 7}
    k = 4
    while 2 * k - 2 < n:
        acc = WeightedPoly()
        for m in range(2, k - 1):
            acc = acc + c[m] * c[k - m]
        c[k] = acc * Fraction(3, (2 * k + 1) * (k - 3))
        k += 1
    terms = {-2: ONE}
    terms.update({2 * m - 2: cm for m, cm in c.items()})
    return TruncatedLaurent(terms, n)


def _check_order(n: int) -> None:
    if n < 10:
        raise DomainError(f"series order must be at least 10, got {n}")


@lru_cache(maxsize=None)
def expand_basic(name: str, n: int) -> WSeries:
    """
    x, y, v0, v in z; t = -x/y; z_of_t, u = dz/dt, and x, y as series in t.
    Valid below z^n (t^n for the t-series).
    """
    _check_order(n)
    if name == "x":
        return WSeries(_x_series(n), 2, EVEN)
    if name == "y":
        return WSeries(_x_series(n + 1).derive() * Fraction(1, 2), 3, ODD)
    if name == "v0":
        return WSeries((-_x_series(n - 1).integrate()), 1, ODD)
    if name == "v":
        v0 = expand_basic("v0", n).series
        return WSeries(v0 + TruncatedLaurent.z(1, E2 / 12), 1, ODD)
    if name == "t":
        x, y = expand_basic("x", n + 4).series, expand_basic("y", n + 4).series
        return WSeries((-x / y).truncate(n), -1, ODD)
    if name == "z_of_t":
        return WSeries(expand_basic("t", n + 1).series.revert(n), -1, ODD)
    if name == "u":
        return WSeries(expand_basic("z_of_t", n + 1).series.derive(), 0, EVEN)
    if name in ("x_of_t", "y_of_t"):
        inner = expand_basic("z_of_t", n + 4).series
        outer = expand_basic(name[0], n + 4).series
        return WSeries(outer.compose(inner).truncate(n), 2 if name == "x_of_t" else 3, EVEN if name == "x_of_t" else ODD)
    raise DomainError(f"unknown basic series {name!r}")


def coeffwise_delta_e(f: TruncatedLaurent) -> TruncatedLaurent:
    return f.map_coeffs(lambda c: c.delta_e() if isinstance(c, WeightedPoly) else 0)


def coeffwise_delta_s(f: TruncatedLaurent) -> TruncatedLaurent:
    return f.map_coeffs(lambda c: c.delta_s() if isinstance(c, WeightedPoly) else 0)


def lifted_delta_e(f: TruncatedLaurent) -> TruncatedLaurent:
    """delta_e acting on a function of (a, b, z): coefficientwise part plus z -> -z."""
    return coeffwise_delta_e(f) - TruncatedLaurent.z().mul(f.derive())


def lifted_delta_s(f: TruncatedLaurent, n: Optional[int] = None) -> TruncatedLaurent:
    """delta_s on a function of (a, b, z), using delta_s z = -v0."""
    n = n if n is not None else (f.trunc if f.trunc is not None else 30) + 2
    v0 = expand_basic("v0", max(n, 10)).series
    return coeffwise_delta_s(f) - v0.mul(f.derive())


def derive(op: str, s: WSeries) -> WSeries:
    if op == "ddz":
        p = None if s.parity is None else 1 - s.parity
        w = None if s.weight is None else s.weight + 1
        return WSeries(s.series.derive(), w, p)
    if s.weight is None:
        raise UnknownWeight(f"{op} needs a weight-tagged series")
    if op == "de_star":
        return WSeries(lifted_delta_e(s.series), s.weight, s.parity)
    if op == "ds_star":
        return WSeries(lifted_delta_s(s.series), s.weight + 2, s.parity)
    raise DomainError(f"unknown derivation {op!r}")


def mu(p: WeightedPoly) -> QMPoly:
    """a -> -E4/48, b -> E6/864, E2 -> E2."""
    if not isinstance(p, WeightedPoly):
        return QMPoly.const(p)
    out = {}
    for (m, n, k), c in p.terms.items():
        out[(k, m, n)] = c * Fraction(-1, 48) ** m * Fraction(1, 864) ** n
    return QMPoly(out)


def mu_commutes_check() -> List[CheckItem]:
    items = []
    for label, gen in (("1", ONE), ("a", A), ("b", B), ("E2", E2)):
        lhs, rhs = mu(gen.delta_s()), mu(gen).delta_s()
        items.append(CheckItem(name=f"mu∘δs = δs∘mu on {label}", passed=lhs == rhs, detail=f"{lhs} vs {rhs}"))
    return items


def discriminant_poly() -> WeightedPoly:
    return -16 * (4 * A ** 3 + 27 * B ** 2)


@dataclass(frozen=True)
class RelForm:
    """A relative one-form dz_part*dz + de_part*d_e + ds_part*d_s."""

    dz: TruncatedLaurent
    de: TruncatedLaurent
    ds: TruncatedLaurent
    weight: Optional[int] = None

    @classmethod
    def zero(cls) -> "RelForm":
        z = TruncatedLaurent()
        return cls(z, z, z)

    @property
    def parts(self):
        return (self.dz, self.de, self.ds)

    def __add__(self, other: "RelForm") -> "RelForm":
        return RelForm(self.dz + other.dz, self.de + other.de, self.ds + other.ds)

    def __neg__(self) -> "RelForm":
        return RelForm(-self.dz, -self.de, -self.ds, self.weight)

    def __sub__(self, other: "RelForm") -> "RelForm":
        return self + (-other)

    def __mul__(self, c) -> "RelForm":
        """Multiply by a function series or a scalar."""
        if isinstance(c, TruncatedLaurent):
            return RelForm(self.dz.mul(c), self.de.mul(c), self.ds.mul(c))
        return RelForm(self.dz * c, self.de * c, self.ds * c, self.weight)

    __rmul__ = __mul__

    def truncate(self, n: int) -> "RelForm":
        return RelForm(self.dz.truncate(n), self.de.truncate(n), self.ds.truncate(n), self.weight)

    def first_disagreement(self, other: "RelForm"):
        for label, mine, theirs in zip(("dz", "de", "ds"), self.parts, other.parts):
            k = mine.first_disagreement(theirs)
            if k is not None:
                return label, k
        return None


def d_function(f: TruncatedLaurent) -> RelForm:
    """Total differential of a function of (a, b, z) in the frame dz, d_e, d_s, z held fixed."""
    return RelForm(f.derive(), coeffwise_delta_e(f), coeffwise_delta_s(f))


def d_relative(form: RelForm):
    """
    d of A dz + B d_e + C d_s, as coefficients of (d_e∧dz, d_s∧dz); the
    d_e∧d_s part is dropped.
    """
    a, b, c = form.parts
    de_dz = coeffwise_delta_e(a) - b.derive()
    ds_dz = coeffwise_delta_s(a) - c.derive()
    return de_dz, ds_dz


@lru_cache(maxsize=None)
def total_differential(name: str, n: int) -> RelForm:
    """
    dx = 2y (dz + z d_e + v0 d_s) + 2x d_e + (2x^2 + 4a/3) d_s
    dy = (3x^2 + a)(dz + z d_e + v0 d_s) + 3y d_e + 3xy d_s
    """
    x = expand_basic("x", n).series
    y = expand_basic("y", n).series
    v0 = expand_basic("v0", n).series
    z = TruncatedLaurent.z()
    if name == "x":
        lead = 2 * y
        return RelForm(lead, lead.mul(z) + 2 * x, lead.mul(v0) + 2 * x.mul(x) + A * Fraction(4, 3), 2)
    if name == "y":
        lead = 3 * x.mul(x) + A
        return RelForm(lead, lead.mul(z) + 3 * y, lead.mul(v0) + 3 * x.mul(y), 3)
    raise DomainError(f"total differential is tabulated only for x and y, not {name!r}")


def relation_check(n: int) -> CheckItem:
    x = expand_basic("x", n).series
    y = expand_basic("y", n).series
    rel = y.mul(y) - x.mul(x).mul(x) - A * x - B
    first = rel.ord
    return CheckItem(
        name="y^2 = x^3 + a x + b",
        passed=first is None,
        detail=f"known below z^{rel.trunc}" if first is None else f"first nonzero coefficient at z^{first}",
    )


def base_vector_fields_check() -> List[CheckItem]:
    """
    Delta * d/db = 12 (4a delta_s - 6b delta_e) and
    Delta * d/da = -12 (6b delta_s + (4a^2/3) delta_e), checked on a and b.
    """
    disc = discriminant_poly()

    def d_db(p):
        return 12 * (4 * A * p.delta_s() - 6 * B * p.delta_e())

    def d_da(p):
        return -12 * (6 * B * p.delta_s() + Fraction(4, 3) * A * A * p.delta_e())

    expected = {("d/db", "a"): 0, ("d/db", "b"): disc, ("d/da", "a"): disc, ("d/da", "b"): 0}
    items = []
    for (field, gen_name), want in expected.items():
        gen = A if gen_name == "a" else B
        got = (d_db if field == "d/db" else d_da)(gen)
        items.append(CheckItem(name=f"Δ·{field} on {gen_name}", passed=got == want, detail=str(got)))
    return items


def bernoulli_check(n: int = 20) -> CheckItem:
    """At a = -1/48, b = 1/864, v0 = 1/(e^z - 1) + 1/2 - z/12."""
    v0 = expand_basic("v0", n).series.evaluate_coeffs(a=Fraction(-1, 48), b=Fraction(1, 864))
    zs = sympy.Symbol("z")
    ref = sympy.series(1 / (sympy.exp(zs) - 1) + sympy.Rational(1, 2) - zs / 12, zs, 0, n).removeO()
    bad = None
    for k in range(-1, n):
        want = ref.coeff(zs, k)
        got = v0.coeff(k)
        got = sympy.Rational(got.numerator, got.denominator) if not hasattr(got, "to_sympy") else got.to_sympy()
        if sympy.simplify(got - want) != 0:
            bad = k
            break
    if bad is not None:
        logger.warning("v0 at the Bernoulli point differs at z^%s", bad)
    return CheckItem(
        name="v0 at (a,b) = (-1/48, 1/864) against 1/(e^z-1) + 1/2 - z/12",
        passed=bad is None,
        detail="" if bad is None else f"first mismatch at z^{bad}",
    )


def series_verify(n: int) -> List[CheckItem]:
    """All self-checks of the series layer at order n."""
    _check_order(n)
    items = [relation_check(n)]
    t = expand_basic("t", n).series
    z_of_t = expand_basic("z_of_t", n).series
    back = z_of_t.compose(t)
    items.append(
        CheckItem(
            name="z(t(z)) = z",
            passed=back.first_disagreement(TruncatedLaurent.z()) is None,
            detail=f"known below z^{back.trunc}",
        )
    )
    v0 = expand_basic("v0", n).series
    x = expand_basic("x", n).series
    items.append(
        CheckItem(name="dv0/dz = -x", passed=(v0.derive() + x).ord is None, detail="")
    )
    lhs = lifted_delta_s(x)
    rhs = 2 * x.mul(x) + A * Fraction(4, 3)
    items.append(CheckItem(name="δs* x = 2x^2 + 4a/3", passed=lhs.first_disagreement(rhs) is None, detail=""))
    items.extend(mu_commutes_check())
    items.extend(base_vector_fields_check())
    items.append(bernoulli_check(min(n, 20)))
    return items
