"""
Hyperforms on the cover {U0, U1, U_int} of E and their exterior products on
E x E.

A component is either a function (TruncatedLaurent) or a relative one-form
(RelForm). Wedging a one-form with a base direction gives a RelTwoForm.
Two-variable product components are never stored: they are produced on
demand by restricting to a curve z -> (z, phi(z)).
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Tuple, Union

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.weierstrass import (
    A,
    ONE,
    RelForm,
    coeffwise_delta_e,
    coeffwise_delta_s,
    expand_basic,
)

Part = Union[TruncatedLaurent, RelForm]
Cell = Tuple[str, str]

CELLS = ("0", "1", "int")
CELL_DIM = {"0": 0, "1": 0, "int": 1}
BASE_DIRECTIONS = ("de", "ds")


def _is_zero(p: Part) -> bool:
    if isinstance(p, RelForm):
        return all(x.known_zero() for x in p.parts)
    return p.known_zero()


def _add(p: Part, q: Part) -> Part:
    if isinstance(p, RelForm) != isinstance(q, RelForm):
        # a zero of either kind stands in for the other
        if _is_zero(p):
            return q
        if _is_zero(q):
            return p
        raise TypeError("cannot add a function and a one-form")
    return p + q


def _mul(p: Part, q: Part) -> Part:
    if isinstance(p, RelForm) and isinstance(q, RelForm):
        raise NotImplementedError("two-form components are not restricted by any residue consumer")
    if isinstance(p, RelForm):
        return p * q
    if isinstance(q, RelForm):
        return q * p
    return p.mul(q)


@dataclass(frozen=True)
class Hyperform:
    degree: int
    comp0: Part
    comp1: Part
    comp_int: Part
    name: str = ""

    def component(self, cell: str) -> Part:
        return {"0": self.comp0, "1": self.comp1, "int": self.comp_int}[cell]

    def __add__(self, other: "Hyperform") -> "Hyperform":
        if other.degree != self.degree:
            raise DomainError("hyperforms of different degrees")
        return Hyperform(
            self.degree,
            _add(self.comp0, other.comp0),
            _add(self.comp1, other.comp1),
            _add(self.comp_int, other.comp_int),
            f"{self.name}+{other.name}",
        )

    def scale(self, c) -> "Hyperform":
        return Hyperform(self.degree, self.comp0 * c, self.comp1 * c, self.comp_int * c, self.name)

    def __neg__(self) -> "Hyperform":
        return self.scale(-1)

    def __sub__(self, other: "Hyperform") -> "Hyperform":
        return self + (-other)


def unit_hyperform() -> Hyperform:
    one = TruncatedLaurent.const(ONE)
    return Hyperform(0, one, one, TruncatedLaurent(), "1")


def make_omega_eta(n: int) -> Tuple[Hyperform, Hyperform]:
    """
    omega = (dz + z d_e + v0 d_s, dz + z d_e + O(z^n), 0)
    eta = (x dz + xz d_e + (x v0 + y) d_s, -(a/3) z d_s + O(z^n), v0 + O(z^n))
    """
    if n < 16:
        raise DomainError(f"hyperform order must be at least 16, got {n}")
    x = expand_basic("x", n + 2).series
    y = expand_basic("y", n + 2).series
    v0 = expand_basic("v0", n + 2).series
    z = TruncatedLaurent.z(1, ONE)
    one = TruncatedLaurent.const(ONE)
    tail = TruncatedLaurent.big_o(n)

    omega = Hyperform(
        1,
        RelForm(one, z, v0),
        RelForm(one + tail, z + tail, tail),
        TruncatedLaurent(),
        "ω",
    )
    eta = Hyperform(
        1,
        RelForm(x, x.mul(z), x.mul(v0) + y),
        RelForm(tail, tail, z * (-A / 3) + tail),
        v0 + tail,
        "η",
    )
    return omega, eta


@dataclass(frozen=True)
class Embedding:
    """The curve z -> (z, phi(z)) in E x E near (inf, inf)."""

    phi: TruncatedLaurent
    name: str = ""

    @classmethod
    def diagonal(cls) -> "Embedding":
        return cls(TruncatedLaurent.z(), "diagonal")

    @property
    def is_identity(self) -> bool:
        return self.phi.exact and list(self.phi.terms) == [1] and self.phi.terms[1] == 1

    @cached_property
    def dphi(self) -> RelForm:
        return RelForm(self.phi.derive(), coeffwise_delta_e(self.phi), coeffwise_delta_s(self.phi))

    def pull(self, part: Part) -> Part:
        if self.is_identity:
            return part
        if isinstance(part, TruncatedLaurent):
            return part.compose(self.phi)
        lead = part.dz.compose(self.phi)
        return RelForm(
            lead.mul(self.dphi.dz),
            lead.mul(self.dphi.de) + part.de.compose(self.phi),
            lead.mul(self.dphi.ds) + part.ds.compose(self.phi),
        )


@dataclass(frozen=True)
class RelTwoForm:
    """A relative two-form ez*d_e∧dz + sz*d_s∧dz + es*d_e∧d_s."""

    ez: TruncatedLaurent
    sz: TruncatedLaurent
    es: TruncatedLaurent

    @property
    def parts(self):
        return (self.ez, self.sz, self.es)

    def __add__(self, other: "RelTwoForm") -> "RelTwoForm":
        return RelTwoForm(self.ez + other.ez, self.sz + other.sz, self.es + other.es)

    def __mul__(self, c) -> "RelTwoForm":
        if isinstance(c, TruncatedLaurent):
            return RelTwoForm(self.ez.mul(c), self.sz.mul(c), self.es.mul(c))
        return RelTwoForm(self.ez * c, self.sz * c, self.es * c)

    __rmul__ = __mul__


def _as_wedge(u: str, part: Part) -> Union[RelForm, RelTwoForm]:
    """u ∧ part for a base direction u; a one-form part gives a relative two-form."""
    zero = TruncatedLaurent()
    if isinstance(part, RelForm):
        if u == "de":
            return RelTwoForm(part.dz, zero, part.ds)
        return RelTwoForm(zero, part.dz, -part.de)
    return RelForm(zero, part, zero) if u == "de" else RelForm(zero, zero, part)


@dataclass(frozen=True)
class ProductHyperform:
    """
    Sum of coef * (f x g), optionally wedged on the left with a base
    direction u in {d_e, d_s}.
    """

    terms: Tuple[Tuple[object, Hyperform, Hyperform], ...]
    base: Optional[str] = None

    def __post_init__(self):
        if not self.terms:
            raise DomainError("empty product hyperform")
        degrees = {f.degree + g.degree for _, f, g in self.terms}
        if len(degrees) != 1:
            raise DomainError("mixed degrees in a product hyperform")
        if self.base is not None and self.base not in BASE_DIRECTIONS:
            raise DomainError(f"unknown base direction {self.base!r}")

    @property
    def degree(self) -> int:
        _, f, g = self.terms[0]
        return f.degree + g.degree + (1 if self.base else 0)

    @property
    def label(self) -> str:
        body = " + ".join(f"{c}·{f.name}×{g.name}" if c != 1 else f"{f.name}×{g.name}" for c, f, g in self.terms)
        return f"{self.base}∧({body})" if self.base else body

    def __add__(self, other: "ProductHyperform") -> "ProductHyperform":
        if other.base != self.base:
            raise DomainError("cannot add products wedged with different base directions")
        return ProductHyperform(self.terms + other.terms, self.base)

    def scale(self, c) -> "ProductHyperform":
        return ProductHyperform(tuple((coef * c, f, g) for coef, f, g in self.terms), self.base)

    def wedge(self, u: str) -> "ProductHyperform":
        if self.base is not None:
            raise DomainError("already wedged with a base direction")
        return ProductHyperform(self.terms, u)

    def restrict(self, cell: Cell, emb: Embedding) -> Union[Part, "RelTwoForm"]:
        """Component at `cell` restricted to the curve z -> (z, phi(z))."""
        a, a2 = cell
        total: Optional[Part] = None
        for coef, f, g in self.terms:
            sign = -1 if (CELL_DIM[a] * (g.degree - CELL_DIM[a2])) % 2 else 1
            piece = _mul(f.component(a), emb.pull(g.component(a2)))
            piece = piece * (coef * sign)
            total = piece if total is None else _add(total, piece)
        if self.base is not None:
            total = _as_wedge(self.base, total)
        return total


def hproduct(f: Hyperform, g: Hyperform) -> ProductHyperform:
    """f x g with the sign (-1)^{dim a (deg g - dim a')} on cell (a, a')."""
    return ProductHyperform(((1, f, g),))


def combine(items: Iterable[Tuple[object, ProductHyperform]]) -> ProductHyperform:
    """Linear combination sum c_i * h_i of products."""
    out = None
    for c, h in items:
        h = h.scale(c)
        out = h if out is None else out + h
    return out
