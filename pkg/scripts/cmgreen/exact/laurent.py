"""
Truncated Laurent series over an exact coefficient ring.

A series is a sparse dict {exponent: coefficient} together with `trunc`: every
coefficient of z^k with k >= trunc is unknown. `trunc is None` marks an exact
(terminating) series. Every operation propagates trunc so that no returned
coefficient is ever a guess; asking for one at or beyond trunc raises
TruncationExhausted.
"""
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from scripts.cmgreen.errors import (
    CompositionOrderViolation,
    DivisionByZeroSeries,
    NonInvertibleLead,
    OddOrderSqrt,
    TruncationExhausted,
)
from scripts.cmgreen.exact.scalars import sqrt_exact
from scripts.cmgreen.tool import default_order


def _min_bound(*bounds: Optional[int]) -> Optional[int]:
    known = [b for b in bounds if b is not None]
    return min(known) if known else None


def invert_scalar(c):
    if isinstance(c, (int, Fraction)):
        if c == 0:
            raise NonInvertibleLead("leading coefficient is zero")
        return Fraction(1) / c
    try:
        return c.inverse()
    except ZeroDivisionError as e:
        raise NonInvertibleLead(str(e)) from e


def sqrt_scalar(c):
    if hasattr(c, "sqrt_exact"):
        return c.sqrt_exact()
    return sqrt_exact(c)


class TruncatedLaurent:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Optional[Dict[int, object]] = None, trunc: Optional[int] = None):
        self.trunc = trunc
        self.terms = {
            k: c for k, c in (terms or {}).items() if c != 0 and (trunc is None or k < trunc)
        }

    # constructors
    @classmethod
    def const(cls, c) -> "TruncatedLaurent":
        return cls({0: c})

    @classmethod
    def z(cls, power: int = 1, coeff=1) -> "TruncatedLaurent":
        return cls({power: coeff})

    @classmethod
    def big_o(cls, n: int) -> "TruncatedLaurent":
        """The zero series known only below z^n, i.e. O(z^n)."""
        return cls({}, n)

    # inspection
    @property
    def exact(self) -> bool:
        return self.trunc is None

    @property
    def ord(self) -> Optional[int]:
        return min(self.terms) if self.terms else None

    @property
    def coeffs(self) -> List:
        """Dense coefficient list from ord up to the last known exponent."""
        if not self.terms:
            return []
        top = max(self.terms) + 1 if self.trunc is None else self.trunc
        return [self.terms.get(k, 0) for k in range(self.ord, top)]

    def coeff(self, k: int):
        if self.trunc is not None and k >= self.trunc:
            raise TruncationExhausted(k, self.trunc)
        return self.terms.get(k, 0)

    def lead(self):
        if not self.terms:
            raise DivisionByZeroSeries("series has no known nonzero coefficient")
        return self.terms[self.ord]

    def residue(self):
        return self.coeff(-1)

    def _low(self) -> Optional[int]:
        # lowest exponent that can be nonzero; None for the exact zero series
        if self.terms:
            return self.ord
        return self.trunc

    def is_exact_zero(self) -> bool:
        return self.trunc is None and not self.terms

    def known_zero(self) -> bool:
        """Every known coefficient vanishes."""
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # structural
    def truncate(self, n: Optional[int]) -> "TruncatedLaurent":
        if n is None:
            return self
        return TruncatedLaurent(self.terms, _min_bound(self.trunc, n))

    def shift(self, k: int) -> "TruncatedLaurent":
        """Multiply by z^k."""
        return TruncatedLaurent(
            {e + k: c for e, c in self.terms.items()}, None if self.trunc is None else self.trunc + k
        )

    def map_coeffs(self, fn: Callable) -> "TruncatedLaurent":
        return TruncatedLaurent({k: fn(c) for k, c in self.terms.items()}, self.trunc)

    def first_nonzero(self) -> Optional[int]:
        return self.ord

    # ring operations
    def __add__(self, other):
        if not isinstance(other, TruncatedLaurent):
            other = TruncatedLaurent.const(other)
        trunc = _min_bound(self.trunc, other.trunc)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TruncatedLaurent(out, trunc)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedLaurent({k: -c for k, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, TruncatedLaurent):
            other = TruncatedLaurent.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def mul(self, other: "TruncatedLaurent", n: Optional[int] = None) -> "TruncatedLaurent":
        if self.is_exact_zero() or other.is_exact_zero():
            return TruncatedLaurent()
        vf, vg = self._low(), other._low()
        trunc = _min_bound(
            vf + other.trunc if other.trunc is not None else None,
            vg + self.trunc if self.trunc is not None else None,
            n,
        )
        out: Dict[int, object] = {}
        for k1, c1 in self.terms.items():
            if trunc is not None and k1 + vg >= trunc:
                continue
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if trunc is not None and k >= trunc:
                    continue
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return TruncatedLaurent(out, trunc)

    def __mul__(self, other):
        if isinstance(other, TruncatedLaurent):
            return self.mul(other)
        if other == 0:
            return TruncatedLaurent({}, self.trunc)
        return TruncatedLaurent({k: c * other for k, c in self.terms.items()}, self.trunc)

    def __rmul__(self, other):
        if other == 0:
            return TruncatedLaurent({}, self.trunc)
        return TruncatedLaurent({k: other * c for k, c in self.terms.items()}, self.trunc)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        out = TruncatedLaurent.const(1)
        base = self
        while e:
            if e & 1:
                out = out.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return out

    def inv(self, n: Optional[int] = None) -> "TruncatedLaurent":
        v = self.ord
        if v is None:
            raise DivisionByZeroSeries("inverse of a series with no known nonzero term")
        d0 = invert_scalar(self.terms[v])
        if self.trunc is None and len(self.terms) == 1:
            return TruncatedLaurent({-v: d0})
        out_trunc = _min_bound(None if self.trunc is None else self.trunc - 2 * v, n)
        if out_trunc is None:
            out_trunc = default_order
        length = out_trunc + v
        g = sorted((k - v, c) for k, c in self.terms.items() if 0 < k - v < length)
        d = [d0]
        for k in range(1, length):
            s = 0
            for j, gj in g:
                if j > k:
                    break
                s = s + gj * d[k - j]
            d.append(-d0 * s if s != 0 else 0)
        return TruncatedLaurent({k - v: c for k, c in enumerate(d)}, out_trunc)

    def __truediv__(self, other):
        if isinstance(other, TruncatedLaurent):
            return self.mul(other.inv())
        return self * invert_scalar(other)

    def __rtruediv__(self, other):
        return self.inv() * other

    def sqrt(self, n: Optional[int] = None) -> Tuple["TruncatedLaurent", "TruncatedLaurent"]:
        """Both square roots; the first has the leading coefficient chosen by sqrt_scalar."""
        v = self.ord
        if v is None:
            raise DivisionByZeroSeries("square root of a series with no known nonzero term")
        if v % 2:
            raise OddOrderSqrt(f"series has odd order {v}")
        r = v // 2
        s0 = sqrt_scalar(self.terms[v])
        if self.trunc is None and len(self.terms) == 1:
            root = TruncatedLaurent({r: s0})
            return root, -root
        out_trunc = _min_bound(None if self.trunc is None else self.trunc - r, n)
        if out_trunc is None:
            out_trunc = default_order
        length = out_trunc - r
        half_inv = invert_scalar(2 * s0)
        s = [s0]
        for k in range(1, length):
            acc = self.terms.get(v + k, 0)
            for j in range(1, k):
                if s[j] != 0 and s[k - j] != 0:
                    acc = acc - s[j] * s[k - j]
            s.append(acc * half_inv if acc != 0 else 0)
        root = TruncatedLaurent({r + k: c for k, c in enumerate(s)}, out_trunc)
        return root, -root

    def derive(self) -> "TruncatedLaurent":
        return TruncatedLaurent(
            {k - 1: c * k for k, c in self.terms.items() if k != 0},
            None if self.trunc is None else self.trunc - 1,
        )

    def integrate(self) -> "TruncatedLaurent":
        if self.terms.get(-1, 0) != 0:
            raise ValueError("series has a z^-1 term and no Laurent antiderivative")
        return TruncatedLaurent(
            {k + 1: c * Fraction(1, k + 1) for k, c in self.terms.items()},
            None if self.trunc is None else self.trunc + 1,
        )

    def compose(self, g: "TruncatedLaurent", n: Optional[int] = None) -> "TruncatedLaurent":
        """self(g(z)); g must have order >= 1."""
        s = g.ord
        if s is None or s < 1:
            raise CompositionOrderViolation(f"inner series must have order >= 1, got {s}")
        a = self._low()
        if a is None:
            return TruncatedLaurent()
        p_g = None if g.trunc is None else g.trunc - s
        monomial_g = g.trunc is None and len(g.terms) == 1
        trunc = _min_bound(
            None if self.trunc is None else s * self.trunc,
            None if p_g is None else s * a + p_g,
            n,
        )
        if trunc is None and a < 0 and not monomial_g:
            trunc = default_order
        if not self.terms:
            return TruncatedLaurent({}, trunc)
        if a >= 0:
            power = g ** a
        else:
            # g^a = (g^-1)^|a| must be known below trunc
            ginv = g.inv(None if trunc is None else trunc - s * a - s)
            power = ginv ** (-a)
        out = TruncatedLaurent({}, trunc)
        top = max(self.terms)
        for k in range(a, top + 1):
            if trunc is not None and s * k >= trunc:
                break
            c = self.terms.get(k, 0)
            if c != 0:
                out = out + power * c
            if k < top:
                power = power.mul(g, trunc)
        return out.truncate(trunc)

    def revert(self, n: Optional[int] = None) -> "TruncatedLaurent":
        """Compositional inverse of a series z*(c + ...) with c invertible."""
        if self.ord != 1:
            raise CompositionOrderViolation(f"reversion needs order 1, got {self.ord}")
        t = _min_bound(self.trunc, n)
        if t is None:
            t = default_order
        h = self.shift(-1).inv(t - 1)
        out = {1: h.coeff(0)}
        power = h
        for m in range(2, t):
            power = power.mul(h, t - 1)
            c = power.coeff(m - 1)
            if c != 0:
                out[m] = c * Fraction(1, m)
        return TruncatedLaurent(out, t)

    # comparison helpers
    def agrees_with(self, other: "TruncatedLaurent") -> bool:
        return self.first_disagreement(other) is None

    def first_disagreement(self, other: "TruncatedLaurent") -> Optional[int]:
        return (self - other).ord

    def evaluate_coeffs(self, **values) -> "TruncatedLaurent":
        return self.map_coeffs(lambda c: c.evaluate(**values) if hasattr(c, "evaluate") else c)

    def __str__(self):
        body = " + ".join(f"({c})*z^{k}" for k, c in sorted(self.terms.items())) or "0"
        return body if self.trunc is None else f"{body} + O(z^{self.trunc})"

    __repr__ = __str__


def residue(f: TruncatedLaurent):
    return f.residue()


_OPS = {
    "add": lambda f, g, n: (f + g).truncate(n),
    "sub": lambda f, g, n: (f - g).truncate(n),
    "mul": lambda f, g, n: f.mul(g, n),
    "div": lambda f, g, n: f.mul(g.inv(n), n),
    "inv": lambda f, n: f.inv(n),
    "sqrt": lambda f, n: f.sqrt(n),
    "derive": lambda f, n: f.derive().truncate(n),
    "integrate": lambda f, n: f.integrate().truncate(n),
    "compose": lambda f, g, n: f.compose(g, n),
    "revert": lambda f, n: f.revert(n),
}


def laurent_arith(op: str, *xs: TruncatedLaurent, n: Optional[int] = None):
    """Dispatch a named series operation, with an optional truncation cap n."""
    if op not in _OPS:
        raise ValueError(f"unknown series operation {op!r}")
    return _OPS[op](*xs, n)
