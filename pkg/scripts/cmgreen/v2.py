"""
V2: polynomials p0 + p1 X + p2 X^2 with the left SL2 action and the invariant
pairing, plus the few 2x2 integer matrices the rest of the package needs.
Coefficients may be ints, Fractions or mpmath numbers.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

Matrix = Tuple[int, int, int, int]  # (a, b, c, d)

IDENTITY: Matrix = (1, 0, 0, 1)
S: Matrix = (0, -1, 1, 0)
T: Matrix = (1, 1, 0, 1)


def mat_mul(m: Matrix, n: Matrix) -> Matrix:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_inv(m: Matrix) -> Matrix:
    a, b, c, d = m
    if a * d - b * c != 1:
        raise ValueError(f"{m} is not in SL2(Z)")
    return (d, -b, -c, a)


def mat_pow(m: Matrix, n: int) -> Matrix:
    if n < 0:
        return mat_pow(mat_inv(m), -n)
    out = IDENTITY
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def mobius(m: Matrix, z):
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def same_in_psl2(m: Matrix, n: Matrix) -> bool:
    return m == n or m == tuple(-x for x in n)


@dataclass(frozen=True)
class V2Poly:
    p0: object = 0
    p1: object = 0
    p2: object = 0

    @property
    def coeffs(self):
        return (self.p0, self.p1, self.p2)

    def __add__(self, other: "V2Poly") -> "V2Poly":
        return V2Poly(self.p0 + other.p0, self.p1 + other.p1, self.p2 + other.p2)

    def __neg__(self) -> "V2Poly":
        return V2Poly(-self.p0, -self.p1, -self.p2)

    def __sub__(self, other: "V2Poly") -> "V2Poly":
        return self + (-other)

    def __mul__(self, c) -> "V2Poly":
        return V2Poly(self.p0 * c, self.p1 * c, self.p2 * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, x):
        return self.p0 + self.p1 * x + self.p2 * x * x

    def act(self, m: Matrix) -> "V2Poly":
        """
        (γp)(X) = (c'X + d')^2 p((a'X + b')/(c'X + d')) with γ^-1 = (a', b', c', d').
        S sends 1, X, X^2 to X^2, -X, 1 and T sends p(X) to p(X - 1).
        """
        a, b, c, d = mat_inv(m)
        # (c'X + d')^2, (a'X + b')(c'X + d'), (a'X + b')^2 as coefficient triples
        q0 = (d * d, 2 * c * d, c * c)
        q1 = (b * d, a * d + b * c, a * c)
        q2 = (b * b, 2 * a * b, a * a)
        return V2Poly(
            *(self.p0 * q0[k] + self.p1 * q1[k] + self.p2 * q2[k] for k in range(3))
        )

    def act_word(self, word: str) -> "V2Poly":
        """Apply a word in S, T, s = S^-1, t = T^-1, rightmost letter first."""
        return self.act(word_matrix(word))

    def pair(self, other: "V2Poly"):
        """(p, q) = p0 q2 - p1 q1 / 2 + p2 q0, invariant under SL2."""
        mid = self.p1 * other.p1
        half = Fraction(mid, 2) if isinstance(mid, int) else mid / 2
        return self.p0 * other.p2 - half + self.p2 * other.p0

    def __str__(self):
        return f"{self.p0} + {self.p1}·X + {self.p2}·X^2"


_LETTERS = {"S": S, "T": T, "s": mat_inv(S), "t": mat_inv(T)}


def word_matrix(word: str) -> Matrix:
    m = IDENTITY
    for ch in word.replace(" ", "").replace("*", ""):
        if ch == "1":
            continue
        if ch not in _LETTERS:
            raise ValueError(f"unknown letter {ch!r} in word {word!r}")
        m = mat_mul(m, _LETTERS[ch])
    return m
