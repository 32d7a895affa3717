"""
Integral (co)homology of PSL2(Z) with coefficients in V2 = polynomials of
degree <= 2, enough to fix the torsion constants N_A, N_B and N.

    S v - v = (v0 - v2)(X^2 - 1) - 2 v1 X
    T v - v = -2 v2 X + v2 - v1
"""
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Dict, List, Tuple

import sympy
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.v2 import S, T, Matrix, V2Poly, mat_mul

BASIS = (V2Poly(1, 0, 0), V2Poly(0, 1, 0), V2Poly(0, 0, 1))
# denominators used to realise (Q/Z)^3 by finite subgroups
_LEVELS = (2, 6, 12)


def act(word: str, p: V2Poly) -> V2Poly:
    return p.act_word(word)


def action_matrix(m: Matrix) -> sympy.Matrix:
    """Columns are the images of 1, X, X^2."""
    cols = [b.act(m).coeffs for b in BASIS]
    return sympy.Matrix(3, 3, lambda r, c: cols[c][r])


def boundary_matrix() -> sympy.Matrix:
    """[S - 1 | T - 1] on the basis 1, X, X^2."""
    eye = sympy.eye(3)
    return (action_matrix(S) - eye).row_join(action_matrix(T) - eye)


def h0_coinvariants() -> List[int]:
    return [int(d) for d in invariant_factors(boundary_matrix(), domain=sympy.ZZ)]


def image_lattice_contains(p: V2Poly) -> bool:
    """Is p = (S - 1)u + (T - 1)v for integral u, v."""
    if any(Fraction(c).denominator != 1 for c in p.coeffs):
        return False
    basis = hermite_normal_form(boundary_matrix())
    if basis.shape != (3, 3):
        raise DomainError(f"boundary lattice has rank {basis.shape[1]}, expected 3")
    x = basis.LUsolve(sympy.Matrix([int(c) for c in p.coeffs]))
    return all(v.is_integer for v in x)


def relation_constraints() -> Dict[str, sympy.Matrix]:
    """
    A cocycle normalised by c(T) = 0 is fixed by v = c(S); S^2 = 1 and
    (ST)^3 = 1 force (1 + S) v and (1 + ST + (ST)^2) v to be integral.
    """
    st = action_matrix(mat_mul(S, T))
    return {
        "1+S": sympy.eye(3) + action_matrix(S),
        "1+ST+(ST)^2": sympy.eye(3) + st + st * st,
    }


def _is_integral(m: sympy.Matrix, v: Tuple[Fraction, ...]) -> bool:
    for r in range(m.rows):
        s = sum(Fraction(int(m[r, c])) * v[c] for c in range(3))
        if s.denominator != 1:
            return False
    return True


def _mod1(v) -> Tuple[Fraction, ...]:
    return tuple(x - (x.numerator // x.denominator) for x in v)


def _h1_at_level(level: int) -> int:
    """|cocycles| / |coboundaries| inside ((1/level) Z / Z)^3."""
    grid = [tuple(Fraction(a, level) for a in t) for t in product(range(level), repeat=3)]
    rels = relation_constraints()
    cocycles = {v for v in grid if all(_is_integral(m, v) for m in rels.values())}
    t_minus = action_matrix(T) - sympy.eye(3)
    s_minus = action_matrix(S) - sympy.eye(3)
    coboundaries = set()
    for w in grid:
        if not _is_integral(t_minus, w):
            continue
        image = tuple(sum(Fraction(int(s_minus[r, c])) * w[c] for c in range(3)) for r in range(3))
        coboundaries.add(_mod1(image))
    if not coboundaries <= cocycles:
        raise DomainError(f"coboundaries at level {level} are not cocycles")
    return len(cocycles) // len(coboundaries)


def h1_parabolic_order() -> int:
    orders = {level: _h1_at_level(level) for level in _LEVELS}
    if len(set(orders.values())) != 1:
        raise DomainError(f"H^1_par order depends on the level: {orders}")
    return orders[_LEVELS[-1]]


def relations_hold() -> bool:
    """S^2 and (ST)^3 act trivially on V2."""
    return all(act(w, b) == b for w in ("SS", "STSTST") for b in BASIS)


def torsion_constants(k: int = 2) -> Dict[str, int]:
    if k != 2:
        raise DomainError(f"torsion constants are only computed for k = 2, got {k}")
    factors = h0_coinvariants()
    n_b = 1
    for d in factors:
        n_b *= d
    n_a = h1_parabolic_order()
    return {"N_A": n_a, "N_B": n_b, "N": n_a * n_b * factorial(k - 1)}


def generator_of_coinvariants() -> V2Poly:
    """X generates H_0 = Z/2: X is not a boundary, 2X is."""
    x = V2Poly(0, 1, 0)
    if image_lattice_contains(x) or not image_lattice_contains(x * 2):
        raise DomainError("X does not generate the coinvariants")
    return x
