"""
Residue traces of product hyperforms and the Gauss-Manin table of omega, eta.
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.hypercover.hyperforms import (
    Cell,
    Embedding,
    Hyperform,
    ProductHyperform,
    hproduct,
    make_omega_eta,
)
from scripts.cmgreen.records import CheckItem
from scripts.cmgreen.weierstrass import A, RelForm, d_function, d_relative

# the only flag through (inf, inf) on the diagonal and on W
FLAG_CELLS: Sequence[Cell] = (("0", "int"), ("int", "1"))


@dataclass(frozen=True)
class TwoPiMultiple:
    """(2πi)^power * scalar, kept symbolic."""

    power: int
    scalar: object

    def __str__(self):
        if self.power == 0:
            return str(self.scalar)
        p = "" if self.power == 1 else f"^{self.power}"
        return f"(2πi){p}·({self.scalar})"


def trace_diagonal(h: ProductHyperform, flags: Sequence[Cell] = FLAG_CELLS):
    """Sum over the flag cells of the residue of the dz part on z1 = z2 = z."""
    if h.degree != 2:
        raise DomainError(f"the diagonal trace needs a degree 2 hyperform, got {h.degree}")
    emb = Embedding.diagonal()
    total = 0
    for cell in flags:
        part = h.restrict(cell, emb)
        if isinstance(part, TruncatedLaurent):
            raise DomainError(f"component {cell} is not a one-form")
        total = total + part.dz.residue()
    return total


def poincare_pairing(f: Hyperform, g: Hyperform) -> TwoPiMultiple:
    return TwoPiMultiple(1, trace_diagonal(hproduct(f, g)))


def _connection_table(omega: Hyperform, eta: Hyperform) -> Dict[str, Dict[str, Hyperform]]:
    return {
        "ω": {"de": -omega, "ds": eta},
        "η": {"de": eta, "ds": omega.scale(A / 3)},
    }


def _compare(name: str, got: TruncatedLaurent, want: TruncatedLaurent) -> CheckItem:
    diff = got - want
    first = diff.ord
    return CheckItem(
        name=name,
        passed=first is None,
        detail=f"agrees below z^{diff.trunc}" if first is None else f"first failing coefficient z^{first}: {diff.coeff(first)}",
    )


def gauss_manin_check(n: int) -> List[CheckItem]:
    """
    Checks ∇δe ω = -ω, ∇δs ω = η, ∇δe η = η, ∇δs η = (a/3) ω on every cell,
    modulo d_e∧d_s terms and the O(z^{n-1}) tails.
    """
    omega, eta = make_omega_eta(n)
    table = _connection_table(omega, eta)
    items: List[CheckItem] = []
    for theta in (omega, eta):
        images = table[theta.name]
        for cell in ("0", "1"):
            de_dz, ds_dz = d_relative(theta.component(cell))
            items.append(
                _compare(f"∇δe {theta.name} on U{cell}", de_dz, images["de"].component(cell).dz)
            )
            items.append(
                _compare(f"∇δs {theta.name} on U{cell}", ds_dz, images["ds"].component(cell).dz)
            )
        # on U_int: d(theta_int) - theta_1 + theta_0 = (∇δe θ)_int d_e + (∇δs θ)_int d_s
        lhs = d_function(theta.comp_int) - theta.comp1 + theta.comp0
        zero = TruncatedLaurent()
        rhs = RelForm(zero, images["de"].comp_int, images["ds"].comp_int)
        for label, got, want in zip(("dz", "d_e", "d_s"), lhs.parts, rhs.parts):
            items.append(_compare(f"∇ {theta.name} on U_int, {label} part", got, want))
    return items
