"""
The functionals Psi_1 (on degree-2 hyperforms of E x E) and Psi_0 (on
degree-1 ones and on wedge-decomposed u ∧ theta of degree 3), evaluated by
residues of df/f ∧ theta along the branches of W.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence

from scripts.cmgreen.errors import DomainError
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.exact.wpoly import WeightedPoly, as_weighted
from scripts.cmgreen.hypercover.branches import BranchData
from scripts.cmgreen.hypercover.hyperforms import ProductHyperform, RelTwoForm
from scripts.cmgreen.hypercover.trace import FLAG_CELLS
from scripts.cmgreen.weierstrass import RelForm


@dataclass(frozen=True)
class PsiValue:
    """Coefficients of d_e and d_s; the (2πi) power of the multiplier is 0 here."""

    de: WeightedPoly
    ds: WeightedPoly
    two_pi_power: int = 0

    def __eq__(self, other):
        if isinstance(other, tuple):
            return self.de == other[0] and self.ds == other[1]
        if isinstance(other, PsiValue):
            return self.de == other.de and self.ds == other.ds
        return NotImplemented

    def __add__(self, other: "PsiValue") -> "PsiValue":
        return PsiValue(self.de + other.de, self.ds + other.ds)

    def scale(self, c) -> "PsiValue":
        return PsiValue(self.de * c, self.ds * c)

    def __str__(self):
        return f"({self.de}) d_e + ({self.ds}) d_s"


def _on_branch(theta: ProductHyperform, branch: BranchData):
    total = None
    for cell in FLAG_CELLS:
        part = theta.restrict(cell, branch.emb)
        total = part if total is None else total + part
    return total


def psi1(theta: ProductHyperform, branches: Sequence[BranchData]) -> PsiValue:
    """
    Sum over branches of the residues of the d_e∧dz and d_s∧dz coefficients of
    df/f ∧ theta_s, theta_s = theta_{0,int} + theta_{int,1}.
    """
    if theta.degree != 2:
        raise DomainError(f"Ψ1 needs a degree 2 hyperform, got {theta.degree}")
    de, ds = WeightedPoly(), WeightedPoly()
    for branch in branches:
        t = _on_branch(theta, branch)
        if not isinstance(t, RelForm):
            raise DomainError("branch component of a degree 2 hyperform must be a one-form")
        F = branch.dlog
        de = de + as_weighted((F.de.mul(t.dz) - F.dz.mul(t.de)).residue())
        ds = ds + as_weighted((F.ds.mul(t.dz) - F.dz.mul(t.ds)).residue())
    return PsiValue(de, ds)


def psi0(theta: ProductHyperform, branches: Sequence[BranchData]) -> WeightedPoly:
    """
    Degree 1: sum over branches of res(F_z * theta_s).

    Degree 3, given as u ∧ theta2: the d_e∧d_s coefficient of the residues of
    df/f ∧ (u ∧ theta2)_s, i.e. res(F_z*es + F_e*sz - F_s*ez). This equals
    minus the d_e∧d_s coefficient of u ∧ Ψ1(theta2).
    """
    if theta.degree == 3:
        if theta.base is None:
            raise DomainError("a degree 3 input to Ψ0 must be wedge-decomposed as u ∧ θ")
        total = WeightedPoly()
        for branch in branches:
            t = _on_branch(theta, branch)
            if not isinstance(t, RelTwoForm):
                raise DomainError("branch component of u ∧ θ must be a relative two-form")
            F = branch.dlog
            total = total + as_weighted((F.dz.mul(t.es) + F.de.mul(t.sz) - F.ds.mul(t.ez)).residue())
        return total
    if theta.degree != 1:
        raise DomainError(f"Ψ0 needs a degree 1 hyperform or u ∧ (degree 2), got degree {theta.degree}")
    total = WeightedPoly()
    for branch in branches:
        t = _on_branch(theta, branch)
        if not isinstance(t, TruncatedLaurent):
            raise DomainError("branch component of a degree 1 hyperform must be a function")
        total = total + as_weighted((branch.dlog.dz.mul(t)).residue())
    return total


def dz_residue_sum(branches: Iterable[BranchData]):
    """Sum of res(df/f) dz-parts over the branches; vanishes since deg Div f = 0."""
    total = WeightedPoly()
    for branch in branches:
        total = total + as_weighted(branch.dlog.dz.residue())
    return total

