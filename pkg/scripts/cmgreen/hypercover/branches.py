"""
The two branches of W: x1 + x2 = 0 through (inf, inf), and the function
f = y1 - i*y2 along each.

With zeta = sqrt(1/x) and R its compositional inverse, the branches are
z2 = R(±i zeta(z)); case 1 takes +i.
"""
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Tuple

from scripts.cmgreen.errors import CmGreenError, DivisionByZeroSeries, NonInvertibleLead
from scripts.cmgreen.exact.laurent import TruncatedLaurent
from scripts.cmgreen.exact.scalars import I
from scripts.cmgreen.hypercover.hyperforms import Embedding
from scripts.cmgreen.logger import logger
from scripts.cmgreen.weierstrass import B, RelForm, d_function, expand_basic, total_differential


@dataclass(frozen=True)
class BranchData:
    case: int
    z2: TruncatedLaurent
    f: TruncatedLaurent
    order: int

    @cached_property
    def emb(self) -> Embedding:
        return Embedding(self.z2, f"case{self.case}")

    @property
    def multiplicity(self) -> int:
        return self.f.ord

    @cached_property
    def dlog(self) -> RelForm:
        return dlog_f(self)


def _branch_points(n: int):
    m = n + 4
    x = expand_basic("x", m).series
    zeta, _ = x.inv().sqrt()
    r = zeta.revert()
    plus, minus = (-x.inv()).sqrt()
    return m, ((1, r.compose(plus)), (2, r.compose(minus)))


@lru_cache(maxsize=None)
def make_branches(n: int) -> Tuple[BranchData, BranchData]:
    m, points = _branch_points(n)
    y = expand_basic("y", m).series
    out = []
    for case, z2 in points:
        f = y - y.compose(z2) * I
        out.append(BranchData(case, z2, f, n))
    f1, f2 = out[0].f, out[1].f
    check = f1.mul(f2) - 2 * B
    if check.ord is not None:
        logger.error("f1*f2 differs from 2b at z^%s", check.ord)
        raise CmGreenError(f"branch product f1*f2 = 2b fails at z^{check.ord}")
    logger.debug("branches built at order %s, f1*f2 = 2b below z^%s", n, check.trunc)
    return tuple(out)


def _safe_inverse(f: TruncatedLaurent) -> TruncatedLaurent:
    try:
        return f.inv()
    except NonInvertibleLead as e:
        raise DivisionByZeroSeries(f"leading coefficient of f is not invertible: {e}") from e


def dlog_f(branch: BranchData) -> RelForm:
    """df/f along the branch, by the chain rule through dy."""
    m = branch.order + 4
    dy = total_differential("y", m)
    df = dy - branch.emb.pull(dy) * I
    return df * _safe_inverse(branch.f)


def dlog_f_direct(branch: BranchData) -> RelForm:
    """df/f from the coordinate expansion of f itself, z held fixed."""
    return d_function(branch.f) * _safe_inverse(branch.f)
