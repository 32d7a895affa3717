"""
Comparison of the lifted Green value at a CM point with the logarithm of the
intersection number of the higher cycle with the CM cycle:

    √(-4D) Ĝ_2(z, i) ≡ 2 log(Z_z · (W, f))  (mod πi)
"""
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from scripts.cmgreen.cycles.endomorphism import Endomorphism
from scripts.cmgreen.cycles.intersect import cm_cycle, intersect_cycle
from scripts.cmgreen.errors import DecompositionMissing
from scripts.cmgreen.exact.scalars import BiField
from scripts.cmgreen.logger import logger
from scripts.cmgreen.numeric.eichler import CMPoint, LiftResult, eichler_lift, reduce_mod_pi_i
from scripts.cmgreen.numeric.modular import j_from_ab, j_invariant
from scripts.cmgreen.tool import default_prec

BUILTIN_ENDOS = {-7: "tau7"}
TOLERANCE = mpmath.mpf("1e-6")


@dataclass
class ConjectureReport:
    point: CMPoint
    endo: str
    lifted: LiftResult
    scaled: mpmath.mpc
    intersection: BiField
    log_side: mpmath.mpc
    residual: mpmath.mpc
    j_exact: object
    j_numeric: mpmath.mpc
    prec: int
    notes: list = field(default_factory=list)

    @property
    def residual_abs(self) -> mpmath.mpf:
        return abs(self.residual)

    @property
    def passed(self) -> bool:
        return self.residual_abs < TOLERANCE and self.j_matches

    @property
    def j_matches(self) -> bool:
        return abs(self.j_numeric - complex(self.j_exact)) < mpmath.mpf(10) ** -20 * (1 + abs(self.j_numeric))


def endomorphism_for(disc: int, endo_file: Optional[str] = None) -> Endomorphism:
    if endo_file:
        return Endomorphism.load(endo_file)
    if disc in BUILTIN_ENDOS:
        return Endomorphism.builtin(BUILTIN_ENDOS[disc])
    raise DecompositionMissing(f"no endomorphism data for D = {disc}, pass an endomorphism file")


def conjecture_check(point: CMPoint, endo: Endomorphism, prec: int = default_prec) -> ConjectureReport:
    endo.validate()
    curve = endo.curve
    with mpmath.workprec(prec):
        tau = point.tau(prec)
        j_exact = j_from_ab(curve.a, curve.b)
        j_num = j_invariant(tau, prec)

        lifted = eichler_lift(point, prec)
        scaled = mpmath.sqrt(-4 * point.disc) * lifted.value

        value = intersect_cycle(cm_cycle(endo), curve)
        log_side = 2 * mpmath.log(value.to_complex(prec))
        residual = reduce_mod_pi_i(scaled - log_side)

    report = ConjectureReport(point, endo.name, lifted, scaled, value, log_side, residual, j_exact, j_num, prec)
    if not report.j_matches:
        report.notes.append(f"j(curve) = {j_exact} but j(τ) = {mpmath.nstr(j_num, 20)}")
    logger.info("conjecture at %s: residual %s", point, mpmath.nstr(report.residual_abs, 5))
    return report
