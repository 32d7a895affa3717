"""
One function per CLI subcommand. Each builds a RunRecord; app.py prints it and
turns it into an exit code.
"""
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import mpmath
import sympy

from scripts.cmgreen.cohomology import generator_of_coinvariants, h0_coinvariants, relations_hold, torsion_constants
from scripts.cmgreen.cycles.endomorphism import CurveParams, Endomorphism
from scripts.cmgreen.cycles.intersect import AlgCycle, cm_cycle, intersect_basic, intersect_cycle, intersect_graph
from scripts.cmgreen.errors import CmGreenError, InputError
from scripts.cmgreen.exact.scalars import BiField, I
from scripts.cmgreen.hypercover.branches import make_branches
from scripts.cmgreen.hypercover.dmodule import eval_B, expected_modform, theta_hyperforms
from scripts.cmgreen.hypercover.hyperforms import make_omega_eta
from scripts.cmgreen.hypercover.psi import psi1
from scripts.cmgreen.hypercover.trace import gauss_manin_check, poincare_pairing
from scripts.cmgreen.logger import logger
from scripts.cmgreen.numeric.conjecture import conjecture_check, endomorphism_for
from scripts.cmgreen.numeric.eichler import CMPoint, eichler_lift
from scripts.cmgreen.numeric.green import global_green
from scripts.cmgreen.records import CheckItem, NumericValue, RunRecord
from scripts.cmgreen.tool import decimal_string, parse_complex
from scripts.cmgreen.weierstrass import A, B, expand_basic, series_verify

TAU7_FORM = (1, 1, 2)
FLOOR_ORDER = 10


def numeric(x, prec: int, error=None) -> NumericValue:
    x = mpmath.mpc(x)
    return NumericValue(
        re=decimal_string(x.real),
        im=decimal_string(x.imag),
        prec=prec,
        error_bound=None if error is None else mpmath.nstr(error, 5),
    )


def _branch_f(case: int, n: int):
    return make_branches(n)[case - 1].f


def _branch_z2(case: int, n: int):
    return make_branches(n)[case - 1].z2


def _branch_dlog(case: int, part: str, n: int):
    return getattr(make_branches(n)[case - 1].dlog, part)


# displayed coefficients: (label, series getter at order n, exponent, expected)
COEFFICIENT_TABLE: List[Tuple[str, Callable, int, object]] = [
    ("x", lambda n: expand_basic("x", n).series, 2, -A / 5),
    ("x", lambda n: expand_basic("x", n).series, 4, -B / 7),
    ("x", lambda n: expand_basic("x", n).series, 6, A * A / 75),
    ("x", lambda n: expand_basic("x", n).series, 8, A * B * Fraction(3, 385)),
    ("y", lambda n: expand_basic("y", n).series, -3, -1),
    ("y", lambda n: expand_basic("y", n).series, 1, -A / 5),
    ("y", lambda n: expand_basic("y", n).series, 3, B * Fraction(-2, 7)),
    ("y", lambda n: expand_basic("y", n).series, 5, A * A / 25),
    ("y", lambda n: expand_basic("y", n).series, 7, A * B * Fraction(12, 385)),
    ("v0", lambda n: expand_basic("v0", n).series, 3, A / 15),
    ("v0", lambda n: expand_basic("v0", n).series, 5, B / 35),
    ("v0", lambda n: expand_basic("v0", n).series, 7, -A * A / 525),
    ("v0", lambda n: expand_basic("v0", n).series, 9, -A * B / 1155),
    ("z(t)", lambda n: expand_basic("z_of_t", n).series, 5, A * Fraction(2, 5)),
    ("z(t)", lambda n: expand_basic("z_of_t", n).series, 7, B * Fraction(3, 7)),
    ("z2 case 1", lambda n: _branch_z2(1, n), 1, I),
    ("z2 case 1", lambda n: _branch_z2(1, n), 7, I * B * Fraction(1, 7)),
    ("z2 case 1", lambda n: _branch_z2(1, n), 11, I * A * B * Fraction(-2, 55)),
    ("z2 case 2", lambda n: _branch_z2(2, n), 7, -I * B * Fraction(1, 7)),
    ("f case 1", lambda n: _branch_f(1, n), -3, -2),
    ("f case 1", lambda n: _branch_f(1, n), 1, A * Fraction(-2, 5)),
    ("f case 1", lambda n: _branch_f(1, n), 7, A * B * Fraction(-53, 385)),
    ("f case 2", lambda n: _branch_f(2, n), 3, -B),
    ("f case 2", lambda n: _branch_f(2, n), 9, B * B * Fraction(-3, 14)),
    ("f case 2", lambda n: _branch_f(2, n), 13, A * B * B * Fraction(17, 110)),
    ("df/f case 1 dz", lambda n: _branch_dlog(1, "dz", n), -1, -3),
    ("df/f case 1 dz", lambda n: _branch_dlog(1, "dz", n), 3, A * Fraction(4, 5)),
    ("df/f case 1 d_e", lambda n: _branch_dlog(1, "de", n), 0, 0),
    ("df/f case 2 dz", lambda n: _branch_dlog(2, "dz", n), -1, 3),
    ("df/f case 2 d_e", lambda n: _branch_dlog(2, "de", n), 0, 6),
    ("df/f case 2 d_s", lambda n: _branch_dlog(2, "ds", n), 0, A * A * Fraction(-4, 3) / B),
]


def coefficient_checks(n: int) -> List[CheckItem]:
    """Series are built at the floor order and cut back to n, so short orders fail per coefficient."""
    items = []
    for label, getter, k, want in COEFFICIENT_TABLE:
        name = f"{label}: z^{k} coefficient"
        try:
            got = getter(max(n, FLOOR_ORDER)).truncate(n).coeff(k)
        except CmGreenError as e:
            items.append(CheckItem(name=name, passed=False, detail=f"{type(e).__name__}: {e}"))
            continue
        items.append(CheckItem(name=name, passed=got == want, detail=f"got {got}, expected {want}"))
    return items


def cmd_series_verify(order: int) -> RunRecord:
    record = RunRecord(command="series-verify", params={"order": str(order)})
    for item in coefficient_checks(order):
        record.add_check(item)
    if order >= FLOOR_ORDER:
        for item in series_verify(order):
            record.add_check(item)
        f1, f2 = (b.f for b in make_branches(order))
        product = f1.mul(f2) - 2 * B
        record.add_check(
            CheckItem(
                name="f case 1 · f case 2 = 2b",
                passed=product.ord is None,
                detail=f"certified below z^{product.trunc}",
            )
        )
    return record


def cmd_psi(order: int) -> RunRecord:
    record = RunRecord(command="psi", params={"order": str(order)})
    omega, eta = make_omega_eta(order)
    branches = make_branches(order)

    pairing = poincare_pairing(omega, eta)
    record.exact["<ω,η>"] = str(pairing)
    record.add_check(CheckItem(name="Tr(ω×η) = 1", passed=pairing.scalar == 1, detail=str(pairing.scalar)))
    for item in gauss_manin_check(order):
        record.add_check(item)

    expected = {
        "θ0": (0, 0),
        "θ1": (0, I * A * A * Fraction(-8, 3) / B),
        "θ2": (0, 4 * I * A),
    }
    for name, theta in theta_hyperforms(omega, eta).items():
        value = psi1(theta, branches)
        record.exact[f"Ψ1({name})"] = str(value)
        record.add_check(CheckItem(name=f"Ψ1({name})", passed=value == expected[name], detail=str(value)))

    b = eval_B()
    record.exact["Ψ'(B)"] = str(b.scalar)
    record.exact["Ψ'(B) multiplier"] = str(b.multiplier)
    record.exact["Ψ'(B) as modular form"] = str(b.modform)
    record.exact["2πi·Ψ'(B)"] = str(b.analytic)
    want_scalar = 24 * I * A + I * A ** 4 * Fraction(32, 9) / (B * B)
    record.add_check(CheckItem(name="Ψ'(B) = 24ia + 32ia^4/(9b^2)", passed=b.scalar == want_scalar, detail=str(b.scalar)))
    special = b.scalar.evaluate(a=-35, b=-98)
    record.exact["Ψ'(B) at (a,b) = (-35,-98)"] = str(special)
    record.add_check(
        CheckItem(name="Ψ'(B) at (-35,-98) = -2560i/9", passed=special == I * Fraction(-2560, 9), detail=str(special))
    )
    record.add_check(
        CheckItem(
            name="2πi Ψ'(B) = -π E4(E4^3 - E6^2)/E6^2",
            passed=sympy.simplify(b.analytic - expected_modform()) == 0,
            detail=str(b.analytic),
        )
    )
    return record


def _curve_and_endo(curve: Optional[str], endo: Optional[str], builtin: Optional[str]):
    if builtin:
        e = Endomorphism.builtin(builtin)
        return e.curve, e
    if endo:
        e = Endomorphism.load(endo)
        if curve and CurveParams.parse(curve) != e.curve:
            raise InputError(f"--curve {curve} does not match the curve of {endo}")
        return e.curve, e
    if curve:
        return CurveParams.parse(curve), None
    raise InputError("one of --curve, --endo or --builtin is required")


def cmd_intersect(curve: Optional[str] = None, endo: Optional[str] = None, builtin: Optional[str] = None) -> RunRecord:
    p, e = _curve_and_endo(curve, endo, builtin)
    record = RunRecord(command="intersect", params={"curve": str(p), "endo": e.name if e else ""})
    values: Dict[str, BiField] = {}
    for which in ("Z1", "Z2", "DiagE"):
        values[which] = intersect_basic(which, p)
    record.add_check(CheckItem(name="Z1 · (W,f) = 2b", passed=values["Z1"] == 2 * p.b, detail=str(values["Z1"])))
    record.add_check(CheckItem(name="Z2 · (W,f) = -2b", passed=values["Z2"] == -2 * p.b, detail=str(values["Z2"])))
    if e is not None:
        e.validate()
        values[f"Γ_{e.name}"] = intersect_graph(e, p)
        cycle = cm_cycle(e)
        record.exact["Z_τ"] = str(cycle)
        z_tau = intersect_cycle(cycle, p)
        values["Z_τ"] = z_tau
        parts = AlgCycle.basic("Z1") + AlgCycle.graph(e)
        split = intersect_cycle(AlgCycle.basic("Z1"), p) * intersect_cycle(AlgCycle.graph(e), p)
        record.add_check(
            CheckItem(name="(Z1 + Γ)·(W,f) = product", passed=intersect_cycle(parts, p) == split, detail=str(parts))
        )
        if builtin == "tau7" or e.name == "tau7":
            u = BiField(-1, 1, -2, -1)
            record.add_check(CheckItem(name="u^2 = i(8 - 3√7)", passed=u * u == BiField.i() * (8 - 3 * BiField.sqrt_7()), detail=str(u * u)))
            record.add_check(CheckItem(name="Norm(u) = 1", passed=u.norm() == 1, detail=str(u.norm())))
            record.add_check(CheckItem(name="Z_τ · (W,f) = u^8", passed=z_tau == u ** 8, detail=str(z_tau)))
    for k, v in values.items():
        record.exact[k] = str(v)
    return record


def parse_point(text: str, prec: int):
    """'tau7', 'A,B,C' (a CM form) or a complex number."""
    s = text.strip().lower()
    if s == "tau7":
        return CMPoint(*TAU7_FORM)
    parts = s.split(",")
    if len(parts) == 3:
        try:
            return CMPoint(*(int(x) for x in parts))
        except ValueError:
            raise InputError(f"bad quadratic form {text!r}")
    try:
        return parse_complex(text, prec)
    except (ValueError, TypeError) as e:
        raise InputError(f"cannot parse the point {text!r}: {e}")


def _as_tau(point, prec: int):
    return point.tau(prec) if isinstance(point, CMPoint) else point


def cmd_green(z1: str, z2: str, method: str, prec: int, bound: int) -> RunRecord:
    record = RunRecord(
        command="green",
        params={"z1": z1, "z2": z2, "method": method, "prec": str(prec), "bound": str(bound)},
    )
    p1, p2 = parse_point(z1, prec), parse_point(z2, prec)
    if method == "poincare":
        res = global_green(2, _as_tau(p1, prec), _as_tau(p2, prec), bound, prec)
        record.numeric["G"] = numeric(res.value, res.prec, res.tail)
        record.params["terms"] = str(res.terms)
        if res.prec < prec:
            record.params["poincare_prec"] = str(res.prec)
        return record
    if not isinstance(p1, CMPoint):
        raise InputError("the Eichler route needs z1 given as a CM form 'A,B,C' or 'tau7'")
    if _as_tau(p2, prec) != mpmath.mpc(0, 1):
        raise InputError("the Eichler route is only available for z2 = i")
    lift = eichler_lift(p1, prec)
    record.numeric["Ĝ"] = numeric(lift.value, prec, lift.error)
    record.numeric["G"] = numeric(2 * lift.value.real, prec, 2 * lift.error)
    record.exact["modulus"] = lift.modulus
    record.exact["decomposition"] = "; ".join(f"({g}, {u})" for g, u in lift.decomposition)
    return record


def cmd_conjecture(disc: int, prec: int, endo: Optional[str] = None) -> RunRecord:
    record = RunRecord(command="conjecture", params={"disc": str(disc), "prec": str(prec), "endo": endo or ""})
    point = CMPoint.from_disc(disc)
    e = endomorphism_for(disc, endo)
    report = conjecture_check(point, e, prec)
    record.exact["point"] = str(point)
    record.exact["Z_τ · (W,f)"] = str(report.intersection)
    record.exact["j(curve)"] = str(report.j_exact)
    record.numeric["j(τ)"] = numeric(report.j_numeric, prec)
    record.numeric["√(-4D)·Ĝ"] = numeric(report.scaled, prec, report.lifted.error)
    record.numeric["2 log(Z_τ · (W,f))"] = numeric(report.log_side, prec)
    record.numeric["residual mod πi"] = numeric(report.residual, prec)
    record.add_check(CheckItem(name="j(curve) = j(τ)", passed=report.j_matches, detail="; ".join(report.notes)))
    record.add_check(
        CheckItem(
            name="√(-4D)·Ĝ ≡ 2 log(Z_τ · (W,f)) mod πi",
            passed=report.residual_abs < 1e-6,
            detail=f"|residual| = {mpmath.nstr(report.residual_abs, 5)}",
        )
    )
    return record


def cmd_torsion() -> RunRecord:
    record = RunRecord(command="torsion")
    consts = torsion_constants(2)
    for k, v in consts.items():
        record.exact[k] = str(v)
    record.exact["H0 invariant factors"] = str(h0_coinvariants())
    record.exact["H0 generator"] = str(generator_of_coinvariants())
    record.add_check(CheckItem(name="S^2 = (ST)^3 = 1 on V2", passed=relations_hold()))
    record.add_check(CheckItem(name="N_A = 1", passed=consts["N_A"] == 1, detail=str(consts["N_A"])))
    record.add_check(CheckItem(name="N_B = 2", passed=consts["N_B"] == 2, detail=str(consts["N_B"])))
    record.add_check(CheckItem(name="N = 2", passed=consts["N"] == 2, detail=str(consts["N"])))
    return record


def run(command: Callable[..., RunRecord], record_name: str, **kwargs) -> Tuple[RunRecord, int]:
    """Run a command, turning domain errors into a failed record and an exit code."""
    start = time.time()
    try:
        record = command(**kwargs)
        code = 0 if record.passed else 1
    except CmGreenError as e:
        logger.error(e, stack_info=True)
        record = RunRecord(command=record_name, params={k: str(v) for k, v in kwargs.items()}, passed=False)
        record.error = f"{type(e).__name__}: {e}"
        code = e.exit_code
    record.wall_time = time.time() - start
    return record, code
