import argparse
import sys

from scripts.cmgreen.commands import (
    cmd_conjecture,
    cmd_green,
    cmd_intersect,
    cmd_psi,
    cmd_series_verify,
    cmd_torsion,
    run,
)
from scripts.cmgreen.records import RunRecord
from scripts.cmgreen.tool import default_order, default_prec, human_readable_duration, poincare_bound

tag = "\033[31m[warn]\033[0m"
ok_tag = "\033[92m[ok]\033[0m"


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="Print one JSON record instead of the table.")
    parser.add_argument(
        "--timing",
        action="store_true",
        help="Include the wall time in the output. Off by default so identical runs print identical records.",
    )


def setup_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact series, residue traces, cycle intersections and high precision Green function values at CM points."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series-verify", help="Check the Laurent expansions of the Weierstrass family coefficient by coefficient.")
    p.add_argument("--order", type=int, default=default_order, help=f"Series order. Default is {default_order}")
    add_output_flags(p)

    p = sub.add_parser("psi", help="Evaluate Ψ1 on θ0, θ1, θ2 and Ψ' on the operator B.")
    p.add_argument("--order", type=int, default=default_order, help=f"Series order. Default is {default_order}")
    add_output_flags(p)

    p = sub.add_parser("intersect", help="Intersection numbers of the higher cycle with algebraic cycles.")
    p.add_argument("--curve", type=str, default=None, help="Curve coefficients 'a,b' for y^2 = x^3 + ax + b.")
    p.add_argument("--endo", type=str, default=None, help="Path to an endomorphism JSON file.")
    p.add_argument("--builtin", type=str, default=None, help="Name of a bundled endomorphism, e.g. tau7.")
    add_output_flags(p)

    p = sub.add_parser("green", help="G_2(z1, z2) by the Poincaré sum or by Eichler integrals.")
    p.add_argument("--z1", type=str, required=True, help="'x,y', 'i', 'rho', 'tau7' or a CM form 'A,B,C'.")
    p.add_argument("--z2", type=str, default="i", help="Second point, same syntax. Default is i")
    p.add_argument("--method", choices=["poincare", "eichler"], default="poincare")
    p.add_argument("--prec", type=int, default=default_prec, help=f"Working precision in bits. Default is {default_prec}")
    p.add_argument("--bound", type=int, default=poincare_bound, help=f"Matrix entry bound M of the Poincaré sum. Default is {poincare_bound}")
    add_output_flags(p)

    p = sub.add_parser("conjecture", help="Compare √(-4D)·Ĝ with 2 log of the CM cycle intersection.")
    p.add_argument("--disc", type=int, required=True, help="Negative discriminant D.")
    p.add_argument("--prec", type=int, default=default_prec, help=f"Working precision in bits. Default is {default_prec}")
    p.add_argument("--endo", type=str, default=None, help="Endomorphism file for discriminants without bundled data.")
    add_output_flags(p)

    p = sub.add_parser("torsion", help="Torsion constants N_A, N_B and N of PSL2(Z) acting on V2.")
    add_output_flags(p)
    return parser


def print_record(record: RunRecord, timing: bool) -> None:
    print(f"{record.command} {' '.join(f'{k}={v}' for k, v in record.params.items() if v)}")
    for k, v in record.exact.items():
        print(f"  {k}: {v}")
    for k, v in record.numeric.items():
        err = f"  (± {v.error_bound})" if v.error_bound else ""
        print(f"  {k}: {v.re} + {v.im}·i{err}")
    for item in record.checks:
        print(f"  {ok_tag if item.passed else tag} {item.name}{'  ' + item.detail if item.detail else ''}")
    if record.error:
        print(f"{tag} {record.error}")
    if timing and record.wall_time is not None:
        print(f"  wall time: {human_readable_duration(record.wall_time)}")
    print("all checks passed. ✨" if record.passed else f"{tag} some checks failed")


COMMANDS = {
    "series-verify": (cmd_series_verify, ("order",)),
    "psi": (cmd_psi, ("order",)),
    "intersect": (cmd_intersect, ("curve", "endo", "builtin")),
    "green": (cmd_green, ("z1", "z2", "method", "prec", "bound")),
    "conjecture": (cmd_conjecture, ("disc", "prec", "endo")),
    "torsion": (cmd_torsion, ()),
}


def main(argv=None) -> int:
    parser = setup_parser()
    args = parser.parse_args(argv)
    fn, names = COMMANDS[args.command]
    record, code = run(fn, args.command, **{n: getattr(args, n) for n in names})
    if args.json:
        print(record.to_json(timing=args.timing))
    else:
        print_record(record, args.timing)
    return code


if __name__ == "__main__":
    sys.exit(main())
