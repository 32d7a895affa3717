from fractions import Fraction
import os
import re
from typing import Union

import mpmath

is_dev = os.getenv("APP_ENV") == "dev"
cwd = os.path.normpath(os.path.join(__file__, "../../../"))


try:
    from dotenv import load_dotenv

    load_dotenv(os.path.join(cwd, ".env"))
except Exception as e:
    print(e)


default_prec = int(os.environ.get("CMG_PREC", "256"))
default_order = int(os.environ.get("CMG_ORDER", "30"))
poincare_bound = int(os.environ.get("CMG_POINCARE_BOUND", "40"))
poincare_prec = int(os.environ.get("CMG_POINCARE_PREC", "96"))
max_workers = int(os.environ.get("CMG_WORKERS", "4"))
path_clearance = float(os.environ.get("CMG_PATH_CLEARANCE", "0.2"))
qseries_max_terms = int(os.environ.get("CMG_QSERIES_MAX_TERMS", "4000"))

data_dir = os.path.join(cwd, "scripts/cmgreen/data")

_rational_re = re.compile(r"^\s*[-+]?\d+(\s*/\s*[-+]?\d+)?\s*$")


def to_fraction(value: Union[int, str, Fraction]) -> Fraction:
    """
    Exact parse of ints, "p/q" strings and finite decimal strings.
    Floats are refused, they would silently carry binary rounding.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    s = str(value).strip()
    if _rational_re.match(s):
        return Fraction(s.replace(" ", ""))
    return Fraction(s)


def parse_complex(value: str, prec: int = default_prec) -> mpmath.mpc:
    """
    Accepts "x,y", "x+yj" and the aliases "i", "rho" (= e^{2πi/3}).
    """
    s = value.strip().lower()
    with mpmath.workprec(prec):
        if s == "i":
            return mpmath.mpc(0, 1)
        if s == "rho":
            return mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        if "," in s:
            re_part, im_part = s.split(",", 1)
            return mpmath.mpc(mpmath.mpf(re_part), mpmath.mpf(im_part))
        return mpmath.mpc(complex(s.replace("i", "j")))


def human_readable_duration(seconds: float) -> str:
    if seconds < 1:
        return f"{seconds * 1000:.0f} ms"
    if seconds < 60:
        return f"{seconds:.2f} s"
    minutes, rest = divmod(seconds, 60)
    return f"{int(minutes)} min {rest:.0f} s"


def decimal_string(x, digits: int = 30) -> str:
    """mpf / mpc rendered with a fixed number of significant digits."""
    return mpmath.nstr(x, digits, strip_zeros=False)
