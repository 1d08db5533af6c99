"""The coefficient field.

Every sequence value is either an exact ``fractions.Fraction`` or a Python
``complex`` (a pair of binary64 floats). Exact values stay exact under
arithmetic with other exact values; anything touching a complex operand
becomes complex. Python's own numeric tower already promotes this way, so the
helpers here only normalise inputs, compare, and serialise.
"""

from __future__ import annotations

import cmath
import math
import numbers
import os
from fractions import Fraction
from typing import Iterable, Union

from .errors import ParamError, RangeError

Coefficient = Union[Fraction, complex]

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12


def default_tolerances() -> tuple[float, float]:
    """Return ``(rel_tol, abs_tol)``, honouring ``CONVSEQ_TOL``.

    The variable holds either ``rel`` or ``rel,abs``.
    """
    raw = os.environ.get("CONVSEQ_TOL")
    if not raw:
        return DEFAULT_REL_TOL, DEFAULT_ABS_TOL
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    try:
        rel = float(parts[0])
        abs_ = float(parts[1]) if len(parts) > 1 else DEFAULT_ABS_TOL
    except (ValueError, IndexError):
        raise ParamError(f"CONVSEQ_TOL={raw!r} is not 'rel' or 'rel,abs'") from None
    if not (math.isfinite(rel) and math.isfinite(abs_)) or rel < 0 or abs_ < 0:
        raise ParamError(f"CONVSEQ_TOL={raw!r} must hold finite nonnegative numbers")
    return rel, abs_


def check_finite(z: complex) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        if cmath.isnan(z):
            raise RangeError("operation produced NaN")
        raise RangeError("value overflowed the binary64 range")
    return z


def to_coeff(x) -> Coefficient:
    """Normalise ``x`` into the coefficient field.

    Integers, fractions and ``"p/q"`` strings become exact; floats and complex
    numbers become complex. JSON-style dicts are accepted as well.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ParamError("booleans are not coefficients")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, numbers.Complex):
        return check_finite(complex(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ParamError(f"cannot parse {x!r} as an exact rational") from None
    if isinstance(x, dict):
        return from_json(x)
    raise ParamError(f"unsupported coefficient {x!r}")


def is_exact(x) -> bool:
    return isinstance(x, Fraction)


def all_exact(values: Iterable) -> bool:
    return all(isinstance(v, Fraction) for v in values)


def promote_to_complex(x: Coefficient) -> complex:
    """Exact rationals round to binary64; complex values pass through."""
    if isinstance(x, Fraction):
        try:
            return complex(float(x), 0.0)
        except OverflowError:
            raise RangeError(f"{x} exceeds the binary64 range") from None
    return check_finite(complex(x))


def near_equal(x, y, rel_tol: float | None = None, abs_tol: float | None = None) -> bool:
    """Exact pairs compare by equality; anything else by mixed tolerance."""
    if rel_tol is None or abs_tol is None:
        d_rel, d_abs = default_tolerances()
        rel_tol = d_rel if rel_tol is None else rel_tol
        abs_tol = d_abs if abs_tol is None else abs_tol
    x, y = to_coeff(x), to_coeff(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    xc, yc = promote_to_complex(x), promote_to_complex(y)
    return abs(xc - yc) <= max(abs_tol, rel_tol * max(abs(xc), abs(yc)))


def magnitude(x: Coefficient) -> float:
    if isinstance(x, Fraction):
        try:
            return abs(float(x))
        except OverflowError:
            return math.inf
    return abs(x)


def log_abs(x: Coefficient) -> float:
    """``log|x|`` that survives huge numerators and denominators."""
    if isinstance(x, Fraction):
        if x == 0:
            return -math.inf
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    a = abs(x)
    return math.log(a) if a > 0 else -math.inf


def to_json(x: Coefficient) -> dict:
    if isinstance(x, Fraction):
        return {"num": str(x.numerator), "den": str(x.denominator)}
    x = complex(x)
    return {"re": x.real, "im": x.imag}


def from_json(obj) -> Coefficient:
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            try:
                return Fraction(int(obj["num"]), int(obj["den"]))
            except (ValueError, ZeroDivisionError, TypeError):
                raise ParamError(f"bad rational {obj!r}") from None
        if set(obj) <= {"re", "im"} and "re" in obj:
            re, im = obj["re"], obj.get("im", 0)
            if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
                raise ParamError(f"bad complex {obj!r}")
            return check_finite(complex(re, im))
        raise ParamError(f"bad coefficient object {obj!r}")
    return to_coeff(obj)


def format_coeff(x: Coefficient) -> str:
    """Canonical text form: ``p/q`` (or ``p``) for exact, shortest repr for floats."""
    if isinstance(x, Fraction):
        return str(x)
    x = complex(x)
    if x.imag == 0:
        return repr(x.real)
    sign = "-" if math.copysign(1.0, x.imag) < 0 else "+"
    return f"{x.real!r}{sign}{abs(x.imag)!r}j"


def to_plot_value(x: Coefficient) -> str:
    """Decimal text for plotting: exact values are rounded to binary64."""
    z = promote_to_complex(x)
    if z.imag == 0:
        return repr(z.real)
    return format_coeff(z)
