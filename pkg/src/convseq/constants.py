"""Partial-sum pipelines for zeta(a), 1/zeta(a), pi and e.

Each target is a kernel K with K_0 = 1. The catalog b for that kernel makes
alpha_0 (m = 1) the partial sums of K, and sum_j j*b_j = 1 - 1/lim alpha_0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import _kernels
from .errors import ParamError
from .numeric import Coefficient, promote_to_complex, to_coeff, to_json
from .recurrence import RecurrenceProblem, compute_alpha
from .sequences import SequenceSpec, TableSpec, _hasse_term, _inv_pow, catalog_b, mobius

ZETA_DIRECT = "zeta_direct"
ZETA_MOBIUS = "zeta_mobius"
ZETA_HASSE = "zeta_hasse"
PI_LEIBNIZ = "pi_leibniz"
EULER_E = "euler_e"
TARGETS = (ZETA_DIRECT, ZETA_MOBIUS, ZETA_HASSE, PI_LEIBNIZ, EULER_E)

_CATALOG = {
    ZETA_DIRECT: "zeta_direct",
    ZETA_MOBIUS: "zeta_mobius",
    ZETA_HASSE: "zeta_hasse",
    PI_LEIBNIZ: "leibniz_pi",
    EULER_E: "exp_e",
}
_ALIASES = {
    "zetadirect": ZETA_DIRECT, "zetamobius": ZETA_MOBIUS, "zetahasse": ZETA_HASSE,
    "pileibniz": PI_LEIBNIZ, "eulere": EULER_E, "leibniz_pi": PI_LEIBNIZ, "exp_e": EULER_E,
}

PARTIAL_SUM_TOL = 1e-12
# beyond this many terms exact inputs switch to binary64: the rationals in b
# grow too fast for an O(N^2) recurrence to stay interactive
EXACT_MAX_N = 200


def normalize_target(target: str) -> str:
    t = target.strip().lower()
    if t in TARGETS:
        return t
    t = _ALIASES.get(t.replace("_", "").replace("-", ""), _ALIASES.get(t))
    if t is None:
        raise ParamError(f"unknown target {target!r}; choose from {', '.join(TARGETS)}")
    return t


def zeta_reference(a) -> complex:
    """Float zeta(a) from mpmath, for residuals and deviations only."""
    s = complex(a)
    if s == 1:
        raise ParamError("zeta has a pole at a = 1")
    return complex(mpmath.zeta(s if s.imag else s.real))


def _hasse_factor(a: Coefficient) -> Coefficient:
    """2 - 2^(2-a); exact for integer a."""
    if isinstance(a, Fraction) and a.denominator == 1:
        e = 2 - a.numerator
        return 2 - (Fraction(2) ** e)
    return 2 - cmath.exp((2 - complex(a)) * math.log(2))


def _check_a(target: str, a) -> Coefficient:
    if target in (PI_LEIBNIZ, EULER_E):
        return None
    if a is None:
        raise ParamError(f"{target} needs an exponent a")
    a = to_coeff(a)
    z = promote_to_complex(a)
    if target in (ZETA_DIRECT, ZETA_MOBIUS) and not z.real > 1:
        raise ParamError(f"{target} needs Re a > 1 (got {z})")
    if target == ZETA_HASSE:
        period = 2 * math.pi / math.log(2)
        k = round(z.imag / period)
        if abs(z - complex(1, k * period)) < 1e-12:
            raise ParamError(f"zeta_hasse excludes a = 1 + 2*pi*i*{k}/log 2")
    return a


def kernel_term(target: str, a: Coefficient, j: int) -> Coefficient:
    """The summand whose partial sums alpha_0 reproduces, by direct formula."""
    if target == ZETA_DIRECT:
        return _inv_pow(j + 1, a)
    if target == ZETA_MOBIUS:
        return mobius(j + 1) * _inv_pow(j + 1, a)
    if target == ZETA_HASSE:
        return _hasse_term(j, a)
    if target == PI_LEIBNIZ:
        return Fraction((-1) ** j, 2 * j + 1)
    return Fraction(1, math.factorial(j))


def _float_kernel(target: str, a, N: int) -> np.ndarray:
    af = None if a is None else complex(a)
    return np.array([promote_to_complex(kernel_term(target, af, j)) for j in range(N + 1)])


def direct_partial_sums(target: str, a, N: int, exact: bool | None = None) -> list[Coefficient]:
    """Partial sums of the kernel, added up term by term."""
    target = normalize_target(target)
    a = _check_a(target, a)
    if _use_exact(a, N, exact):
        out, acc = [], Fraction(0)
        for j in range(N + 1):
            acc = acc + kernel_term(target, a, j)
            out.append(acc)
        return out
    ks = _float_kernel(target, a, N)
    re, im = np.cumsum(ks.real), np.cumsum(ks.imag)
    return [complex(x, y) for x, y in zip(re, im)]


def _use_exact(a, N: int, exact: bool | None) -> bool:
    rational = a is None or isinstance(a, Fraction)
    if exact is None:
        return rational and N <= EXACT_MAX_N
    if exact and not rational:
        raise ParamError("exact arithmetic needs a rational exponent")
    return exact


def kernel_b(target: str, a, N: int, exact: bool | None = None) -> SequenceSpec:
    """The b-sequence for a target, exact or as N+1 binary64 terms.

    The float form divides (1 - s) + s K(s) by K(s) in one pass.
    """
    target = normalize_target(target)
    a = _check_a(target, a)
    params = {} if a is None else {"a": a}
    if _use_exact(a, N, exact):
        return catalog_b(_CATALOG[target], params)
    ks = _float_kernel(target, a, N)
    num = np.zeros(N + 1, dtype=np.complex128)
    num[0] = 1.0
    num[1:] = ks[:N]
    num[1] -= 1.0
    return TableSpec(_kernels.divide(num, ks), _CATALOG[target], params)


def reference_value(target: str, a=None) -> complex:
    """Float value of the constant each target estimates."""
    target = normalize_target(target)
    if target == PI_LEIBNIZ:
        return complex(math.pi)
    if target == EULER_E:
        return complex(math.e)
    return zeta_reference(a)


def reference_limit(target: str, a=None) -> complex:
    """Float value of lim alpha_0."""
    target = normalize_target(target)
    if target == PI_LEIBNIZ:
        return complex(math.pi / 4)
    if target == EULER_E:
        return complex(math.e)
    z = zeta_reference(a)
    if target == ZETA_MOBIUS:
        return 1 / z
    if target == ZETA_HASSE:
        return promote_to_complex(_hasse_factor(to_coeff(a))) * z
    return z


def estimate_from_limit(target: str, a, limit: Coefficient) -> Coefficient:
    """Map lim alpha_0 to the constant itself."""
    if target == ZETA_MOBIUS:
        return 1 / limit
    if target == ZETA_HASSE:
        f = _hasse_factor(a)
        if f == 0:
            raise ParamError("2 - 2^(2-a) vanishes; the limit carries no zeta information")
        return limit / f
    if target == PI_LEIBNIZ:
        return 4 * limit
    return limit


@dataclass
class ConstantRun:
    target: str
    a: Coefficient | None
    N: int
    alpha_partial: list[Coefficient]
    b_weighted_tail: list[Coefficient]
    limit_estimate: Coefficient
    final_estimate: Coefficient
    reference: complex
    max_partial_sum_deviation: float
    meta: dict = field(default_factory=dict)

    @property
    def deviation(self) -> float:
        return abs(promote_to_complex(self.final_estimate) - self.reference)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "a": None if self.a is None else to_json(self.a),
            "N": self.N,
            "alpha_partial": [to_json(x) for x in self.alpha_partial],
            "b_weighted_tail": [to_json(x) for x in self.b_weighted_tail],
            "limit_estimate": to_json(self.limit_estimate),
            "final_estimate": to_json(self.final_estimate),
            "reference": to_json(self.reference),
            "deviation": self.deviation,
            "max_partial_sum_deviation": self.max_partial_sum_deviation,
        }


def _max_deviation(xs, ys) -> float:
    worst = 0.0
    for x, y in zip(xs, ys):
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            if x != y:
                worst = max(worst, float(abs(x - y)))
            continue
        zx, zy = promote_to_complex(x), promote_to_complex(y)
        worst = max(worst, abs(zx - zy) / max(1.0, abs(zy)))
    return worst


def run_constant(target: str, a=None, N: int = 100, exact: bool | None = None) -> ConstantRun:
    """Run the alpha_0 recurrence for a target and check it against direct summation.

    ``exact=None`` uses rationals when the exponent is rational and
    N <= EXACT_MAX_N, binary64 otherwise. Raises ParamError when the recurrence
    disagrees with the direct partial sums beyond 1e-12 (exact equality for
    rational runs).
    """
    target = normalize_target(target)
    if N < 2:
        raise ParamError("N must be >= 2")
    a = _check_a(target, a)
    exact = _use_exact(a, N, exact)
    b = kernel_b(target, a, N, exact)
    alpha = compute_alpha(RecurrenceProblem(b, 1, N)).row(0)
    direct = direct_partial_sums(target, a, N, exact)
    dev = _max_deviation(alpha, direct)
    if dev > PARTIAL_SUM_TOL:
        raise ParamError(f"recurrence and direct partial sums disagree by {dev:.3g}")
    tail, acc = [], Fraction(0)
    for j in range(N + 1):
        acc = acc + j * b(j)
        tail.append(acc)
    limit = alpha[-1]
    return ConstantRun(
        target=target,
        a=a,
        N=N,
        alpha_partial=alpha,
        b_weighted_tail=tail,
        limit_estimate=limit,
        final_estimate=estimate_from_limit(target, a, limit),
        reference=reference_value(target, a),
        max_partial_sum_deviation=dev,
    )


def weighted_b_identity(target: str, a=None, N: int = 100, exact: bool | None = None) -> float:
    """|sum_{j<=N} j b_j - (1 - 1/lim alpha_0)| with float reference constants."""
    target = normalize_target(target)
    a = _check_a(target, a)
    b = kernel_b(target, a, N, exact)
    acc = Fraction(0)
    for j in range(1, N + 1):
        acc = acc + j * b(j)
    expected = 1 - 1 / reference_limit(target, a)
    return abs(promote_to_complex(acc) - expected)
