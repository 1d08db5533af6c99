"""Truncated formal power series and the generating-function route to alpha.

G_alpha_k(s) (B(s) - s^m) = sum_{n=k}^{m-1} b_{n-k} s^n, so G_alpha_k is a
series quotient and its coefficients are alpha_k(0..N). M_k = (1 - s) G_alpha_k
carries the first differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DivisionByZeroLeadingCoefficient, DomainError
from .numeric import Coefficient, all_exact, to_coeff
from .sequences import SequenceSpec


@dataclass
class TruncatedSeries:
    """c_0..c_N of a power series known modulo s^(N+1)."""

    coeffs: list[Coefficient]

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("a truncated series needs at least c_0")
        self.coeffs = [to_coeff(c) for c in self.coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)

    def truncate(self, N: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs[: N + 1])

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __mul__(self, other):
        return series_mul(self, other)

    def __truediv__(self, other):
        return series_div(self, other)


def polynomial(coeffs: Sequence, N: int) -> TruncatedSeries:
    """Pad (or cut) a coefficient list to order N."""
    cs = [to_coeff(c) for c in coeffs[: N + 1]]
    cs += [Fraction(0)] * (N + 1 - len(cs))
    return TruncatedSeries(cs)


def b_series(b: SequenceSpec, N: int) -> TruncatedSeries:
    return TruncatedSeries(b.terms(N))


def series_add(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    N = min(x.order, y.order)
    return TruncatedSeries([x[n] + y[n] for n in range(N + 1)])


def series_sub(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    N = min(x.order, y.order)
    return TruncatedSeries([x[n] - y[n] for n in range(N + 1)])


def series_mul(x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    N = min(x.order, y.order)
    if x.exact and y.exact:
        out = [Fraction(0)] * (N + 1)
        for i in range(N + 1):
            xi = x[i]
            if not xi:
                continue
            for j in range(N + 1 - i):
                if y[j]:
                    out[i + j] += xi * y[j]
        return TruncatedSeries(out)
    xa = np.array([complex(c) for c in x.coeffs[: N + 1]])
    ya = np.array([complex(c) for c in y.coeffs[: N + 1]])
    return TruncatedSeries([complex(c) for c in np.convolve(xa, ya)[: N + 1]])


def shift_pow(x: TruncatedSeries, m: int) -> TruncatedSeries:
    """s^m x(s), keeping the order of x."""
    if m < 0:
        raise DomainError("shift must be >= 0")
    N = x.order
    return TruncatedSeries(([Fraction(0)] * m + list(x.coeffs))[: N + 1])


def series_div(num: TruncatedSeries, den: TruncatedSeries) -> TruncatedSeries:
    """q with q * den = num modulo s^(N+1), by forward substitution."""
    if den[0] == 0:
        raise DivisionByZeroLeadingCoefficient("denominator has zero constant term")
    N = min(num.order, den.order)
    if num.exact and den.exact:
        d0 = den[0]
        # only the nonzero part of the denominator contributes
        nz = [(i, den[i]) for i in range(1, N + 1) if den[i]]
        q = [Fraction(0)] * (N + 1)
        for n in range(N + 1):
            acc = num[n]
            for i, d in nz:
                if i > n:
                    break
                acc -= d * q[n - i]
            q[n] = acc / d0
        return TruncatedSeries(q)
    q = _kernels.divide([complex(c) for c in num.coeffs[: N + 1]],
                        [complex(c) for c in den.coeffs[: N + 1]])
    return TruncatedSeries([complex(c) for c in q])


def denominator_series(b: SequenceSpec, m: int, N: int) -> TruncatedSeries:
    """B(s) - s^m to order N."""
    cs = list(b.terms(N))
    if m <= N:
        cs[m] = cs[m] - 1
    return TruncatedSeries(cs)


def numerator_poly(b: SequenceSpec, m: int, k: int, N: int) -> TruncatedSeries:
    """sum_{n=k}^{m-1} b_{n-k} s^n to order N."""
    cs = [Fraction(0)] * m
    for n in range(k, m):
        cs[n] = b(n - k)
    return polynomial(cs, N)


def _check_k(m, k):
    if not (isinstance(m, int) and m >= 1):
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if not (0 <= k < m):
        raise DomainError(f"k must satisfy 0 <= k < m, got k={k}, m={m}")


def galpha_series(b: SequenceSpec, m: int, k: int, N: int) -> TruncatedSeries:
    """Coefficients alpha_k(0..N) as the quotient numerator / (B - s^m)."""
    _check_k(m, k)
    return series_div(numerator_poly(b, m, k, N), denominator_series(b, m, N))


def m_series(b: SequenceSpec, m: int, k: int, N: int) -> TruncatedSeries:
    """(1 - s) G_alpha_k: c_0 = alpha_k(0), c_n = alpha_k(n) - alpha_k(n-1)."""
    _check_k(m, k)
    num = numerator_poly(b, m, k, N)
    one_minus_s = polynomial([1, -1], N)
    return series_div(series_mul(one_minus_s, num), denominator_series(b, m, N))
