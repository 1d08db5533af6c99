"""Direct iteration of the shifted convolution recurrence.

For n >= m,

    a_n = (a_{n-m} - sum_{j=0}^{n-1} b_{n-j} a_j) / b_0,

and the m basis sequences alpha_k start from the unit block alpha_k(n) = [k == n].
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ArityError, ConstructionError, DomainError
from .numeric import Coefficient, all_exact, format_coeff, to_coeff
from .sequences import SequenceSpec

DIRECT = "direct"
SERIES = "series"


@dataclass(frozen=True)
class RecurrenceProblem:
    b: SequenceSpec
    m: int
    N: int

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.N, int) or self.N < self.m:
            raise DomainError(f"N must be an integer >= m={self.m}, got {self.N!r}")
        if self.b(0) == 0:
            raise ConstructionError("b0 must be nonzero")


@dataclass
class AlphaTable:
    m: int
    rows: list[list[Coefficient]]
    route: str = DIRECT
    meta: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.rows[0]) - 1

    def row(self, k: int) -> list[Coefficient]:
        return self.rows[k]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n"] + [f"alpha_{k}" for k in range(self.m)])
        for n in range(self.N + 1):
            w.writerow([n] + [format_coeff(r[n]) for r in self.rows])
        return buf.getvalue()


def _iterate(b: Sequence[Coefficient], initials: Sequence[Coefficient], m: int, N: int,
             support: int | None) -> list[Coefficient]:
    """Run the recurrence for indices 0..N; exact when everything is rational."""
    if all_exact(b) and all_exact(initials):
        b0 = b[0]
        out = list(initials[:m]) + [Fraction(0)] * (N + 1 - m)
        for n in range(m, N + 1):
            lo = 0 if support is None else max(0, n - support + 1)
            acc = Fraction(0)
            for j in range(lo, n):
                bj = b[n - j]
                if bj:
                    acc += bj * out[j]
            out[n] = (out[n - m] - acc) / b0
        return out
    arr = _kernels.run_recurrence(np.array([complex(x) for x in b]),
                                  [complex(x) for x in initials], m, N)
    return [complex(x) for x in arr]


def initial_block(b: SequenceSpec, m: int) -> list[list[Coefficient]]:
    """Rows n = 0..m of the starting table, written out from its closed form.

    rows[n][k] = alpha_k(n); the last row is alpha_k(m) = ([k == 0] - b_{m-k}) / b_0.
    With m = 1 only rows 0 and 1 exist.
    """
    b0 = b(0)
    rows = [[Fraction(int(n == k)) for k in range(m)] for n in range(m)]
    rows.append([(Fraction(int(k == 0)) - b(m - k)) / b0 for k in range(m)])
    return rows


def compute_alpha(problem: RecurrenceProblem, route: str = DIRECT) -> AlphaTable:
    """The basis sequences alpha_0..alpha_{m-1} on 0..N.

    ``route="series"`` reads them off the generating-function quotients instead
    of iterating the recurrence.
    """
    m, N = problem.m, problem.N
    if route == SERIES:
        from .series import galpha_series

        rows = [galpha_series(problem.b, m, k, N).coeffs for k in range(m)]
        return AlphaTable(m, rows, SERIES)
    if route != DIRECT:
        raise ValueError(f"unknown route {route!r}")
    b = problem.b.terms(N)
    rows = []
    for k in range(m):
        unit = [Fraction(int(j == k)) for j in range(m)]
        rows.append(_iterate(b, unit, m, N, problem.b.support))
    return AlphaTable(m, rows, DIRECT)


def compute_a(problem: RecurrenceProblem, initials: Sequence) -> list[Coefficient]:
    """a_0..a_N from the m initial values."""
    if len(initials) != problem.m:
        raise ArityError(f"expected {problem.m} initial values, got {len(initials)}")
    initials = [to_coeff(x) for x in initials]
    return _iterate(problem.b.terms(problem.N), initials, problem.m, problem.N, problem.b.support)


def reconstruct_a(alpha: AlphaTable, initials: Sequence) -> list[Coefficient]:
    """sum_k alpha_k(n) a_k for every n in the table."""
    if len(initials) != alpha.m:
        raise ArityError(f"expected {alpha.m} initial values, got {len(initials)}")
    initials = [to_coeff(x) for x in initials]
    out = []
    for n in range(alpha.N + 1):
        acc = Fraction(0)
        for k, a_k in enumerate(initials):
            acc = acc + alpha.rows[k][n] * a_k
        out.append(acc)
    return out
