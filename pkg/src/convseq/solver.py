"""Initial values a_0..a_{m-1} that steer a_n to a prescribed limit.

Row i < m-1 of the system evaluates sum_{n=c}^{m-1} b_{n-c} x^n at a root x of
B(s) - s^m other than 1; the last row does the same at x = 1. The matrix is a
Vandermonde matrix times a lower-triangular Toeplitz matrix of b, which gives
the closed-form determinant checked here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .analysis import poly_roots, weighted_index_mean
from .errors import DomainError, PreconditionError, SingularMatrix
from .numeric import (
    Coefficient,
    all_exact,
    default_tolerances,
    near_equal,
    promote_to_complex,
    to_coeff,
    to_json,
)
from .sequences import SequenceSpec, partial_b_sum

ROOT_TOL = 1e-8


@dataclass
class SolveReport:
    matrix: list[list[Coefficient]]
    rhs: list[Coefficient]
    roots_used: list[Coefficient]
    determinant_closed_form: Coefficient
    determinant: Coefficient | None = None
    solution: list[Coefficient] | None = None
    residual: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.rhs)

    def to_json(self) -> dict:
        enc = to_json
        return {
            "m": self.m,
            "matrix": [[enc(x) for x in row] for row in self.matrix],
            "rhs": [enc(x) for x in self.rhs],
            "roots_used": [enc(to_coeff(x)) for x in self.roots_used],
            "determinant": None if self.determinant is None else enc(self.determinant),
            "determinant_closed_form": enc(self.determinant_closed_form),
            "solution": None if self.solution is None else [enc(x) for x in self.solution],
            "residual": self.residual,
        }


def _is_zero(x, tol=0.0):
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= tol


def _poly_eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def check_hypotheses(b: SequenceSpec, m: int, roots: Sequence) -> None:
    """Raise PreconditionError naming the first violated hypothesis."""
    if not b.is_finite:
        raise PreconditionError("b must be finite (B(s) - s^m a polynomial)")
    if len(roots) != m - 1:
        raise PreconditionError(f"need exactly m-1={m - 1} roots, got {len(roots)}")
    N = max(b.support - 1, m)
    total = partial_b_sum(b, N)
    if not _is_zero(total - 1, 1e-12):
        raise PreconditionError(f"sum of b must equal 1 (got {total})")
    if _is_zero(m - weighted_index_mean(b, N), 1e-12):
        raise PreconditionError("m must differ from sum j*b_j")
    poly = list(b.terms(N))
    poly[m] -= 1
    scale = max(abs(promote_to_complex(c)) for c in poly)
    for x in roots:
        if _is_zero(x - 1, ROOT_TOL):
            raise PreconditionError("roots must differ from 1")
        val = _poly_eval(poly, x)
        tol = ROOT_TOL * scale * max(1.0, abs(promote_to_complex(x))) ** (len(poly) - 1)
        if not _is_zero(val, tol):
            raise PreconditionError(f"{x} is not a root of B(s) - s^m (value {val})")
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if _is_zero(roots[i] - roots[j], ROOT_TOL):
                raise PreconditionError("roots must be simple (pairwise distinct)")


def determinant_closed_form(b0: Coefficient, roots: Sequence, m: int) -> Coefficient:
    """b0^m (-1)^(m+1) prod (x_j - 1) prod_{i<j} (x_j - x_i)."""
    det = b0**m * (1 if m % 2 else -1)
    for x in roots:
        det = det * (x - 1)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            det = det * (roots[j] - roots[i])
    return det


def build_system(b: SequenceSpec, m: int, roots: Sequence, L_vec: Sequence | None, L) -> SolveReport:
    """Assemble (unsolved) the m x m steering system."""
    if m < 1:
        raise DomainError("m must be >= 1")
    roots = [to_coeff(x) for x in roots]
    check_hypotheses(b, m, roots)
    L_vec = [Fraction(0)] * (m - 1) if L_vec is None else [to_coeff(x) for x in L_vec]
    if len(L_vec) != m - 1:
        raise PreconditionError(f"need m-1={m - 1} values L_j, got {len(L_vec)}")
    bs = b.terms(m)
    points = list(roots) + [Fraction(1)]
    matrix = []
    for x in points:
        row = []
        for c in range(m):
            acc = Fraction(0)
            for n in range(c, m):
                acc = acc + bs[n - c] * x**n
            row.append(acc)
        matrix.append(row)
    rhs = L_vec + [to_coeff(L)]
    return SolveReport(matrix, rhs, roots, determinant_closed_form(bs[0], roots, m))


def _gauss(matrix, rhs):
    """Partial-pivoting elimination; returns (solution, determinant)."""
    n = len(rhs)
    A = [list(row) + [r] for row, r in zip(matrix, rhs)]
    det = Fraction(1)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(promote_to_complex(A[r][col])))
        if A[piv][col] == 0:
            return None, Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        p = A[col][col]
        det = det * p
        for r in range(col + 1, n):
            f = A[r][col] / p
            if f != 0:
                for c in range(col, n + 1):
                    A[r][c] = A[r][c] - f * A[col][c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = A[r][n]
        for c in range(r + 1, n):
            acc = acc - A[r][c] * x[c]
        x[r] = acc / A[r][r]
    return x, det


def solve_system(report: SolveReport, det_rel_tol: float = 1e-9) -> SolveReport:
    """Solve in place and return the report."""
    x, det = _gauss(report.matrix, report.rhs)
    report.determinant = det
    closed = report.determinant_closed_form
    if not near_equal(det, closed, det_rel_tol, 1e-300):
        rel, _ = default_tolerances()
        if not near_equal(det, closed, max(rel, det_rel_tol) * 10, 1e-12):
            raise SingularMatrix(
                f"elimination determinant {det} disagrees with the closed form {closed}"
            )
    if x is None or _is_zero(closed, 1e-14) or _is_zero(det, 1e-14):
        raise SingularMatrix("determinant vanishes: roots repeated or equal to 1")
    report.solution = x
    res = 0.0
    for row, r in zip(report.matrix, report.rhs):
        acc = Fraction(0)
        for a, xi in zip(row, x):
            acc = acc + a * xi
        d = acc - r
        res = max(res, 0.0 if (isinstance(d, Fraction) and d == 0) else abs(promote_to_complex(d)))
    report.residual = res
    exact = all_exact(x) and all_exact(report.rhs)
    if (exact and res != 0) or (not exact and res >= 1e-9 * max(1.0, max(abs(promote_to_complex(v)) for v in report.rhs))):
        raise SingularMatrix(f"residual {res:.3g} too large; system is ill-conditioned")
    return report


def _elementary_symmetric(xs) -> list:
    """e_0..e_k of xs."""
    e = [Fraction(1)]
    for x in xs:
        e = [ (e[r] if r < len(e) else 0) + (x * e[r - 1] if r >= 1 else 0) for r in range(len(e) + 1)]
    return e


def closed_form_initials(b: SequenceSpec, m: int, roots: Sequence, L) -> list[Coefficient]:
    """Initial values when every L_j = 0, from elementary symmetric polynomials of the roots.

    a_i = -(1/b0) sum_{l<i} S_{i-l} a_l + L/(b0 prod(x_j - 1)) sum_{t<=i} (-1)^t e_{m-1-t},
    with S_r = b_0 + ... + b_r.
    """
    roots = [to_coeff(x) for x in roots]
    check_hypotheses(b, m, roots)
    L = to_coeff(L)
    bs = b.terms(m)
    b0 = bs[0]
    S = []
    acc = Fraction(0)
    for v in bs:
        acc = acc + v
        S.append(acc)
    e = _elementary_symmetric(roots)
    denom = Fraction(1)
    for x in roots:
        denom = denom * (x - 1)
    scale = L / (b0 * denom)
    a = []
    alt = Fraction(0)
    for i in range(m):
        alt = alt + (-1) ** i * e[m - 1 - i]
        val = scale * alt
        for l in range(i):
            val = val - S[i - l] * a[l] / b0
        a.append(val)
    return a


def target_rhs(b: SequenceSpec, m: int, limit) -> Coefficient:
    """L = (m - sum j b_j) * lim a_n."""
    return (m - weighted_index_mean(b)) * to_coeff(limit)


def default_roots(b: SequenceSpec, m: int) -> list[complex]:
    """The m-1 smallest-modulus roots of B(s) - s^m other than 1."""
    pr = poly_roots(b, m)
    cand = pr.non_unit()
    if len(cand) < m - 1:
        raise PreconditionError(f"B(s) - s^m has only {len(cand)} roots other than 1")
    return cand[: m - 1]


def steer(b: SequenceSpec, m: int, limit, roots: Sequence | None = None,
          L_vec: Sequence | None = None) -> SolveReport:
    """Build and solve the system for a target limit of a_n."""
    if roots is None:
        roots = default_roots(b, m)
    report = build_system(b, m, roots, L_vec, target_rhs(b, m, limit))
    return solve_system(report)
