"""Limits, convergence radii and denominator roots."""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _poly
from .errors import DegenerateError, DomainError, InsufficientData
from .numeric import (
    Coefficient,
    all_exact,
    default_tolerances,
    format_coeff,
    log_abs,
    near_equal,
    promote_to_complex,
    to_coeff,
    to_json,
)
from .sequences import SequenceSpec, partial_b_sum
from .series import TruncatedSeries, galpha_series, m_series

SUMS_TO_ONE_TOL = 1e-9
MIN_RADIUS_TERMS = 8
REPEATED_ROOT_TOL = 1e-8
UNIT_ROOT_TOL = 1e-8
NOISE_FLOOR = 1e-12


@dataclass(frozen=True)
class Undefined:
    """Stands in for a limit that the closed form cannot give."""

    reason: str

    def to_json(self):
        return {"undefined": self.reason}


def _horizon(b: SequenceSpec, N: int | None) -> int:
    """Finite specs are summed over their support; others up to N."""
    if b.is_finite:
        return max(b.support - 1, 1) if N is None else max(N, b.support - 1, 1)
    if N is None:
        raise DomainError("an infinite b needs a truncation index N")
    return N


def weighted_index_mean(b: SequenceSpec, N: int | None = None) -> Coefficient:
    """sum_{j=1}^{N} j b_j."""
    N = _horizon(b, N)
    if N < 1:
        raise DomainError("N must be >= 1")
    acc = Fraction(0)
    for j, bj in enumerate(b.terms(N)):
        if j and bj:
            acc = acc + j * bj
    return acc


def sums_to_one(b: SequenceSpec, N: int | None = None, tol: float = SUMS_TO_ONE_TOL) -> tuple[bool, Coefficient]:
    """(holds, residual) for b_0 + b_1 + ... = 1.

    Exact finite specs need exact equality; everything else gets ``tol``.
    """
    N = _horizon(b, N)
    residual = partial_b_sum(b, N) - 1
    if b.is_finite and all_exact(b.terms(N)):
        return residual == 0, residual
    return abs(promote_to_complex(residual)) <= tol, residual


def limit_alpha_closed(b: SequenceSpec, m: int, k: int, N: int | None = 400,
                       tol: float = SUMS_TO_ONE_TOL) -> Coefficient | Undefined:
    """(sum_{j=k}^{m-1} b_{j-k}) / (m - sum_j j b_j) when b sums to one."""
    if not 0 <= k < m:
        raise DomainError(f"need 0 <= k < m, got k={k}, m={m}")
    ok, residual = sums_to_one(b, N, tol)
    if not ok:
        return Undefined(f"b does not sum to 1 (residual {format_coeff(residual)})")
    denom = m - weighted_index_mean(b, N)
    exact = isinstance(denom, Fraction)
    if (exact and denom == 0) or (not exact and abs(denom) <= tol):
        return Undefined(f"m equals sum j*b_j (m={m})")
    num = Fraction(0)
    for j in range(k, m):
        num = num + b(j - k)
    return num / denom


@dataclass
class NumericLimit:
    value: Coefficient
    converged: bool
    partial_sums: list = field(repr=False, default_factory=list)


def limit_alpha_numeric(coeffs, window: int = 8, rel_tol: float | None = None,
                        abs_tol: float | None = None) -> NumericLimit:
    """Abel-style limit of M_k at s = 1: the partial sums of its coefficients.

    Those partial sums are alpha_k(n). ``converged`` holds when the last
    ``window`` of them agree pairwise within tolerance.
    """
    if window < 2:
        raise DomainError("window must be >= 2")
    cs = coeffs.coeffs if isinstance(coeffs, TruncatedSeries) else [to_coeff(c) for c in coeffs]
    if len(cs) < window:
        raise InsufficientData(f"need at least {window} coefficients, got {len(cs)}")
    sums = []
    acc = Fraction(0)
    for c in cs:
        acc = acc + c
        sums.append(acc)
    d_rel, d_abs = default_tolerances()
    rel_tol = d_rel if rel_tol is None else rel_tol
    abs_tol = d_abs if abs_tol is None else abs_tol
    tail = [promote_to_complex(x) for x in sums[-window:]]
    converged = all(
        near_equal(tail[i], tail[j], rel_tol, abs_tol)
        for i in range(window) for j in range(i + 1, window)
    )
    return NumericLimit(sums[-1], converged, sums)


RATIO = "ratio"
ROOT = "root"
_MODES = {"ratio": RATIO, "ratiotest": RATIO, "root": ROOT, "roottest": ROOT}


@dataclass
class RadiusEstimate:
    radius: float
    mode: str
    window: list = field(default_factory=list)
    per_n: list = field(default_factory=list, repr=False)  # (n, estimate) over all usable n

    @property
    def reciprocal(self) -> float:
        return 1.0 / self.radius


def estimate_radius(coeffs, mode: str = RATIO, noise_floor: float = NOISE_FLOOR) -> RadiusEstimate:
    """Radius of convergence from the coefficient tail.

    Root test: 1 / median |c_n|^(1/n). Ratio test: median |c_p / c_n|^(1/(n-p))
    over consecutive nonzero coefficients p < n, which is |c_{n-1}/c_n| when
    no zeros intervene. Both take the median over the last half of usable
    indices; ``per_n`` keeps every individual estimate.

    Float coefficients below ``noise_floor * max|c|`` count as zero: a float b
    never sums to exactly 1, which leaves a rounding-level pole near s = 1.
    """
    key = _MODES.get(str(mode).lower().replace("_", ""))
    if key is None:
        raise DomainError(f"unknown mode {mode!r}")
    cs = coeffs.coeffs if isinstance(coeffs, TruncatedSeries) else [to_coeff(c) for c in coeffs]
    if not all_exact(cs):
        top = max(abs(promote_to_complex(c)) for c in cs)
        cs = [c if abs(promote_to_complex(c)) > noise_floor * top else 0 for c in cs]
    nz = [(n, log_abs(c)) for n, c in enumerate(cs) if n >= 1 and c != 0]
    if len(nz) < MIN_RADIUS_TERMS:
        raise InsufficientData(f"need {MIN_RADIUS_TERMS} nonzero coefficients, got {len(nz)}")
    per_n = []
    if key == ROOT:
        for n, la in nz:
            per_n.append((n, math.exp(-la / n)))
    else:
        prev = next(((n, log_abs(c)) for n, c in enumerate(cs) if c != 0), None)
        for n, la in nz:
            if n <= prev[0]:
                continue
            p, lp = prev
            per_n.append((n, math.exp((lp - la) / (n - p))))
            prev = (n, la)
    if len(per_n) < 2:
        raise InsufficientData("not enough usable ratios")
    window = per_n[len(per_n) // 2:]
    radius = statistics.median(v for _, v in window)
    return RadiusEstimate(radius, key, window, per_n)


@dataclass
class PolyRoots:
    roots: list[complex]
    residuals: list[float]
    unit_roots: list[int]
    repeated: list[tuple[int, int]]
    poly: list[complex] = field(repr=False, default_factory=list)

    @property
    def has_repeated(self) -> bool:
        return bool(self.repeated)

    def non_unit(self) -> list[complex]:
        return [z for i, z in enumerate(self.roots) if i not in self.unit_roots]


def _horner(coeffs_low, z):
    p = 0j
    dp = 0j
    for c in reversed(coeffs_low):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _polish(coeffs_low, z, iters=100):
    p, dp = _horner(coeffs_low, z)
    for _ in range(iters):
        if p == 0 or dp == 0:
            break
        step = p / dp
        z_new = z - step
        p_new, dp_new = _horner(coeffs_low, z_new)
        if abs(p_new) > abs(p):
            break
        z, p, dp = z_new, p_new, dp_new
        if abs(step) <= 1e-17 * max(1.0, abs(z)):
            break
    return z


def _numeric_roots(low):
    raw = np.roots(np.array([complex(c) for c in low[::-1]], dtype=np.complex128))
    return [complex(_polish(low, complex(z))) for z in raw]


def poly_roots(b: SequenceSpec, m: int) -> PolyRoots:
    """All roots of B(s) - s^m for a finite b, with multiplicity, sorted by modulus.

    Companion-matrix eigenvalues (numpy) followed by Newton polishing. For an
    exact b the polynomial is first split into squarefree factors, so repeated
    roots are found exactly and each factor's roots are simple. Roots within
    1e-8 of 1 and pairs closer than 1e-8 are flagged.
    """
    if not b.is_finite:
        raise DomainError("poly_roots needs a finite b")
    deg = max(b.support - 1, m)
    low = list(b.terms(deg))
    low[m] -= 1
    while len(low) > 1 and low[-1] == 0:
        low.pop()
    if len(low) < 2:
        raise DegenerateError("B(s) - s^m is constant")
    if all_exact(low):
        roots = []
        for factor, mult in _poly.squarefree_factors(low):
            for z in _numeric_roots(factor):
                roots.extend([z] * mult)
    else:
        low = [promote_to_complex(c) for c in low]
        roots = _numeric_roots(low)
    lowc = [promote_to_complex(c) for c in low]
    roots.sort(key=lambda z: (round(abs(z), 12), z.real, z.imag))
    residuals = [abs(_horner(lowc, z)[0]) for z in roots]
    unit = [i for i, z in enumerate(roots) if abs(z - 1) < UNIT_ROOT_TOL]
    repeated = [
        (i, j)
        for i in range(len(roots)) for j in range(i + 1, len(roots))
        if abs(roots[i] - roots[j]) < REPEATED_ROOT_TOL
    ]
    return PolyRoots(roots, residuals, unit, repeated, lowc)


@dataclass
class LimitReport:
    m: int
    N: int
    closed_limits: list
    numeric_limits: list
    weighted_mean: Coefficient
    sums_to_one: bool
    sum_residual: Coefficient
    radius_M: list
    radius_G: list
    denominator_roots: list | None = None
    methods: dict = field(default_factory=lambda: {
        "closed": "sum b / (m - sum j b_j)",
        "numeric": "partial sums of M_k at s=1",
        "radius": "median ratio test over tail",
    })

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, Undefined):
                return x.to_json()
            return to_json(x)

        return {
            "m": self.m,
            "N": self.N,
            "closed_limits": [enc(x) for x in self.closed_limits],
            "numeric_limits": [
                {"value": enc(x.value), "converged": x.converged} for x in self.numeric_limits
            ],
            "weighted_mean": enc(self.weighted_mean),
            "sums_to_one": self.sums_to_one,
            "sum_residual": enc(self.sum_residual),
            "radius_M": self.radius_M,
            "radius_G": self.radius_G,
            "denominator_roots": None if self.denominator_roots is None else [
                {"re": z.real, "im": z.imag} for z in self.denominator_roots
            ],
            "methods": self.methods,
        }


def _radius_or_none(series) -> float | None:
    try:
        return estimate_radius(series, RATIO).radius
    except InsufficientData:
        return None


def limit_report(b: SequenceSpec, m: int, N: int = 400, window: int = 8) -> LimitReport:
    ok, residual = sums_to_one(b, N)
    closed, numeric, rm, rg = [], [], [], []
    for k in range(m):
        closed.append(limit_alpha_closed(b, m, k, N))
        ms = m_series(b, m, k, N)
        numeric.append(limit_alpha_numeric(ms, window))
        rm.append(_radius_or_none(ms))
        rg.append(_radius_or_none(galpha_series(b, m, k, N)))
    roots = poly_roots(b, m).roots if b.is_finite else None
    return LimitReport(m, N, closed, numeric, weighted_index_mean(b, N), ok, residual, rm, rg, roots)
