import cmath
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from convseq import (
    FiniteSpec,
    RecurrenceProblem,
    Undefined,
    catalog_b,
    compute_alpha,
    estimate_radius,
    galpha_series,
    limit_alpha_closed,
    limit_alpha_numeric,
    limit_report,
    m_series,
    poly_roots,
    sums_to_one,
    weighted_index_mean,
)
from convseq.errors import DegenerateError, DomainError, InsufficientData

PHI = (1 + math.sqrt(5)) / 2


def test_weighted_index_mean_exact(quartic):
    assert weighted_index_mean(quartic, 3) == -1
    assert weighted_index_mean(quartic, 50) == -1
    assert weighted_index_mean(FiniteSpec([1]), 5) == 0


def test_weighted_index_mean_of_geometric_fibonacci_tail():
    b = catalog_b("fibonacci_geometric")
    assert abs(float(weighted_index_mean(b, 200)) - 4) < 1e-9
    # the tail beyond 60 is still visible: 4 - partial ~ 2e-4
    assert 1e-5 < 4 - float(weighted_index_mean(b, 60)) < 1e-3


def test_sums_to_one():
    assert sums_to_one(FiniteSpec([5, -4, -3, 3])) == (True, 0)
    ok, residual = sums_to_one(FiniteSpec([2, 1, -1]))
    assert not ok and residual == 1
    ok, residual = sums_to_one(catalog_b("exp_e"), 40)
    assert ok and abs(residual) < 1e-12


def test_closed_limits(quartic):
    assert limit_alpha_closed(quartic, 2, 0) == F(1, 3)
    assert limit_alpha_closed(quartic, 2, 1) == F(5, 3)
    assert limit_alpha_closed(FiniteSpec([1]), 1, 0) == 1


def test_closed_limit_undefined_when_hypotheses_fail():
    assert isinstance(limit_alpha_closed(FiniteSpec([2, 1, -1]), 1, 0), Undefined)
    # sum j b_j = 1 = m
    u = limit_alpha_closed(FiniteSpec([F(1, 2), 0, F(1, 2)]), 1, 0)
    assert isinstance(u, Undefined) and "m equals" in u.reason
    with pytest.raises(DomainError):
        limit_alpha_closed(FiniteSpec([1]), 1, 1)


@given(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=5), st.integers(1, 3))
def test_closed_limits_combine_to_total(tail, m):
    # the numerators sum to sum_{n<m} (m - n) b_n
    head = 1 - sum(tail)
    if head == 0:
        return
    b = FiniteSpec([head, *tail])
    denom = m - weighted_index_mean(b, 10)
    if denom == 0:
        return
    limits = [limit_alpha_closed(b, m, k, 10) for k in range(m)]
    assert sum(limits) * denom == sum((m - n) * b(n) for n in range(m))


def test_numeric_limit_of_quartic_converges(quartic):
    for k, target in [(0, F(1, 3)), (1, F(5, 3))]:
        res = limit_alpha_numeric(m_series(quartic, 2, k, 400))
        assert res.converged
        assert abs(float(res.value) - float(target)) < 1e-12


def test_numeric_limit_arcsin():
    target = 27 / (-18 + 8 * math.sqrt(3) * math.pi)
    res = limit_alpha_numeric(m_series(catalog_b("arcsin_central"), 1, 0, 400))
    assert abs(res.value - target) < 1e-4
    assert abs(res.value - target) < 1e-9  # geometric convergence leaves far more margin


def test_numeric_limit_euler_kernel():
    res = limit_alpha_numeric(m_series(catalog_b("euler_identity"), 1, 0, 400))
    assert abs(res.value - complex(1.13480, -1.35906)) < 1e-3
    beautiful = 2 * math.sqrt((1 + math.pi**2) / (4 + math.pi**2))
    assert abs(abs(res.value) - beautiful) < 1e-6
    assert res.converged


def test_alternating_kernel_is_flagged():
    b = FiniteSpec([2, 1, -2])
    alpha = compute_alpha(RecurrenceProblem(b, 1, 30)).row(0)
    assert alpha == [1 - n % 2 for n in range(31)]
    res = limit_alpha_numeric(m_series(b, 1, 0, 30))
    assert res.converged is False


def test_numeric_limit_needs_window():
    with pytest.raises(InsufficientData):
        limit_alpha_numeric([1, 2, 3], window=8)


def test_radius_of_quartic_differences(quartic):
    est = estimate_radius(m_series(quartic, 2, 0, 400))
    assert est.reciprocal == pytest.approx(6 / (-1 + math.sqrt(61)), rel=5e-3)
    assert est.reciprocal == pytest.approx(0.88102497, rel=1e-6)


def test_radius_with_interleaved_zeros(quartic):
    est = estimate_radius(m_series(quartic, 1, 0, 200))
    assert est.radius == pytest.approx(math.sqrt(5 / 3), rel=1e-9)
    root = estimate_radius(m_series(quartic, 1, 0, 200), mode="RootTest")
    assert root.radius == pytest.approx(math.sqrt(5 / 3), rel=5e-3)


def test_ratio_of_geometric_fibonacci_partial_sums():
    est = estimate_radius(galpha_series(catalog_b("fibonacci_geometric"), 1, 0, 200))
    assert est.reciprocal == pytest.approx(2 / (math.sqrt(13) - 3), rel=5e-3)


def test_ratio_of_catalan_partial_sums_is_golden():
    est = estimate_radius(galpha_series(catalog_b("catalan_prob"), 1, 0, 300))
    assert est.reciprocal == pytest.approx(PHI, rel=5e-3)


def test_arcsin_difference_ratio():
    est = estimate_radius(m_series(catalog_b("arcsin_central"), 1, 0, 400))
    assert est.reciprocal == pytest.approx(0.27502, rel=5e-3)


def test_euler_kernel_radius():
    est = estimate_radius(m_series(catalog_b("euler_identity"), 1, 0, 400))
    assert est.reciprocal == pytest.approx(0.78895, rel=5e-3)


def test_golden_power_kernel_radius():
    est = estimate_radius(m_series(catalog_b("fibonacci_phi"), 1, 0, 400), mode="root")
    assert est.radius == pytest.approx(0.95747, rel=5e-3)
    roots = [0.61888 + 0.73057j, 0.61888 - 0.73057j]
    assert abs(roots[0]) == pytest.approx(0.95747, rel=1e-4)


def test_radius_needs_data():
    with pytest.raises(InsufficientData):
        estimate_radius([1, 2, 3])
    with pytest.raises(DomainError):
        estimate_radius([1] * 20, mode="magic")


def test_roots_of_quartic(quartic):
    pr = poly_roots(quartic, 2)
    expected = sorted([1, (1 - math.sqrt(61)) / 6, (1 + math.sqrt(61)) / 6], key=abs)
    assert [z.real for z in pr.roots] == pytest.approx(expected, abs=1e-12)
    assert pr.unit_roots == [0] and not pr.has_repeated
    assert max(pr.residuals) < 1e-12
    assert len(pr.non_unit()) == 2


def test_roots_of_alternating_kernel():
    pr = poly_roots(FiniteSpec([2, 1, -2]), 1)
    assert sorted(z.real for z in pr.roots) == pytest.approx([-1, 1], abs=1e-12)


def test_double_root_detected_exactly():
    pr = poly_roots(FiniteSpec([1, -1, 1]), 1)  # 1 - 2s + s^2
    assert pr.roots == pytest.approx([1, 1], abs=1e-15)
    assert pr.has_repeated and pr.unit_roots == [0, 1]


@given(st.lists(st.integers(-3, 3).filter(bool), min_size=1, max_size=3, unique=True), st.integers(1, 3))
def test_roots_of_constructed_polynomials(rs, m):
    # B(s) - s^m = c * prod (s - r) with c = 1: build b from it
    poly = [F(1)]
    for r in rs:
        poly = [(poly[i - 1] if i else 0) - r * (poly[i] if i < len(poly) else 0) for i in range(len(poly) + 1)]
    poly += [F(0)] * max(0, m + 1 - len(poly))
    poly[m] += 1
    if poly[0] == 0:
        return
    while poly and poly[-1] == 0:
        poly.pop()
    pr = poly_roots(FiniteSpec(poly), m)
    got = sorted(z.real for z in pr.roots)
    assert got == pytest.approx(sorted(rs), abs=1e-9)
    assert all(abs(z.imag) < 1e-9 for z in pr.roots)


def test_constant_polynomial_is_degenerate():
    with pytest.raises(DegenerateError):
        poly_roots(FiniteSpec([1, 1]), 1)  # 1 + s - s = 1


def test_report_contents(quartic):
    rep = limit_report(quartic, 2, N=400)
    assert rep.closed_limits == [F(1, 3), F(5, 3)]
    assert all(x.converged for x in rep.numeric_limits)
    assert rep.sums_to_one and rep.weighted_mean == -1
    assert rep.radius_M[0] == pytest.approx(1 / 0.88102497, rel=1e-6)
    data = rep.to_json()
    assert data["closed_limits"][0] == {"num": "1", "den": "3"}
    assert len(data["denominator_roots"]) == 3
    assert cmath.isclose(complex(**{"real": data["denominator_roots"][0]["re"],
                                     "imag": data["denominator_roots"][0]["im"]}), 1, abs_tol=1e-12)
