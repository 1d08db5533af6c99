import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from convseq import (
    FiniteSpec,
    RecurrenceProblem,
    SolveReport,
    build_system,
    closed_form_initials,
    compute_a,
    determinant_closed_form,
    limit_alpha_closed,
    solve_system,
    steer,
)
from convseq.errors import PreconditionError, SingularMatrix
from convseq.solver import target_rhs

SQ = math.sqrt(61)
R_MINUS, R_PLUS = (1 - SQ) / 6, (1 + SQ) / 6


def kernel_with_roots(roots, c, m):
    """b with B(s) - s^m = c (1 - s) prod (s - r)."""
    poly = [F(1)]
    for r in roots:
        poly = [(poly[i - 1] if i else 0) - r * (poly[i] if i < len(poly) else 0) for i in range(len(poly) + 1)]
    # times (1 - s)
    poly = [(poly[i] if i < len(poly) else 0) - (poly[i - 1] if i else 0) for i in range(len(poly) + 1)]
    poly = [c * x for x in poly]
    poly += [F(0)] * (m + 1 - len(poly))
    poly[m] += 1
    while poly[-1] == 0:
        poly.pop()
    return FiniteSpec(poly)


nice_root = st.fractions(-4, 4, max_denominator=3).filter(lambda r: r not in (0, 1))


@st.composite
def steering_instances(draw, ms=(2, 3, 4)):
    m = draw(st.sampled_from(ms))
    roots = draw(st.lists(nice_root, min_size=m - 1, max_size=m - 1, unique=True))
    c = draw(st.fractions(-3, 3, max_denominator=3).filter(bool))
    return kernel_with_roots(roots, c, m), m, roots


def test_matrix_layout(quartic):
    lim = 1
    rep = build_system(quartic, 2, [R_MINUS], [0], 3 * lim)
    assert rep.matrix[0] == pytest.approx([5 - 4 * R_MINUS, 5 * R_MINUS])
    assert rep.matrix[1] == [1, 5]
    assert rep.rhs == [0, 3]


@pytest.mark.parametrize(
    "root, a0, a1",
    [(R_MINUS, (11 - SQ) / 10, (19 + SQ) / 50), (R_PLUS, (11 + SQ) / 10, (19 - SQ) / 50)],
)
@pytest.mark.parametrize("lim", [1, 2.5, -3])
def test_quartic_steering_constants(quartic, root, a0, a1, lim):
    rep = solve_system(build_system(quartic, 2, [root], None, target_rhs(quartic, 2, lim)))
    assert abs(rep.solution[0] - a0 * lim) < 1e-10 * max(1, abs(lim))
    assert abs(rep.solution[1] - a1 * lim) < 1e-10 * max(1, abs(lim))
    cf = closed_form_initials(quartic, 2, [root], 3 * lim)
    assert abs(cf[0] - rep.solution[0]) < 1e-10 and abs(cf[1] - rep.solution[1]) < 1e-10
    assert abs(rep.determinant - rep.determinant_closed_form) < 1e-9 * abs(rep.determinant_closed_form)


def test_default_roots_pick_smallest_modulus(quartic):
    rep = steer(quartic, 2, 1)
    assert rep.roots_used[0].real == pytest.approx(R_MINUS)


def test_zero_target_gives_zero_initials(quartic):
    assert closed_form_initials(quartic, 2, [R_MINUS], 0) == [0, 0]
    rep = solve_system(build_system(quartic, 2, [R_MINUS], None, 0))
    assert all(abs(x) == 0 for x in rep.solution)


def test_doubling_target_doubles_solution(quartic):
    one = steer(quartic, 2, 1).solution
    two = steer(quartic, 2, 2).solution
    assert all(abs(2 * x - y) < 1e-12 for x, y in zip(one, two))


def test_single_initial_value(quartic):
    rep = steer(quartic, 1, 1)
    lim_alpha = limit_alpha_closed(quartic, 1, 0)
    assert rep.solution == [1 / lim_alpha]
    assert rep.determinant == rep.determinant_closed_form == 5


def test_end_to_end_drives_sequence_to_target(quartic):
    a0, a1 = steer(quartic, 2, 1).solution
    a = compute_a(RecurrenceProblem(quartic, 2, 400), [a0, a1])
    assert abs(a[400] - 1) < 5e-3
    diffs = [abs(a[n + 1] - a[n]) for n in range(400)]
    assert max(diffs[100:200]) < max(diffs[:100])
    assert max(diffs[200:]) <= max(diffs[100:200])


@given(steering_instances())
def test_exact_determinant_matches_product_formula(inst):
    b, m, roots = inst
    rep = solve_system(build_system(b, m, roots, None, F(7, 3)))
    assert rep.determinant == rep.determinant_closed_form
    assert rep.residual == 0


@given(steering_instances())
def test_float_determinant_matches_product_formula(inst):
    b, m, roots = inst
    fb = FiniteSpec([float(x) for x in b.terms(b.support - 1)])
    froots = [complex(r) for r in roots]
    rep = build_system(fb, m, froots, None, 1.0)
    rep = solve_system(rep)
    assert abs(rep.determinant - rep.determinant_closed_form) <= 1e-9 * abs(rep.determinant_closed_form)


@given(steering_instances(), st.fractions(-5, 5, max_denominator=7))
def test_closed_form_equals_linear_solve(inst, lim):
    b, m, roots = inst
    L = target_rhs(b, m, lim)
    rep = solve_system(build_system(b, m, roots, None, L))
    assert closed_form_initials(b, m, roots, L) == rep.solution


@given(steering_instances(), st.fractions(-5, 5, max_denominator=7))
def test_solved_initials_hit_the_target_limit(inst, lim):
    b, m, roots = inst
    sol = steer(b, m, lim, roots=roots).solution
    # lim a_n = sum_k a_k lim alpha_k
    assert sum(a * limit_alpha_closed(b, m, k) for k, a in enumerate(sol)) == lim


@given(steering_instances(ms=(3,)))
def test_nonzero_root_conditions_are_accepted(inst):
    b, m, roots = inst
    rep = solve_system(build_system(b, m, roots, [F(1), F(-2)], F(1)))
    assert rep.residual == 0


def test_determinant_formula_small_case():
    assert determinant_closed_form(F(2), [F(3)], 2) == -4 * 2
    assert determinant_closed_form(F(2), [F(3), F(-1)], 3) == 8 * 2 * -2 * -4


@pytest.mark.parametrize(
    "b, m, roots, message",
    [
        ([5, -4, -3, 3], 2, [1], "differ from 1"),
        ([2, 1, -1], 2, [R_MINUS], "sum of b"),
        ([F(1, 2), -1, F(3, 2)], 2, [-1.0], "must differ from sum"),
        ([5, -4, -3, 3], 2, [0.5], "not a root"),
        ([5, -4, -3, 3], 2, [R_MINUS, R_PLUS], "m-1"),
    ],
)
def test_precondition_violations_are_named(b, m, roots, message):
    with pytest.raises(PreconditionError, match=message):
        build_system(FiniteSpec(b), m, roots, None, 1)


def test_repeated_roots_rejected():
    b = kernel_with_roots([F(2), F(3)], F(1), 3)
    with pytest.raises(PreconditionError, match="simple"):
        build_system(b, 3, [F(2), F(2)], None, 1)


def test_infinite_kernel_rejected():
    from convseq import catalog_b

    with pytest.raises(PreconditionError, match="finite"):
        build_system(catalog_b("catalan_prob"), 2, [0.5], None, 1)


def test_singular_system_reported():
    rep = SolveReport([[F(1), F(1)], [F(1), F(1)]], [F(0), F(1)], [F(1)], F(0))
    with pytest.raises(SingularMatrix):
        solve_system(rep)


def test_json_report(quartic):
    data = steer(quartic, 2, 1).to_json()
    assert data["m"] == 2 and len(data["solution"]) == 2 and data["residual"] < 1e-9
