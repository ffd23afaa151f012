"""Exact rational feasibility and nonnegative-span membership."""

from fractions import Fraction

from stackmmp import lp


def test_feasible_equalities():
    # x + y = 2, x - y = 0 has the solution (1, 1)
    assert lp.feasible(2, eqs=[([1, 1], 2), ([1, -1], 0)])
    # inconsistent system
    assert not lp.feasible(2, eqs=[([1, 1], 2), ([1, 1], 3)])


def test_feasible_inequalities():
    # x >= 1, -x >= 0 is infeasible
    assert not lp.feasible(1, ineqs=[([1], 1), ([-1], 0)])
    assert lp.feasible(1, ineqs=[([1], 1), ([-1], -5)])


def test_feasible_nonneg():
    # x + y = -1 with x, y >= 0 is infeasible
    assert not lp.feasible(2, eqs=[([1, 1], -1)], nonneg=True)
    assert lp.feasible(2, eqs=[([1, 1], 1)], nonneg=True)


def test_feasible_exact_fractions():
    # two constraints whose right-hand sides differ by 1e-16 exactly:
    # infeasible in exact arithmetic, indistinguishable in floating point
    assert lp.feasible(1, eqs=[([3], 1)])          # x = 1/3
    assert lp.feasible(1, ineqs=[([3], 1), ([-3], -1)])
    assert not lp.feasible(
        1,
        eqs=[([3], 1), ([3], Fraction(10000000000000001, 10000000000000000))],
    )


def test_in_nonneg_span():
    gens = [[1, 0], [0, 1]]
    assert lp.in_nonneg_span([2, 3], gens)
    assert not lp.in_nonneg_span([-1, 0], gens)
    # target on a ray through a single generator
    assert lp.in_nonneg_span([2, 2], [[1, 1]])
    # generators spanning a line still cannot leave it
    assert lp.in_nonneg_span([-2, -2], [[1, 1], [-1, -1]])
    assert not lp.in_nonneg_span([1, 0], [[1, 1], [-1, -1]])


def test_in_nonneg_span_edge_cases():
    assert lp.in_nonneg_span([0, 0], [])
    assert not lp.in_nonneg_span([1, 0], [])
    # zero target always representable
    assert lp.in_nonneg_span([0, 0, 0], [[1, 2, 3], [4, 5, 6]])


def test_in_nonneg_span_extremality_pattern():
    # the sum of two rays is not extremal among the three
    r1, r2 = [1, 0, 1], [0, 1, 1]
    s = [a + b for a, b in zip(r1, r2)]
    assert lp.in_nonneg_span(s, [r1, r2])
    # r1 = s - r2 needs a negative coefficient, so it is extremal
    assert not lp.in_nonneg_span(r1, [r2, s])
    assert not lp.in_nonneg_span(r1, [r2, [0, 2, 2]])
