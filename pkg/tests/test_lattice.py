"""Exact integer linear algebra: normal forms, kernels, quotients."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from stackmmp import lattice


def _matrices(max_dim=4, max_entry=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-max_entry, max_entry),
                         min_size=n, max_size=n),
                min_size=m, max_size=m,
            )
        )
    )


def _is_unimodular(M):
    return abs(lattice.det(M)) == 1


@settings(max_examples=60, deadline=None)
@given(_matrices())
def test_snf_factorization_and_divisibility(A):
    U, D, V = lattice.smith_normal_form(A)
    assert _is_unimodular(U) and _is_unimodular(V)
    assert lattice.mat_mul(lattice.mat_mul(U, A), V) == D
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert D[i][j] == 0
    nz = [d for d in diag if d != 0]
    assert all(d > 0 for d in nz)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    # zeros come after all nonzero entries
    seen_zero = False
    for d in diag:
        if d == 0:
            seen_zero = True
        else:
            assert not seen_zero


@settings(max_examples=60, deadline=None)
@given(_matrices())
def test_kernel_is_saturated_and_exact(A):
    basis = lattice.kernel_basis(A)
    n = len(A[0])
    for v in basis:
        assert lattice.mat_vec(A, list(v)) == [0] * len(A)
    rank = lattice.rational_rank(A)
    assert len(basis) == n - rank
    # saturation: every basis vector is primitive as part of a saturated
    # lattice, so the stacked basis has full SNF with unit invariant factors
    if basis:
        _, D, _ = lattice.smith_normal_form([list(v) for v in basis])
        diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
        assert all(d == 1 for d in diag if d != 0)


def test_snf_pivot_rule_deterministic():
    A = [[4, 6], [6, 9]]
    U, D, V = lattice.smith_normal_form(A)
    assert [D[0][0], D[1][1]] == [1, 0] or [D[0][0], D[1][1]] == [1, 3]
    # repeated runs are identical
    assert (U, D, V) == lattice.smith_normal_form(A)


def test_quotient_projection_examples():
    # rank 2, sub generated by (2, 0): free quotient rank 1, torsion Z/2
    proj, torsion = lattice.quotient_projection(2, [[2, 0]])
    assert len(proj) == 1
    assert torsion.invariant_factors == (2,)
    # saturated sublattice: no torsion
    proj, torsion = lattice.quotient_projection(2, [[1, 0]])
    assert len(proj) == 1
    assert torsion.invariant_factors == ()
    # gens (2,0),(0,2): free quotient rank 0, torsion (Z/2)^2
    proj, torsion = lattice.quotient_projection(2, [[2, 0], [0, 2]])
    assert len(proj) == 0
    assert sorted(torsion.invariant_factors) == [2, 2]


def test_quotient_projection_kills_generators():
    gens = [[2, 4, 6], [1, 1, 1]]
    proj, _ = lattice.quotient_projection(3, gens)
    for g in gens:
        assert lattice.mat_vec(list(proj), g) == [0] * len(proj)
    assert len(proj) + lattice.rational_rank(gens) == 3


def test_hermite_reduce_roundtrip():
    rows = [[1, 2, 3], [0, 4, 5]]
    hnf = lattice.hermite_normal_form(rows)
    v = [7, -3, 11]
    red = lattice.reduce_mod_lattice(v, hnf)
    # the difference is in the row lattice
    diff = [a - b for a, b in zip(v, red)]
    sol = lattice.solve_integer(lattice.transpose(rows), diff)
    assert sol is not None
    # reduction is idempotent
    assert lattice.reduce_mod_lattice(list(red), hnf) == list(red)


def test_solve_integer():
    A = [[2, 0], [0, 3]]
    assert lattice.solve_integer(A, [4, 9]) == [2, 3]
    assert lattice.solve_integer(A, [3, 9]) is None
    # underdetermined consistent system
    A = [[1, 1]]
    sol = lattice.solve_integer(A, [5])
    assert sol is not None and sum(sol) == 5


def test_solve_rational():
    A = [[2, 1], [1, 3]]
    x = lattice.solve_rational(A, [1, 0])
    assert [sum(Fraction(a) * xi for a, xi in zip(row, x)) for row in A] == [1, 0]
    assert all(isinstance(v, Fraction) for v in x)


def test_det_bareiss():
    assert lattice.det([[2, 3], [5, 7]]) == -1
    assert lattice.det([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert lattice.det([[3]]) == 3
