"""Exact integer linear algebra: Smith/Hermite normal forms, kernels, quotients.

Everything here works on plain Python ints (arbitrary precision) and
fractions.Fraction.  No floating point is used anywhere in this package.
Matrices are lists of row lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def is_primitive(v):
    return vec_gcd(v) == 1


def primitive_part(v):
    """Divide out the gcd; returns (primitive vector, positive multiplier)."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return [x // g for x in v], g


def det(A):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[-1][-1]


def _snf_pivot(M, t):
    """Smallest-absolute-value nonzero entry of M[t:][t:], ties row-major."""
    best = None
    for i in range(t, len(M)):
        for j in range(t, len(M[0])):
            e = M[i][j]
            if e != 0 and (best is None or abs(e) < abs(M[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(A):
    """Return (U, D, V) with U*A*V = D, U and V unimodular, D diagonal with
    d_i | d_{i+1} and d_i >= 0.

    Pivoting picks the smallest-absolute-value nonzero entry, ties broken
    row-major, which makes U and V deterministic.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [row[:] for row in A]
    U = identity(rows)
    V = identity(cols)
    t = 0
    while t < min(rows, cols):
        piv = _snf_pivot(M, t)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            M[t], M[pi] = M[pi], M[t]
            U[t], U[pi] = U[pi], U[t]
        if pj != t:
            for row in M:
                row[t], row[pj] = row[pj], row[t]
            for row in V:
                row[t], row[pj] = row[pj], row[t]
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, rows):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    for j in range(cols):
                        M[i][j] -= q * M[t][j]
                    for j in range(rows):
                        U[i][j] -= q * U[t][j]
                    if M[i][t]:
                        M[t], M[i] = M[i], M[t]
                        U[t], U[i] = U[i], U[t]
                        dirty = True
            # clear row t
            for j in range(t + 1, cols):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for i in range(rows):
                        M[i][j] -= q * M[i][t]
                    for i in range(cols):
                        V[i][j] -= q * V[i][t]
                    if M[t][j]:
                        for row in M:
                            row[t], row[j] = row[j], row[t]
                        for row in V:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty:
                break
        # divisibility: M[t][t] must divide every remaining entry
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if M[i][j] % M[t][t] != 0:
                    for jj in range(cols):
                        M[t][jj] += M[i][jj]
                    for jj in range(rows):
                        U[t][jj] += U[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if M[t][t] < 0:
                for j in range(cols):
                    M[t][j] = -M[t][j]
                for j in range(rows):
                    U[t][j] = -U[t][j]
            t += 1
    return U, M, V


def kernel_basis(A):
    """Basis of the saturated integer kernel {x : A x = 0}; [] if trivial."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return identity(cols)
    _, D, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(rows, cols)) if D[i][i] != 0)
    return [[V[i][j] for i in range(cols)] for j in range(rank, cols)]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group with invariant factors d_1 | d_2 | ... (each >= 2)
    and a projection from an ambient lattice given by integer functionals."""

    invariant_factors: tuple
    # row i of proj_rows is the functional whose value mod invariant_factors[i]
    # is the i-th residue coordinate
    proj_rows: tuple

    @property
    def order(self):
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def is_trivial(self):
        return not self.invariant_factors

    def project(self, v):
        return tuple(
            sum(a * x for a, x in zip(row, v)) % d
            for row, d in zip(self.proj_rows, self.invariant_factors)
        )


def quotient_projection(ambient_rank, sub_generators):
    """Split N = Z^rank by the subgroup generated by sub_generators.

    Returns (proj, torsion): proj maps N onto the free quotient
    N / (span_R(gens) cap N) written in a chosen basis (rows are
    functionals), and torsion is the finite part of N / <gens>.
    """
    n = ambient_rank
    if not sub_generators:
        return identity(n), FiniteAbelianGroup((), ())
    G = transpose([list(g) for g in sub_generators])  # generators as columns
    U, D, _ = smith_normal_form(G)
    k = len(sub_generators)
    rank = sum(1 for i in range(min(n, k)) if D[i][i] != 0)
    proj = [U[i][:] for i in range(rank, n)]
    factors = []
    rows = []
    for i in range(rank):
        d = D[i][i]
        if d >= 2:
            factors.append(d)
            rows.append(tuple(U[i]))
    return proj, FiniteAbelianGroup(tuple(factors), tuple(rows))


def hermite_normal_form(rows):
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns the list of nonzero HNF rows: positive pivots, entries above a
    pivot reduced into [0, pivot).
    """
    if not rows:
        return []
    M = [list(r) for r in rows]
    m, n = len(M), len(M[0])
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if M[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, m):
            while M[i][c] != 0:
                if abs(M[i][c]) < abs(M[r][c]):
                    M[r], M[i] = M[i], M[r]
                q = M[i][c] // M[r][c]
                for j in range(n):
                    M[i][j] -= q * M[r][j]
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                for j in range(n):
                    M[i][j] -= q * M[r][j]
        r += 1
    return [row for row in M[:r]]


def reduce_mod_lattice(v, hnf_rows):
    """Canonical representative of v modulo the lattice with the given HNF."""
    w = list(v)
    for row in hnf_rows:
        c = next(j for j, x in enumerate(row) if x != 0)
        q = w[c] // row[c]
        if q:
            for j in range(len(w)):
                w[j] -= q * row[j]
    return w


def solve_integer(A, b):
    """One integer solution x of A x = b, or None if none exists."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0:
        return [0] * cols
    U, D, V = smith_normal_form(A)
    c = mat_vec(U, b)
    y = [0] * cols
    for i in range(rows):
        d = D[i][i] if i < min(rows, cols) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return mat_vec(V, y)


def solve_rational(A, b):
    """The rational solution of a square nonsingular system A x = b."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(A, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c]
        M[c] = [x / inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] for i in range(n)]


def rational_rank(A):
    """Rank of a matrix with Fraction/int entries, exact elimination."""
    if not A or not A[0]:
        return 0
    M = [[Fraction(x) for x in row] for row in A]
    rows, cols = len(M), len(M[0])
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = M[rank][c]
        M[rank] = [x / inv for x in M[rank]]
        for i in range(rows):
            if i != rank and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank
