"""Exact rational linear programming: phase-1 simplex feasibility over Fraction.

Only feasibility is needed here (projectivity certificates and extremality
tests), so this is a plain dense tableau simplex with Bland's rule.
"""

from __future__ import annotations

from fractions import Fraction


def _phase1(A, b):
    """Feasibility of {A x = b, x >= 0} by minimizing the sum of artificials."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return True
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    # reduced costs for objective sum(artificials): z_j - c_j
    # maintain explicitly: obj row = sum of constraint rows over artificial basis
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            obj[j] += T[i][j]
    for i in range(m):
        obj[n + i] -= Fraction(1)  # c_j = 1 for artificials

    while True:
        # Bland: smallest index with positive reduced cost
        col = next((j for j in range(n + m) if obj[j] > 0), None)
        if col is None:
            break
        # ratio test, Bland tie-break on basis index
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best[0] or (
                    ratio == best[0] and basis[i] < basis[best[1]]
                ):
                    best = (ratio, i)
        if best is None:
            # unbounded objective cannot happen for phase 1
            raise RuntimeError("phase-1 simplex unbounded")
        r = best[1]
        piv = T[r][col]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [x - f * y for x, y in zip(T[i], T[r])]
        if obj[col] != 0:
            f = obj[col]
            obj = [x - f * y for x, y in zip(obj, T[r])]
        basis[r] = col
    return obj[-1] == 0


def feasible(n_vars, eqs=(), ineqs=(), nonneg=False):
    """Exact feasibility of a system of linear constraints.

    eqs:   pairs (a, b) meaning <a, x> == b
    ineqs: pairs (a, b) meaning <a, x> >= b
    nonneg=False treats the x as free variables (internally split x = u - w).
    """
    eqs = list(eqs)
    ineqs = list(ineqs)
    width = n_vars if nonneg else 2 * n_vars
    n_slack = len(ineqs)
    A, b = [], []

    def expand(a):
        if nonneg:
            return list(a)
        out = []
        for x in a:
            out.append(x)
            out.append(-x)
        return out

    for a, rhs in eqs:
        A.append(expand(a) + [0] * n_slack)
        b.append(rhs)
    for idx, (a, rhs) in enumerate(ineqs):
        row = expand(a) + [0] * n_slack
        row[width + idx] = -1
        A.append(row)
        b.append(rhs)
    return _phase1(A, b)


def in_nonneg_span(target, generators):
    """Is target an exact nonnegative rational combination of the generators?"""
    if not generators:
        return all(x == 0 for x in target)
    eqs = []
    dim = len(target)
    for coord in range(dim):
        eqs.append(([g[coord] for g in generators], target[coord]))
    return feasible(len(generators), eqs=eqs, nonneg=True)
