"""Divisor classes on a stacky fan: linear equivalence, torsion, degrees,
pushforward to the coarse space, and the eigenspace decomposition of the
covering-trick pushforward on Picard-rank-1 fans.

A divisor class is a plain integer vector k indexed by the fan rays,
representing O(sum_i k_i D_i).  Two classes are equal when they differ by a
principal vector (<m, r_i v_i>)_i for an integral weight m.
"""

from __future__ import annotations

from fractions import Fraction

from . import lattice
from .fans import FanError


def principal_rows(fan):
    """Generators of the principal lattice: row j is (<e_j, r_i v_i>)_i."""
    return [
        [fan.mult[i] * fan.rays[i][j] for i in range(fan.n_rays)]
        for j in range(fan.dim)
    ]


def principal_hnf(fan):
    return lattice.hermite_normal_form(principal_rows(fan))


def canonical_form(fan, k, hnf=None):
    """Canonical representative of k modulo linear equivalence."""
    if hnf is None:
        hnf = principal_hnf(fan)
    return tuple(lattice.reduce_mod_lattice(list(k), hnf))


def is_linearly_trivial(fan, k):
    """True iff some integral weight m has <m, r_i v_i> = k_i for all i."""
    A = [[fan.mult[i] * fan.rays[i][j] for j in range(fan.dim)]
         for i in range(fan.n_rays)]
    return lattice.solve_integer(A, list(k)) is not None


def torsion_class_group(fan):
    """The finite group N / <r_i v_i>; its dual is the torsion class group."""
    gens = [[fan.mult[i] * x for x in fan.rays[i]] for i in range(fan.n_rays)]
    _, torsion = lattice.quotient_projection(fan.dim, gens)
    return torsion


def degree(fan, rel, k):
    """Exact rational sum a_i k_i / r_i over the relation's rays."""
    total = Fraction(0)
    for idx, a in zip(rel.involved, rel.a):
        total += Fraction(a * k[idx], fan.mult[idx])
    return total


def pushforward_to_coarse(fan, k):
    """Coarse Weil divisor of pi_* O(sum k_i D_i): componentwise floor(k_i/r_i)."""
    return [k[i] // fan.mult[i] for i in range(fan.n_rays)]


def canonical_class(fan):
    """omega = O(-sum_i D_i)."""
    return [-1] * fan.n_rays


def global_relation(fan):
    """For a Picard-rank-1 fan, the unique primitive all-positive relation
    among the rays, as a plain coefficient list (one entry per ray)."""
    if fan.picard_rank != 1:
        raise FanError("fan does not have Picard rank 1")
    A = lattice.transpose([list(v) for v in fan.rays])
    basis = lattice.kernel_basis(A)
    if len(basis) != 1:
        raise FanError("ray relation space is not one-dimensional")
    a = basis[0]
    if a[0] < 0:
        a = [-x for x in a]
    if any(x <= 0 for x in a):
        raise FanError("rank-1 fan relation is not all-positive; fan invalid")
    return a


def decompose_pushforward(fan, rel, p):
    """Direct-summand classes of the pushforward of O(-p) along the
    covering-trick morphism on a Picard-rank-1 fan.

    Enumerates one full period per coordinate (k_i in [-a_i r, a_i r))
    subject to sum k_i = 0 and returns the floors
    (floor(k_i r_i / (a_i r)))_{i<=n}, last entry with k shifted by p,
    deduplicated modulo linear equivalence.
    """
    if fan.picard_rank != 1:
        raise FanError("decompose_pushforward requires Picard rank 1")
    n1 = fan.n_rays
    a = [0] * n1
    for idx, ai in zip(rel.involved, rel.a):
        a[idx] = ai
    if any(x <= 0 for x in a):
        raise FanError("global relation must be positive on every ray")
    r = 1
    while any((a[i] * r) % fan.mult[i] != 0 for i in range(n1)):
        r += 1
    periods = [a[i] * r for i in range(n1)]

    hnf = principal_hnf(fan)
    out = {}

    def rec(i, acc):
        if i == n1 - 1:
            k_last = -sum(acc)
            if not (-periods[-1] <= k_last < periods[-1]):
                return
            ks = acc + [k_last]
            cls = [
                (ks[j] - (p if j == n1 - 1 else 0)) * fan.mult[j] // periods[j]
                for j in range(n1)
            ]
            out.setdefault(canonical_form(fan, cls, hnf), cls)
            return
        for kv in range(-periods[i], periods[i]):
            rec(i + 1, acc + [kv])

    rec(0, [])
    return [list(c) for c in out.values()]
