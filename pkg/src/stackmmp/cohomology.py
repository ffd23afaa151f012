"""Exact sheaf cohomology of line-bundle classes on stacky fans.

Two independent routes are implemented: the weight-space method (per torus
character, reduced simplicial cohomology of a support subcomplex of the fan's
boundary complex) and a Cech complex on the maximal-cone cover.  They are
cross-checked in the test suite.

On top of that: restriction of classes to closed strata (with stabilizer
vanishing), Hom tables against pushforward objects, and the Koszul first
page for pushforward-vs-pushforward Homs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import ceil, floor

from . import lattice
from .fans import FanError, StarFan, star_fan


# ---------------------------------------------------------------------------
# reduced simplicial homology over Q

@lru_cache(maxsize=None)
def _subcomplex_reduced_dims(fan, vertices):
    """Reduced homology dimensions (degrees -1 .. dim-1) of the full
    subcomplex of the fan's boundary complex on the given vertex set.

    The empty face is always present, so the empty vertex set gives the
    one-dimensional reduced group in degree -1.
    """
    vset = set(vertices)
    faces = {frozenset()}
    for cone in fan.max_cones:
        local = sorted(vset & set(cone))
        for size in range(1, len(local) + 1):
            for f in combinations(local, size):
                faces.add(frozenset(f))
    by_dim = {}
    for f in faces:
        by_dim.setdefault(len(f) - 1, []).append(tuple(sorted(f)))
    for lst in by_dim.values():
        lst.sort()
    top = max(by_dim)
    ranks = {}
    for d in range(0, top + 1):
        lower = {f: i for i, f in enumerate(by_dim.get(d - 1, []))}
        rows = []
        for f in by_dim.get(d, []):
            col = [0] * len(lower)
            for j in range(len(f)):
                sub = f[:j] + f[j + 1:]
                col[lower[sub]] = (-1) ** j
            rows.append(col)
        ranks[d] = lattice.rational_rank(rows) if lower else 0
    dims = []
    for d in range(-1, fan.dim):
        cd = len(by_dim.get(d, []))
        dims.append(cd - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return tuple(dims)


# ---------------------------------------------------------------------------
# candidate weights

def weight_box(fan, k, margin=1):
    """Integer bounding box of the per-cone rational vertices u_sigma with
    <u_sigma, r_i v_i> = -k_i (i in sigma), enlarged by `margin`."""
    n = fan.dim
    if n == 0:
        return []
    lo = [None] * n
    hi = [None] * n
    for cone in fan.max_cones:
        A = [[fan.mult[i] * fan.rays[i][j] for j in range(n)] for i in cone]
        b = [-k[i] for i in cone]
        u = lattice.solve_rational(A, b)
        for j in range(n):
            f, c = floor(u[j]), ceil(u[j])
            lo[j] = f if lo[j] is None else min(lo[j], f)
            hi[j] = c if hi[j] is None else max(hi[j], c)
    return [(l - margin, h + margin) for l, h in zip(lo, hi)]


def _iter_box(box):
    if not box:
        yield ()
        return
    (l, h), rest = box[0], box[1:]
    for x in range(l, h + 1):
        for tail in _iter_box(rest):
            yield (x,) + tail


# ---------------------------------------------------------------------------
# the two cohomology routes

def weight_cohomology(fan, k, margin=1):
    dims = [0] * (fan.dim + 1)
    if fan.dim == 0:
        return tuple([1])
    for m in _iter_box(weight_box(fan, k, margin)):
        neg = tuple(
            i
            for i in range(fan.n_rays)
            if fan.mult[i] * sum(a * b for a, b in zip(m, fan.rays[i])) + k[i] < 0
        )
        red = _subcomplex_reduced_dims(fan, neg)
        for q in range(fan.dim + 1):
            dims[q] += red[q]  # red[q] is reduced degree q-1
    return tuple(dims)


@lru_cache(maxsize=None)
def _cech_pattern_dims(fan, neg):
    """Cech cohomology contribution of one weight, keyed by the set of rays
    pairing negatively: a cover intersection has a section exactly when it
    avoids every such ray."""
    cones = [set(c) for c in fan.max_cones]
    nc = len(cones)
    neg_set = set(neg)
    groups = []
    for p in range(nc):
        idx = {}
        for T in combinations(range(nc), p + 1):
            rays = set.intersection(*(cones[t] for t in T))
            if not (rays & neg_set):
                idx[T] = len(idx)
        groups.append(idx)
    ranks = {}
    for p in range(nc - 1):
        rows = []
        for T, _ in sorted(groups[p + 1].items()):
            col = [0] * len(groups[p])
            for j in range(len(T)):
                sub = T[:j] + T[j + 1:]
                if sub in groups[p]:
                    col[groups[p][sub]] = (-1) ** j
            rows.append(col)
        ranks[p + 1] = lattice.rational_rank(rows) if groups[p] else 0
    return tuple(
        len(groups[p]) - ranks.get(p, 0) - ranks.get(p + 1, 0)
        for p in range(nc)
    )


def cech_cohomology(fan, k, margin=1):
    if fan.dim == 0:
        return tuple([1])
    nc = len(fan.max_cones)
    dims = [0] * nc
    for m in _iter_box(weight_box(fan, k, margin)):
        neg = tuple(
            i
            for i in range(fan.n_rays)
            if fan.mult[i] * sum(a * b for a, b in zip(m, fan.rays[i])) + k[i] < 0
        )
        contrib = _cech_pattern_dims(fan, neg)
        for p in range(nc):
            dims[p] += contrib[p]
    if any(d != 0 for d in dims[fan.dim + 1:]):
        raise RuntimeError("Cech cohomology above the fan dimension is nonzero")
    return tuple(dims[: fan.dim + 1])


def cohomology_dims(fan, k, method="weight", margin=1):
    """dim H^q(X, O(sum k_i D_i)) for q = 0..dim."""
    if len(k) != fan.n_rays:
        raise FanError("class length does not match ray count")
    k = tuple(int(x) for x in k)
    if method == "weight":
        return weight_cohomology(fan, k, margin)
    if method == "cech":
        return cech_cohomology(fan, k, margin)
    raise ValueError(f"unknown method {method!r}")


def hom_line_bundles(fan, A, B, method="weight"):
    """Hom^q(O(A), O(B)) = H^q(O(B - A))."""
    diff = [b - a for a, b in zip(A, B)]
    return cohomology_dims(fan, diff, method)


# ---------------------------------------------------------------------------
# restriction to strata

ZERO_SHEAF = "zero"


def restrict_class(fan, star, k):
    """Restrict the class k to the closed stratum of `star` (a StarFan).

    Returns the class on the star fan, or None for the zero sheaf (the
    stabilizer group along the stratum acts by a nontrivial character).

    The character is trivial exactly when some integral weight m has
    <m, r_i v_i> = k_i on the stratum rays; the class is then shifted by
    that weight (making it zero on the stratum rays) and the coefficients
    on adjacent rays are transferred to their star images.
    """
    S = star.stratum
    A = [
        [fan.mult[i] * fan.rays[i][j] for j in range(fan.dim)]
        for i in S
    ]
    b = [k[i] for i in S]
    m = lattice.solve_integer(A, b)
    if m is None:
        return None
    shifted = [
        k[i] - fan.mult[i] * sum(a * v for a, v in zip(m, fan.rays[i]))
        for i in range(fan.n_rays)
    ]
    out = [0] * star.fan.n_rays
    for j, (idx, _t) in star.ray_map.items():
        out[idx] += shifted[j]
    return out


# ---------------------------------------------------------------------------
# Hom tables against pushforward objects

def _pad(table, length):
    out = list(table) + [0] * (length - len(table))
    return tuple(out[:length])


def hom_with_pushforward(fan, A, obj, method="weight"):
    """Hom^q(O(A), j_* psibar^* L tensor O(twist)) as a table of length dim+1."""
    star = star_fan(fan, obj.stratum)
    diff = [t - a for a, t in zip(A, obj.twist)]
    rest = restrict_class(fan, star, diff)
    if rest is None:
        return tuple([0] * (fan.dim + 1))
    cls = [l + r for l, r in zip(obj.star_class, rest)]
    return _pad(cohomology_dims(star.fan, cls, method), fan.dim + 1)


def hom_pushforward_line(fan, obj, B, method="weight"):
    """Hom^q(j_* psibar^* L tensor O(twist), O(B)) via Serre duality."""
    # Hom^q(P, O(B)) = Hom^{dim-q}(O(B), P tensor omega)^* with omega = O(-sum D_i)
    dual_obj = PushforwardData(
        stratum=obj.stratum,
        star_class=list(obj.star_class),
        twist=[t - 1 for t in obj.twist],
    )
    table = hom_with_pushforward(fan, B, dual_obj, method)
    return tuple(reversed(table))


@dataclass(frozen=True)
class PushforwardData:
    """Stratum ray-set, class on the stratum's star fan, ambient twist."""
    stratum: tuple
    star_class: tuple
    twist: tuple

    def __init__(self, stratum, star_class, twist):
        object.__setattr__(self, "stratum", tuple(sorted(stratum)))
        object.__setattr__(self, "star_class", tuple(star_class))
        object.__setattr__(self, "twist", tuple(twist))


@dataclass(frozen=True)
class ExtVerdict:
    status: str                     # "determined" | "vanishes" | "indeterminate"
    table: tuple = None             # total-degree dims when determined/vanishes
    page: tuple = None              # page[p][q]

    def is_vanishing(self):
        return self.status == "vanishes"


def hom_pushforwards(fan, obj1, obj2, method="weight"):
    """Ext between two pushforward objects on the same stratum.

    Computes the Koszul first page: resolving the first object, the p-th
    term is a direct sum over p-subsets I of the stratum rays of the ambient
    line bundle O(twist1 - twist2 - sum_I D_i) restricted to the stratum.
    The restriction happens after combining the twists, since the stabilizer
    characters of the factors mix; a nontrivial combined character kills the
    summand.  A surviving summand I contributes

        H^q(star, L2 - L1 + restrict(twist2 - twist1 + sum_I e_i))

    to the (p, q) entry, which sits in total degree p + q.
    """
    if tuple(sorted(obj1.stratum)) != tuple(sorted(obj2.stratum)):
        raise FanError("pushforward objects live on different strata")
    S = tuple(sorted(obj1.stratum))
    star = star_fan(fan, S)
    n = fan.dim
    c = len(S)
    diff = [t2 - t1 for t1, t2 in zip(obj1.twist, obj2.twist)]
    page = [[0] * (n + 1) for _ in range(c + 1)]
    for p in range(c + 1):
        for I in combinations(S, p):
            combined = list(diff)
            for i in I:
                combined[i] += 1
            rest = restrict_class(fan, star, combined)
            if rest is None:
                continue
            cls = [
                l2 - l1 + r
                for l1, l2, r in zip(obj1.star_class, obj2.star_class, rest)
            ]
            table = cohomology_dims(star.fan, cls, method)
            for q, d in enumerate(table):
                page[p][q] += d
    totals = [0] * (n + 1)
    entries = []
    for p in range(c + 1):
        for q in range(n + 1):
            if page[p][q]:
                if p + q <= n:
                    totals[p + q] += page[p][q]
                entries.append((p, q))
    page_t = tuple(tuple(row) for row in page)
    if not entries:
        return ExtVerdict("vanishes", table=tuple(totals), page=page_t)
    # determined only when nonzero entries are isolated: one per total degree
    # and no nonzero neighbours in adjacent total degrees (which a spectral
    # sequence differential could connect)
    by_total = {}
    for p, q in entries:
        by_total.setdefault(p + q, []).append((p, q))
    if any(len(v) > 1 for v in by_total.values()):
        return ExtVerdict("indeterminate", page=page_t)
    if any(t + 1 in by_total for t in by_total):
        return ExtVerdict("indeterminate", page=page_t)
    return ExtVerdict("determined", table=tuple(totals), page=page_t)
