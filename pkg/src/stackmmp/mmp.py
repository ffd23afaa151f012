"""Toric minimal model program: wall relations, extremal classes, fan surgery.

The driver contracts (K+B)-negative extremal classes until every branch
reaches Picard rank 1.  Surgered fans are re-validated after every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import divisors, lattice, lp
from .fans import FanError, StackyFan, require_valid, star_fan, walls


class MMPError(FanError):
    pass


class MinimalModelReached(MMPError):
    pass


@dataclass(frozen=True)
class WallRelation:
    """Primitive relation sum a_i v_i = 0 among the n+1 rays on a wall.

    `involved` lists global ray indices ordered positives, zeros, negatives;
    `a` the matching coefficients; alpha / beta the split points (1-based
    counts: a_i > 0 for the first alpha entries, zero up to beta)."""

    involved: tuple
    a: tuple
    alpha: int
    beta: int

    @property
    def positives(self):
        return self.involved[: self.alpha]

    @property
    def zeros(self):
        return self.involved[self.alpha: self.beta]

    @property
    def negatives(self):
        return self.involved[self.beta:]

    def embedded(self, n_rays):
        v = [0] * n_rays
        for idx, ai in zip(self.involved, self.a):
            v[idx] = ai
        return tuple(v)

    def deg(self, fan):
        return sum(
            (Fraction(ai, fan.mult[idx]) for idx, ai in zip(self.involved, self.a)),
            Fraction(0),
        )

    def kind(self, fan):
        n = fan.dim
        if self.beta == n + 1:
            return "fano" if fan.picard_rank == 1 else "mori_fiber"
        if self.beta == n:
            return "divisorial"
        return "flip"

    def to_dict(self, fan=None):
        d = {
            "involved": list(self.involved),
            "a": list(self.a),
            "alpha": self.alpha,
            "beta": self.beta,
        }
        if fan is not None:
            d["deg"] = self.deg(fan)
            d["kind"] = self.kind(fan)
        return d


def well_prepared(rel):
    """Dropping any one nonzero coefficient leaves the rest coprime."""
    nz = [a for a in rel.a if a != 0]
    if len(nz) <= 1:
        return True
    for skip in range(len(nz)):
        g = 0
        for j, a in enumerate(nz):
            if j != skip:
                g = gcd(g, abs(a))
        if g != 1:
            return False
    return True


def _order_relation(indices, coeffs):
    pos = [(i, a) for i, a in zip(indices, coeffs) if a > 0]
    zer = [(i, a) for i, a in zip(indices, coeffs) if a == 0]
    neg = [(i, a) for i, a in zip(indices, coeffs) if a < 0]
    ordered = pos + zer + neg
    return WallRelation(
        involved=tuple(i for i, _ in ordered),
        a=tuple(a for _, a in ordered),
        alpha=len(pos),
        beta=len(pos) + len(zer),
    )


def wall_relation(fan, wall):
    """The primitive relation among the wall rays and the two side rays,
    sign-normalized so the side rays get positive coefficients."""
    indices = [wall.side_a, wall.side_b] + list(wall.wall_rays)
    A = lattice.transpose([list(fan.rays[i]) for i in indices])
    basis = lattice.kernel_basis(A)
    if len(basis) != 1:
        raise MMPError(f"wall {wall} has a degenerate relation")
    a = basis[0]
    if a[0] == 0 or a[1] == 0:
        raise MMPError(f"wall {wall}: side ray coefficient vanishes")
    if a[0] < 0:
        a = [-x for x in a]
    if a[1] < 0:
        raise MMPError(f"wall {wall}: side rays on the same side of the wall")
    rel = _order_relation(indices, a)
    if not (2 <= rel.alpha <= rel.beta <= fan.dim + 1):
        raise MMPError(f"wall {wall}: relation splits out of range")
    if not well_prepared(rel):
        raise MMPError(f"wall {wall}: relation is not well prepared")
    return rel


def extremal_negative_classes(fan):
    """(K+B)-negative extremal curve classes, as (relation, member walls).

    Classes are the primitive wall relations embedded in Z^{#rays}, grouped
    by equality (primitive normalization makes proportional classes equal);
    a class is extremal iff it is not a nonnegative rational combination of
    the others.  Raises MinimalModelReached when none is (K+B)-negative.
    """
    groups = {}
    for w in walls(fan):
        rel = wall_relation(fan, w)
        groups.setdefault(rel.embedded(fan.n_rays), (rel, []))[1].append(w)
    keys = sorted(groups)
    extremal = []
    for key in keys:
        others = [list(k) for k in keys if k != key]
        if not lp.in_nonneg_span(list(key), others):
            extremal.append(key)
    out = []
    for key in extremal:
        rel, members = groups[key]
        if rel.deg(fan) > 0:
            out.append((rel, members))
    if not out:
        raise MinimalModelReached(
            "minimal model reached: no (K+B)-negative extremal class"
        )
    return out


# ---------------------------------------------------------------------------
# steps

@dataclass(frozen=True)
class MMPStep:
    kind: str                  # "fano" | "mori_fiber" | "divisorial" | "flip"
    fan: StackyFan             # source fan
    rel: WallRelation
    result: StackyFan = None   # base fan / Y / X+ (None for fano)
    ray_map: dict = None       # source ray -> (result ray, s or identity)
    s: dict = None             # mori fiber: source ray -> s_i
    contracted_ray: int = None
    stratum: tuple = None      # divisorial: (contracted,); flip: negatives
    fiber_fan: StackyFan = None    # F, base of the exceptional fibration
    fiber_ray_map: dict = None     # star ray index -> (F ray index, s)
    star: object = None            # StarFan of the stratum

    def to_dict(self):
        d = {"kind": self.kind, "fan": self.fan.to_dict(),
             "rel": self.rel.to_dict(self.fan)}
        if self.result is not None:
            d["result"] = self.result.to_dict()
        if self.ray_map is not None:
            d["ray_map"] = {str(k): list(v) for k, v in self.ray_map.items()}
        if self.s is not None:
            d["s"] = {str(k): v for k, v in self.s.items()}
        if self.contracted_ray is not None:
            d["contracted_ray"] = self.contracted_ray
        if self.stratum is not None:
            d["stratum"] = list(self.stratum)
        if self.fiber_fan is not None:
            d["fiber_fan"] = self.fiber_fan.to_dict()
            d["fiber_ray_map"] = {
                str(k): list(v) for k, v in self.fiber_ray_map.items()
            }
        return d


def _mori_fiber_base(fan, positives):
    """Quotient fan by the span of the positive rays; returns
    (base fan, ray_map source-ray -> (base ray, s))."""
    gens = [list(fan.rays[i]) for i in positives]
    proj, _ = lattice.quotient_projection(fan.dim, gens)
    base_dim = len(proj)
    ray_index = {}
    base_rays, base_mult = [], []
    ray_map = {}
    pos = set(positives)
    for j in range(fan.n_rays):
        if j in pos:
            continue
        w = lattice.mat_vec(list(proj), list(fan.rays[j]))
        if all(x == 0 for x in w):
            raise MMPError(f"ray {j} collapses under the fiber projection")
        prim, s = lattice.primitive_part(w)
        key = tuple(prim)
        if key in ray_index:
            idx = ray_index[key]
            if base_mult[idx] != fan.mult[j] * s:
                raise MMPError(
                    f"base ray of {j} carries conflicting boundary multiplicity"
                )
        else:
            idx = len(base_rays)
            ray_index[key] = idx
            base_rays.append(prim)
            base_mult.append(fan.mult[j] * s)
        ray_map[j] = (idx, s)
    cones = set()
    for c in fan.max_cones:
        img = tuple(sorted({ray_map[j][0] for j in c if j not in pos}))
        if len(img) == base_dim:
            cones.add(img)
    base = StackyFan.make(base_dim, base_rays, base_mult, sorted(cones))
    return base, ray_map


def _merge_classes(fan, member_walls):
    """Partition maximal cones into merge classes across the given walls."""
    cone_idx = {c: i for i, c in enumerate(fan.max_cones)}
    parent = list(range(len(fan.max_cones)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for w in member_walls:
        pair = [
            cone_idx[c]
            for c in fan.max_cones
            if set(w.wall_rays) <= set(c)
            and (w.side_a in c) != (w.side_b in c)
        ]
        a, b = pair
        parent[find(a)] = find(b)
    groups = {}
    for i, c in enumerate(fan.max_cones):
        groups.setdefault(find(i), []).append(c)
    return list(groups.values())


def _exceptional_fibration(fan, rel, stratum):
    """Star fan of the stratum and the Mori fiber base of the exceptional
    locus, via the induced relation abar_i = a_i t_i / t."""
    star = star_fan(fan, stratum)
    bar_positive = []
    for i in rel.positives:
        idx, _t = star.ray_map[i]
        bar_positive.append(idx)
    bar_positive = sorted(set(bar_positive))
    base, ray_map = _mori_fiber_base(star.fan, bar_positive)
    return star, base, ray_map


def perform_step(fan, rel, member_walls, seed=0):
    kind = rel.kind(fan)
    if kind == "fano":
        return MMPStep(kind="fano", fan=fan, rel=rel)

    if kind == "mori_fiber":
        base, ray_map = _mori_fiber_base(fan, rel.positives)
        require_valid(base, seed=seed)
        s = {j: sv for j, (_, sv) in ray_map.items()}
        return MMPStep(
            kind="mori_fiber", fan=fan, rel=rel, result=base,
            ray_map=ray_map, s=s,
        )

    if kind == "divisorial":
        (contracted,) = rel.negatives
        merged = []
        for group in _merge_classes(fan, member_walls):
            ray_union = sorted(set(i for c in group for i in c))
            if len(group) == 1 and contracted not in ray_union:
                merged.append(tuple(ray_union))
                continue
            new_cone = tuple(i for i in ray_union if i != contracted)
            if len(new_cone) != fan.dim:
                raise MMPError(
                    f"divisorial merge produced a cone on {len(new_cone)} rays"
                )
            merged.append(new_cone)
        keep = [i for i in range(fan.n_rays) if i != contracted]
        reindex = {old: new for new, old in enumerate(keep)}
        Y = StackyFan.make(
            fan.dim,
            [fan.rays[i] for i in keep],
            [fan.mult[i] for i in keep],
            sorted({tuple(sorted(reindex[i] for i in c)) for c in merged}),
        )
        require_valid(Y, seed=seed)
        star, fiber, fiber_map = _exceptional_fibration(fan, rel, (contracted,))
        require_valid(fiber, seed=seed)
        return MMPStep(
            kind="divisorial", fan=fan, rel=rel, result=Y,
            ray_map={old: (new, 1) for old, new in reindex.items()},
            contracted_ray=contracted, stratum=(contracted,),
            fiber_fan=fiber, fiber_ray_map=fiber_map, star=star,
        )

    # flip
    negatives = tuple(sorted(rel.negatives))
    positives = set(rel.positives)
    involved = set(rel.involved)
    new_cones = set()
    for group in _merge_classes(fan, member_walls):
        ray_union = sorted(set(i for c in group for i in c))
        if len(group) == 1 and not involved <= set(ray_union):
            new_cones.add(tuple(ray_union))
            continue
        link = [i for i in ray_union if i not in involved]
        for i in sorted(negatives):
            cone = tuple(sorted([j for j in involved if j != i] + link))
            if len(cone) != fan.dim:
                raise MMPError("flip surgery produced a cone of wrong size")
            new_cones.add(cone)
    xplus = StackyFan.make(fan.dim, fan.rays, fan.mult, sorted(new_cones))
    require_valid(xplus, seed=seed)
    if set(i for c in xplus.max_cones for i in c) != set(
        i for c in fan.max_cones for i in c
    ):
        raise MMPError("flip changed the ray set")
    star, fiber, fiber_map = _exceptional_fibration(fan, rel, negatives)
    require_valid(fiber, seed=seed)
    return MMPStep(
        kind="flip", fan=fan, rel=rel, result=xplus,
        ray_map={i: (i, 1) for i in range(fan.n_rays)},
        stratum=negatives, fiber_fan=fiber, fiber_ray_map=fiber_map, star=star,
    )


def run_mmp(fan, flip_guard=1000, seed=0):
    """Run the program to completion; returns the ordered list of steps.

    After a Mori fiber step the driver recurses into the base fan, so the
    returned list is the chain ending in a Fano step.  Ties between extremal
    classes are broken lexicographically on the normalized relation (involved
    ray indices, then coefficients).
    """
    steps = []
    current = fan
    flips = 0
    while True:
        if current.picard_rank == 1:
            a = divisors.global_relation(current)
            rel = _order_relation(range(current.n_rays), a)
            steps.append(MMPStep(kind="fano", fan=current, rel=rel))
            return steps
        classes = extremal_negative_classes(current)
        classes.sort(key=lambda rw: (rw[0].involved, rw[0].a))
        rel, members = classes[0]
        step = perform_step(current, rel, members, seed=seed)
        steps.append(step)
        if step.kind == "flip":
            flips += 1
            if flips > flip_guard:
                raise MMPError(f"flip guard exceeded ({flip_guard} flips)")
        current = step.result
