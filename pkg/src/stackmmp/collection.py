"""Exceptional-collection assembly along the minimal model program.

Each program step contributes a builder: the Fano base case enumerates a
degree window of line-bundle classes; a Mori fiber step crosses a fiber
window with the base collection; divisorial and flip steps prepend
pushforward blocks from the exceptional stratum and transport the smaller
model's collection.  Every builder checks its cardinality against the
K-theory rank of its fan, so under-enumeration is an error, never a silent
truncation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from . import divisors, lattice, mmp
from .cohomology import restrict_class
from .fans import FanError, k0_rank


class CollectionError(FanError):
    pass


@dataclass(frozen=True)
class CollectionObject:
    shape: str                  # "line_bundle" | "pushforward"
    k: tuple                    # ambient class / ambient twist
    stratum: tuple = ()
    star_class: tuple = ()
    provenance: tuple = ()

    @staticmethod
    def line_bundle(k, provenance=()):
        return CollectionObject(
            shape="line_bundle", k=tuple(k), provenance=tuple(provenance)
        )

    @staticmethod
    def pushforward(stratum, star_class, twist, provenance=()):
        return CollectionObject(
            shape="pushforward", k=tuple(twist),
            stratum=tuple(sorted(stratum)), star_class=tuple(star_class),
            provenance=tuple(provenance),
        )

    def to_dict(self):
        d = {"shape": self.shape, "k": list(self.k),
             "provenance": list(self.provenance)}
        if self.shape == "pushforward":
            d["stratum"] = list(self.stratum)
            d["star_class"] = list(self.star_class)
        return d


@dataclass(frozen=True)
class ExceptionalCollection:
    fan: object
    objects: tuple
    blocks: tuple               # (label, start, length) contiguous runs

    def __len__(self):
        return len(self.objects)

    def to_dict(self):
        return {
            "objects": [o.to_dict() for o in self.objects],
            "blocks": [list(b) for b in self.blocks],
        }

    @staticmethod
    def from_dict(fan, d):
        objects = []
        for od in d["objects"]:
            if od["shape"] == "pushforward":
                objects.append(CollectionObject.pushforward(
                    od["stratum"], od["star_class"], od["k"],
                    provenance=od.get("provenance", ()),
                ))
            else:
                objects.append(CollectionObject.line_bundle(
                    od["k"], provenance=od.get("provenance", ())
                ))
        blocks = tuple(tuple(b) for b in d.get("blocks", ()))
        return ExceptionalCollection(fan, tuple(objects), blocks)


def _check_cardinality(fan, objects, where):
    expect = k0_rank(fan)
    if len(objects) != expect:
        raise CollectionError(
            f"{where}: collection has {len(objects)} objects, "
            f"K-theory rank is {expect}"
        )


def _window_box_bound(fan, rel):
    """Enumeration half-width: K = max_i ceil(r_i (1 + sum|a_j|/r_j) / |a_i|)."""
    s = sum(
        (Fraction(abs(a), fan.mult[i]) for i, a in zip(rel.involved, rel.a)),
        Fraction(0),
    )
    best = 0
    for i, a in zip(rel.involved, rel.a):
        if a != 0:
            best = max(best, ceil(Fraction(fan.mult[i]) * (1 + s) / abs(a)))
    return best


def _iter_support(support, n, K):
    """All integer vectors of length n supported on `support` with entries
    in [-K, K]."""
    if not support:
        yield (0,) * n
        return
    head, rest = support[0], support[1:]
    for tail in _iter_support(rest, n, K):
        for x in range(-K, K + 1):
            v = list(tail)
            v[head] = x
            yield tuple(v)


# ---------------------------------------------------------------------------
# Fano base case

def fano_collection(fan, rel=None):
    """Line bundles in the window 0 >= deg > -sum a_i/r_i on a rank-1 fan."""
    if fan.dim == 0:
        obj = CollectionObject.line_bundle((), provenance=("fano:point",))
        return ExceptionalCollection(fan, (obj,), (("fano", 0, 1),))
    if rel is None:
        a = divisors.global_relation(fan)
        rel = mmp._order_relation(range(fan.n_rays), a)
    total = rel.deg(fan)
    hnf = divisors.principal_hnf(fan)
    K = _window_box_bound(fan, rel)
    seen = {}
    for k in _iter_support(list(range(fan.n_rays)), fan.n_rays, K):
        form = divisors.canonical_form(fan, k, hnf)
        if form in seen:
            continue
        d = divisors.degree(fan, rel, form)
        if 0 >= d > -total:
            seen[form] = d
    ordered = sorted(seen.items(), key=lambda fd: (fd[1], fd[0]))
    objects = tuple(
        CollectionObject.line_bundle(form, provenance=(f"fano:deg={d}",))
        for form, d in ordered
    )
    _check_cardinality(fan, objects, "fano_collection")
    return ExceptionalCollection(fan, objects, (("fano", 0, len(objects)),))


# ---------------------------------------------------------------------------
# Mori fiber step

def _pullback_rows(n_rays, base_n_rays, ray_map):
    """Row per base ray: 1 on every source ray mapping onto it."""
    rows = [[0] * n_rays for _ in range(base_n_rays)]
    for j, (jbar, _s) in ray_map.items():
        rows[jbar][j] = 1
    return rows


def _pullback_class(n_rays, ray_map, base_class):
    out = [0] * n_rays
    for j, (jbar, _s) in ray_map.items():
        out[j] = base_class[jbar]
    return out


def fiber_collection(fan, step, base_coll):
    """Cross the fiber-window twists with the pulled-back base collection."""
    if any(o.shape != "line_bundle" for o in base_coll.objects):
        raise CollectionError(
            "fiber_collection: unsupported transport of non-line-bundle "
            "objects through a Mori fiber step"
        )
    rel = step.rel
    positives = list(rel.positives)
    pos_a = {i: a for i, a in zip(rel.involved, rel.a) if a > 0}
    total = sum(
        (Fraction(pos_a[i], fan.mult[i]) for i in positives), Fraction(0)
    )
    combined = lattice.hermite_normal_form(
        divisors.principal_rows(fan)
        + _pullback_rows(fan.n_rays, step.result.n_rays, step.ray_map)
    )
    K = _window_box_bound(fan, rel)
    seen = {}
    for k in _iter_support(positives, fan.n_rays, K):
        form = tuple(lattice.reduce_mod_lattice(list(k), combined))
        if form in seen:
            continue
        d = sum(
            (Fraction(pos_a[i] * form[i], fan.mult[i]) for i in positives),
            Fraction(0),
        )
        if 0 >= d > -total:
            seen[form] = d
    blocks_src = sorted(seen.items(), key=lambda fd: (fd[1], fd[0]))
    objects = []
    blocks = []
    for twist, d in blocks_src:
        start = len(objects)
        for b in base_coll.objects:
            cls = [
                p + t
                for p, t in zip(
                    _pullback_class(fan.n_rays, step.ray_map, b.k), twist
                )
            ]
            objects.append(
                CollectionObject.line_bundle(
                    cls,
                    provenance=(f"fiber:twist_deg={d}",) + b.provenance,
                )
            )
        blocks.append((f"fiber:deg={d}", start, len(objects) - start))
    objects = tuple(objects)
    _check_cardinality(fan, objects, "fiber_collection")
    return ExceptionalCollection(fan, objects, tuple(blocks))


# ---------------------------------------------------------------------------
# pushforward blocks shared by divisorial and flip steps

def _stratum_blocks(fan, step, F_coll, provenance_tag):
    """Window twist classes for the exceptional stratum, grouped and deduped,
    each crossed with the (pulled back) fiber collection."""
    if any(o.shape != "line_bundle" for o in F_coll.objects):
        raise CollectionError(
            "pushforward block: fiber collection must consist of line bundles"
        )
    rel = step.rel
    star = step.star
    stratum = tuple(sorted(step.stratum))
    total = rel.deg(fan)
    hnf = divisors.principal_hnf(fan)
    star_lattice = lattice.hermite_normal_form(
        divisors.principal_rows(star.fan)
        + _pullback_rows(
            star.fan.n_rays, step.fiber_fan.n_rays, step.fiber_ray_map
        )
    )
    K = _window_box_bound(fan, rel)
    groups = {}
    for k in _iter_support(list(range(fan.n_rays)), fan.n_rays, K):
        form = divisors.canonical_form(fan, k, hnf)
        d = divisors.degree(fan, rel, form)
        if not (0 > d >= -total):
            continue
        rest = restrict_class(fan, star, list(form))
        if rest is None:
            continue  # nontrivial stabilizer character: zero sheaf
        key = (d, tuple(lattice.reduce_mod_lattice(list(rest), star_lattice)))
        cur = groups.get(key)
        if cur is None or form < cur:
            groups[key] = form
    ordered = sorted(groups.items(), key=lambda kv: (kv[0][0], kv[1]))
    objects = []
    blocks = []
    for (d, _rkey), twist in ordered:
        start = len(objects)
        for f in F_coll.objects:
            star_class = [0] * star.fan.n_rays
            for j, (jbar, _s) in step.fiber_ray_map.items():
                star_class[j] = f.k[jbar]
            objects.append(
                CollectionObject.pushforward(
                    stratum, star_class, twist,
                    provenance=(f"{provenance_tag}:twist_deg={d}",)
                    + f.provenance,
                )
            )
        blocks.append((f"{provenance_tag}:deg={d}", start, len(objects) - start))
    return objects, blocks


# ---------------------------------------------------------------------------
# divisorial step

def divisorial_collection(fan, step, Y_coll, F_coll):
    objects, blocks = _stratum_blocks(fan, step, F_coll, "divisorial")
    rel = step.rel
    contracted = step.contracted_ray
    b_c = -dict(zip(rel.involved, rel.a))[contracted]
    inv_map = {new: old for old, (new, _s) in step.ray_map.items()}
    rel_a = dict(zip(rel.involved, rel.a))
    start = len(objects)
    for obj in Y_coll.objects:
        if obj.shape == "pushforward":
            old_stratum = tuple(sorted(inv_map[j] for j in obj.stratum))
            if set(old_stratum) & set(rel.involved):
                raise CollectionError(
                    "divisorial_collection: unsupported transport of a "
                    "pushforward whose stratum meets the contracted locus"
                )
            twist = _transport_divisorial(
                fan, step, rel_a, b_c, contracted, inv_map, obj.k
            )
            objects.append(
                CollectionObject.pushforward(
                    old_stratum, obj.star_class, twist,
                    provenance=("divisorial:transport",) + obj.provenance,
                )
            )
        else:
            cls = _transport_divisorial(
                fan, step, rel_a, b_c, contracted, inv_map, obj.k
            )
            objects.append(
                CollectionObject.line_bundle(
                    cls, provenance=("divisorial:transport",) + obj.provenance
                )
            )
    blocks = blocks + [("divisorial:transport", start, len(objects) - start)]
    objects = tuple(objects)
    _check_cardinality(fan, objects, "divisorial_collection")
    return ExceptionalCollection(fan, objects, tuple(blocks))


def _transport_divisorial(fan, step, rel_a, b_c, contracted, inv_map, y_class):
    """Coefficients carry over on surviving rays; the contracted ray gets
    k_c = floor((r_c / b_c) * sum_i a_i k_i / r_i) over the surviving rays."""
    cls = [0] * fan.n_rays
    for new, old in inv_map.items():
        cls[old] = y_class[new]
    acc = Fraction(0)
    for i, a in rel_a.items():
        if i != contracted:
            acc += Fraction(a * cls[i], fan.mult[i])
    cls[contracted] = (
        Fraction(fan.mult[contracted], b_c) * acc
    ).__floor__()
    return cls


# ---------------------------------------------------------------------------
# flip step

def flip_collection(fan, step, Xplus_coll, F_coll):
    objects, blocks = _stratum_blocks(fan, step, F_coll, "flip")
    rel = step.rel
    rel_a = dict(zip(rel.involved, rel.a))
    neg_total = sum(
        (Fraction(-rel_a[i], fan.mult[i]) for i in rel.negatives), Fraction(0)
    )
    start = len(objects)
    for obj in Xplus_coll.objects:
        if obj.shape == "pushforward":
            if set(obj.stratum) & set(rel.involved):
                raise CollectionError(
                    "flip_collection: unsupported transport of a pushforward "
                    "whose stratum meets the flipped locus"
                )
            objects.append(
                CollectionObject.pushforward(
                    obj.stratum, obj.star_class, obj.k,
                    provenance=("flip:transport",) + obj.provenance,
                )
            )
            continue
        d = divisors.degree(fan, rel, obj.k)
        if not (0 <= d < neg_total):
            # the degree is invariant under linear equivalence, so no
            # representative of this class can meet the transport window
            raise CollectionError(
                f"flip_collection: class {list(obj.k)} has transport degree "
                f"{d}, outside [0, {neg_total})"
            )
        objects.append(
            CollectionObject.line_bundle(
                obj.k, provenance=("flip:transport",) + obj.provenance
            )
        )
    blocks = blocks + [("flip:transport", start, len(objects) - start)]
    objects = tuple(objects)
    _check_cardinality(fan, objects, "flip_collection")
    return ExceptionalCollection(fan, objects, tuple(blocks))


# ---------------------------------------------------------------------------
# driver

def build_with_steps(fan, flip_guard=1000, seed=0):
    """Run the minimal model program and fold the builders bottom-up."""
    if fan.dim == 0:
        return fano_collection(fan), []
    steps = mmp.run_mmp(fan, flip_guard=flip_guard, seed=seed)
    coll = None
    for step in reversed(steps):
        if step.kind == "fano":
            coll = fano_collection(step.fan, step.rel)
        elif step.kind == "mori_fiber":
            coll = fiber_collection(step.fan, step, coll)
        elif step.kind == "divisorial":
            F_coll = build(step.fiber_fan, flip_guard=flip_guard, seed=seed)
            coll = divisorial_collection(step.fan, step, coll, F_coll)
        elif step.kind == "flip":
            F_coll = build(step.fiber_fan, flip_guard=flip_guard, seed=seed)
            coll = flip_collection(step.fan, step, coll, F_coll)
        else:
            raise CollectionError(f"unknown step kind {step.kind!r}")
    return coll, steps


def build(fan, flip_guard=1000, seed=0):
    coll, _ = build_with_steps(fan, flip_guard=flip_guard, seed=seed)
    return coll
