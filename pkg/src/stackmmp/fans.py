"""Stacky fans: representation, validation, walls, star fans, K-theory rank.

A stacky fan is a complete simplicial fan in Z^n together with a positive
integer multiplicity r_i on each ray.  Ray and cone indices are 0-based
everywhere, including the JSON format.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice, lp


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Wall:
    wall_rays: tuple
    side_a: int
    side_b: int


@dataclass(frozen=True)
class StackyFan:
    dim: int
    rays: tuple          # tuple of tuples of ints, primitive
    mult: tuple          # positive ints, one per ray
    max_cones: tuple     # tuple of sorted tuples of ray indices, size dim

    @staticmethod
    def make(dim, rays, mult, max_cones):
        return StackyFan(
            dim=dim,
            rays=tuple(tuple(v) for v in rays),
            mult=tuple(mult),
            max_cones=tuple(tuple(sorted(c)) for c in max_cones),
        )

    @property
    def n_rays(self):
        return len(self.rays)

    @property
    def picard_rank(self):
        return self.n_rays - self.dim

    def cone_matrix(self, cone):
        """Rows are the ray vectors of the cone."""
        return [list(self.rays[i]) for i in cone]

    def to_dict(self):
        return {
            "dim": self.dim,
            "rays": [list(v) for v in self.rays],
            "mult": list(self.mult),
            "max_cones": [list(c) for c in self.max_cones],
        }

    @staticmethod
    def from_dict(d):
        return StackyFan.make(d["dim"], d["rays"], d["mult"], d["max_cones"])

    def to_json(self):
        return canonical_json(self.to_dict())

    @staticmethod
    def from_json(text):
        return StackyFan.from_dict(json.loads(text))


def canonical_json(obj):
    """Canonical JSON: sorted keys, compact separators, big ints as strings."""

    def conv(x):
        if isinstance(x, bool):
            return x
        if isinstance(x, int):
            return str(x) if abs(x) >= 2**53 else x
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        if isinstance(x, dict):
            return {k: conv(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [conv(v) for v in x]
        return x

    return json.dumps(conv(obj), sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# validation

def _face_count(fan):
    """Map (dim-1)-subset of a maximal cone -> list of cones containing it."""
    faces = {}
    for ci, cone in enumerate(fan.max_cones):
        for drop in range(len(cone)):
            face = tuple(x for j, x in enumerate(cone) if j != drop)
            faces.setdefault(face, []).append(ci)
    return faces


def _contains_direction(fan, cone, x):
    """Does cone contain direction x (list of Fractions)?  Returns the
    barycentric coordinates or None; coordinates equal to 0 mean boundary."""
    M = lattice.transpose(fan.cone_matrix(cone))
    try:
        lam = lattice.solve_rational(M, x)
    except ValueError:
        return None
    if all(l >= 0 for l in lam):
        return lam
    return None


def point_location_sweep(fan, samples=200, seed=0):
    """Check that random rational directions land in exactly one maximal cone.

    Directions hitting a cone boundary are resampled; returns a list of
    violation strings (empty means the sweep passed).
    """
    rng = random.Random(seed)
    n = fan.dim
    if n == 0:
        return []
    bad = []
    done = 0
    attempts = 0
    while done < samples and attempts < 50 * samples:
        attempts += 1
        x = [Fraction(rng.randint(-10**6, 10**6)) for _ in range(n)]
        if all(v == 0 for v in x):
            continue
        hits = []
        boundary = False
        for ci, cone in enumerate(fan.max_cones):
            lam = _contains_direction(fan, cone, x)
            if lam is not None:
                if any(l == 0 for l in lam):
                    boundary = True
                    break
                hits.append(ci)
        if boundary:
            continue
        done += 1
        if len(hits) != 1:
            bad.append(
                f"direction {[str(v) for v in x]} lies in {len(hits)} maximal cones"
            )
            if len(bad) >= 5:
                break
    return bad


def is_projective(fan):
    """Exact LP feasibility of a strictly convex rational support function.

    One linear functional per maximal cone; equal on shared wall rays; a
    normalized strict gap of 1 across each wall.
    """
    n = fan.dim
    cones = fan.max_cones
    if len(cones) <= 1:
        return True
    nvars = n * len(cones)
    eqs = []
    ineqs = []

    def var_block(ci, vec, sign=1):
        row = [0] * nvars
        for j in range(n):
            row[ci * n + j] = sign * vec[j]
        return row

    for w in walls(fan):
        ca = next(ci for ci, c in enumerate(cones)
                  if w.side_a in c and set(w.wall_rays) <= set(c))
        cb = next(ci for ci, c in enumerate(cones)
                  if w.side_b in c and set(w.wall_rays) <= set(c))
        for ri in w.wall_rays:
            v = fan.rays[ri]
            row = var_block(ca, v)
            for j in range(n):
                row[cb * n + j] -= v[j]
            eqs.append((row, 0))
        # strict convexity across the wall: m_cb evaluates lower on side_a's ray
        v = fan.rays[w.side_a]
        row = var_block(ca, v)
        for j in range(n):
            row[cb * n + j] -= v[j]
        ineqs.append((row, 1))
    return lp.feasible(nvars, eqs=eqs, ineqs=ineqs)


def validate(fan, seed=0, samples=200, check_projective=True):
    """Return a list of violation strings; empty list means the fan passes."""
    issues = []
    n = fan.dim
    if len(fan.mult) != fan.n_rays:
        issues.append("mult length does not match ray count")
        return issues
    for i, v in enumerate(fan.rays):
        if len(v) != n:
            issues.append(f"ray {i} has wrong dimension")
            return issues
        if not lattice.is_primitive(list(v)):
            issues.append(f"non-primitive ray {i}")
    for i, r in enumerate(fan.mult):
        if r < 1:
            issues.append(f"multiplicity r_{i} = {r} < 1")
    seen = set()
    for cone in fan.max_cones:
        if len(cone) != n:
            issues.append(f"cone {cone} does not have {n} rays")
            continue
        if cone in seen:
            issues.append(f"duplicate cone {cone}")
        seen.add(cone)
        if n > 0 and lattice.det(fan.cone_matrix(cone)) == 0:
            issues.append(f"non-simplicial (degenerate) cone {cone}")
    if issues:
        return issues
    in_cone = set(i for c in fan.max_cones for i in c)
    for i in range(fan.n_rays):
        if i not in in_cone and n > 0:
            issues.append(f"ray {i} not contained in any maximal cone")
    for face, cones in _face_count(fan).items():
        if len(cones) != 2:
            issues.append(
                f"incomplete: face {set(face) if face else '{}'} on "
                f"{len(cones)} cone(s)"
            )
    if issues:
        return issues
    issues.extend(point_location_sweep(fan, samples=samples, seed=seed))
    if issues:
        return issues
    if check_projective and not is_projective(fan):
        issues.append("non-projective: no strictly convex support function")
    return issues


def require_valid(fan, **kw):
    issues = validate(fan, **kw)
    if issues:
        raise FanError("; ".join(issues))


# ---------------------------------------------------------------------------
# walls

def walls(fan):
    """All (dim-1)-faces shared by exactly two maximal cones, each once."""
    out = []
    for face, cones in sorted(_face_count(fan).items()):
        if len(cones) != 2:
            raise FanError(
                f"face {set(face) if face else '{}'} lies on {len(cones)} "
                "maximal cones; fan is not complete"
            )
        c1, c2 = fan.max_cones[cones[0]], fan.max_cones[cones[1]]
        side_a = next(i for i in c1 if i not in face)
        side_b = next(i for i in c2 if i not in face)
        out.append(Wall(wall_rays=tuple(face), side_a=side_a, side_b=side_b))
    return out


# ---------------------------------------------------------------------------
# star fans

@dataclass(frozen=True)
class StarFan:
    """Stacky fan of a closed stratum plus the bookkeeping to go back."""
    fan: StackyFan
    stratum: tuple
    proj: tuple            # rows of the projection N -> N_bar
    ray_map: dict          # ambient ray index -> (star ray index, t)
    t: dict                # ambient ray index -> t


def is_face(fan, S):
    S = set(S)
    return any(S <= set(c) for c in fan.max_cones)


def star_fan(fan, stratum):
    """Stacky fan of the closed stratum V(S).

    Lattice is N / (span(v_i : i in S) cap N); rays are primitive images
    t_j vbar_j of the rays adjacent to S, with multiplicities r_j * t_j.
    """
    S = tuple(sorted(set(stratum)))
    if not is_face(fan, S):
        raise FanError(f"stratum {set(S)} is not a face of any maximal cone")
    gens = [list(fan.rays[i]) for i in S]
    proj, _ = lattice.quotient_projection(fan.dim, gens)
    new_dim = fan.dim - len(S)
    ray_index = {}
    new_rays = []
    new_mult = []
    ray_map = {}
    tmap = {}
    adjacent = sorted(
        set(
            j
            for c in fan.max_cones
            if set(S) <= set(c)
            for j in c
            if j not in S
        )
    )
    for j in adjacent:
        w = lattice.mat_vec(list(proj), list(fan.rays[j]))
        prim, t = lattice.primitive_part(w)
        key = tuple(prim)
        if key in ray_index:
            idx = ray_index[key]
            if new_mult[idx] != fan.mult[j] * t:
                raise FanError(
                    f"star rays of {j} collide with inconsistent multiplicities"
                )
        else:
            idx = len(new_rays)
            ray_index[key] = idx
            new_rays.append(prim)
            new_mult.append(fan.mult[j] * t)
        ray_map[j] = (idx, t)
        tmap[j] = t
    new_cones = set()
    for c in fan.max_cones:
        if set(S) <= set(c):
            new_cones.add(tuple(sorted(ray_map[j][0] for j in c if j not in S)))
    dfan = StackyFan.make(new_dim, new_rays, new_mult, sorted(new_cones))
    return StarFan(fan=dfan, stratum=S, proj=tuple(tuple(r) for r in proj),
                   ray_map=ray_map, t=tmap)


# ---------------------------------------------------------------------------
# K-theory rank

def k0_rank(fan):
    """Sum over maximal cones of |det(r_i v_i : i in cone)|: the stacky point
    count, which is the expected length of a complete exceptional collection."""
    total = 0
    for cone in fan.max_cones:
        M = [[fan.mult[i] * x for x in fan.rays[i]] for i in cone]
        total += abs(lattice.det(M))
    return total


# ---------------------------------------------------------------------------
# built-in fans

def _builtin_fans():
    fans = {}
    fans["P1"] = StackyFan.make(1, [[1], [-1]], [1, 1], [[0], [1]])
    fans["P1r2"] = StackyFan.make(1, [[1], [-1]], [2, 1], [[0], [1]])
    fans["P1r3"] = StackyFan.make(1, [[1], [-1]], [3, 1], [[0], [1]])
    fans["P2"] = StackyFan.make(
        2, [[1, 0], [0, 1], [-1, -1]], [1, 1, 1], [[0, 1], [0, 2], [1, 2]]
    )
    fans["P2r222"] = StackyFan.make(
        2, [[1, 0], [0, 1], [-1, -1]], [2, 2, 2], [[0, 1], [0, 2], [1, 2]]
    )
    fans["P112"] = StackyFan.make(
        2, [[1, 0], [0, 1], [-1, -2]], [1, 1, 1], [[0, 1], [0, 2], [1, 2]]
    )
    fans["P1xP1"] = StackyFan.make(
        2,
        [[1, 0], [0, 1], [-1, 0], [0, -1]],
        [1, 1, 1, 1],
        [[0, 1], [1, 2], [2, 3], [0, 3]],
    )
    fans["F1"] = StackyFan.make(
        2,
        [[1, 0], [0, 1], [-1, 1], [0, -1]],
        [1, 1, 1, 1],
        [[0, 1], [1, 2], [2, 3], [0, 3]],
    )
    fans["P3"] = StackyFan.make(
        3,
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
        [1, 1, 1, 1],
        [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
    )
    # blow-up of P3 along the invariant P1 = V(<e1, e2>)
    fans["BLP3"] = StackyFan.make(
        3,
        [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1], [1, 1, 0]],
        [1, 1, 1, 1, 1],
        [[0, 2, 4], [1, 2, 4], [0, 3, 4], [1, 3, 4], [0, 2, 3], [1, 2, 3]],
    )
    # 3-fold with a K-negative small contraction: circuit v0 + 2 v1 = v2 + v3;
    # the initial triangulation puts rays 2,3 on the contracted wall.
    fans["FLIP3"] = StackyFan.make(
        3,
        [[1, 0, 0], [0, 0, 1], [1, 1, 1], [0, -1, 1], [-1, 0, -2]],
        [1, 1, 1, 1, 1],
        [[0, 2, 3], [1, 2, 3], [0, 2, 4], [1, 2, 4], [0, 3, 4], [1, 3, 4]],
    )
    return fans


BUILTIN_FANS = _builtin_fans()


def load_fan(source):
    """Resolve a fan from a built-in name or a JSON file path."""
    if source in BUILTIN_FANS:
        return BUILTIN_FANS[source]
    with open(source) as f:
        return StackyFan.from_json(f.read())
