"""Minimal model program: wall relations, extremal classes, fan surgery."""

import pytest

from stackmmp import mmp
from stackmmp.fans import BUILTIN_FANS, walls
from stackmmp.mmp import MinimalModelReached, MMPError


def test_wall_relation_f1_exceptional():
    # the wall on the ray (0,1) carries the relation u0 + u2 - u1 = 0
    fan = BUILTIN_FANS["F1"]
    (w,) = [w for w in walls(fan) if w.wall_rays == (1,)]
    rel = mmp.wall_relation(fan, w)
    assert rel.involved == (0, 2, 1)
    assert rel.a == (1, 1, -1)
    assert rel.alpha == 2 and rel.beta == 2
    assert rel.kind(fan) == "divisorial"
    assert rel.deg(fan) == 1


def test_wall_relation_sides_positive():
    for name, fan in BUILTIN_FANS.items():
        for w in walls(fan):
            rel = mmp.wall_relation(fan, w)
            side_coeff = dict(zip(rel.involved, rel.a))
            assert side_coeff[w.side_a] > 0, (name, w)
            assert side_coeff[w.side_b] > 0, (name, w)
            assert 2 <= rel.alpha <= rel.beta <= fan.dim + 1


def test_all_wall_relations_well_prepared():
    for name, fan in BUILTIN_FANS.items():
        for w in walls(fan):
            rel = mmp.wall_relation(fan, w)
            assert mmp.well_prepared(rel), (name, w)


def test_extremal_classes_f1():
    fan = BUILTIN_FANS["F1"]
    classes = mmp.extremal_negative_classes(fan)
    embedded = sorted(rel.embedded(fan.n_rays) for rel, _ in classes)
    # fiber class and (-1)-curve class; their sum is not extremal
    assert embedded == [(0, 1, 0, 1), (1, -1, 1, 0)]


def test_minimal_model_reached_guard(monkeypatch):
    # complete fans always carry a boundary-negative class, so force the
    # degree filter to reject everything and check the error path
    from fractions import Fraction

    monkeypatch.setattr(
        mmp.WallRelation, "deg", lambda self, fan: Fraction(-1)
    )
    with pytest.raises(MinimalModelReached):
        mmp.extremal_negative_classes(BUILTIN_FANS["P1"])


def test_mori_fiber_step_p1xp1():
    fan = BUILTIN_FANS["P1xP1"]
    steps = mmp.run_mmp(fan)
    assert [s.kind for s in steps] == ["mori_fiber", "fano"]
    mf = steps[0]
    assert mf.result.dim == 1
    assert mf.rel.alpha == 2          # base dimension n + 1 - alpha = 1
    assert set(mf.s.values()) == {1}  # all projections primitive
    assert sorted(mf.result.rays) == [(-1,), (1,)]
    assert mf.result.mult == (1, 1)


def test_divisorial_step_f1():
    fan = BUILTIN_FANS["F1"]
    steps = mmp.run_mmp(fan)
    assert [s.kind for s in steps] == ["divisorial", "fano"]
    step = steps[0]
    assert step.contracted_ray == 1
    assert step.result.n_rays == fan.n_rays - 1
    assert step.result.picard_rank == fan.picard_rank - 1
    # the result is the projective plane
    assert sorted(step.result.rays) == sorted(
        ((1, 0), (-1, 1), (0, -1))
    )
    # exceptional fibration: divisor D = P^1, fiber base F = point
    assert step.star.fan.dim == 1
    assert step.fiber_fan.dim == 0


def test_divisorial_step_blp3():
    fan = BUILTIN_FANS["BLP3"]
    steps = mmp.run_mmp(fan)
    assert [s.kind for s in steps] == ["divisorial", "fano"]
    step = steps[0]
    assert step.contracted_ray == 4
    assert step.result.n_rays == 4          # projective 3-space
    assert step.fiber_fan.dim == 1          # blown-up curve is a line


def test_flip_step_flip3():
    fan = BUILTIN_FANS["FLIP3"]
    steps = mmp.run_mmp(fan)
    assert [s.kind for s in steps] == ["flip", "mori_fiber", "fano"]
    flip = steps[0]
    assert flip.rel.a == (1, 2, -1, -1)
    assert flip.stratum == (2, 3)
    xplus = flip.result
    assert xplus.rays == fan.rays and xplus.mult == fan.mult
    assert xplus.max_cones != fan.max_cones
    assert xplus.n_rays == fan.n_rays
    # the contracted locus is a stacky line over a point fiber
    assert flip.star.fan.dim == 1
    assert sorted(flip.star.fan.mult) == [1, 2]
    assert flip.fiber_fan.dim == 0


def test_flip_guard():
    fan = BUILTIN_FANS["FLIP3"]
    with pytest.raises(MMPError, match="flip guard"):
        mmp.run_mmp(fan, flip_guard=0)


def test_fano_terminal_steps():
    for name in ["P2", "P3", "P112", "P1r2", "P2r222"]:
        steps = mmp.run_mmp(BUILTIN_FANS[name])
        assert [s.kind for s in steps] == ["fano"], name
        rel = steps[0].rel
        assert all(a > 0 for a in rel.a)


def test_run_mmp_deterministic():
    for name in ["F1", "P1xP1", "FLIP3"]:
        a = mmp.run_mmp(BUILTIN_FANS[name])
        b = mmp.run_mmp(BUILTIN_FANS[name])
        assert [s.kind for s in a] == [s.kind for s in b]
        assert [s.rel for s in a] == [s.rel for s in b]


def test_step_serialization():
    steps = mmp.run_mmp(BUILTIN_FANS["FLIP3"])
    for s in steps:
        d = s.to_dict()
        assert d["kind"] == s.kind
        assert d["rel"]["involved"] == list(s.rel.involved)
    from stackmmp.fans import canonical_json

    assert canonical_json(steps[0].to_dict())  # serializable end to end
