"""HTTP service exposing the fan toolkit.

Every computation the CLI offers is an endpoint here; the CLI is a thin
client.  Fans are passed either as a built-in registry name or as a full
fan document.  All responses are canonical JSON (sorted keys, oversized
integers as decimal strings, exact rationals as "p/q" strings).
"""

from __future__ import annotations

from typing import Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response
from pydantic import BaseModel

from . import collection as collection_mod
from . import mmp as mmp_mod
from . import verify as verify_mod
from .cohomology import cohomology_dims
from .fans import (
    BUILTIN_FANS,
    FanError,
    StackyFan,
    canonical_json,
    k0_rank,
    validate,
    walls,
)

app = FastAPI(title="stackmmp", version="1.0.0")

FanSource = Union[str, dict]


class FanRequest(BaseModel):
    fan: FanSource


class CheckFanRequest(FanRequest):
    seed: int = 0
    samples: int = 200
    check_projective: bool = True


class MMPRequest(FanRequest):
    flip_guard: int = 1000
    seed: int = 0


class CohomRequest(FanRequest):
    k: list[int]
    method: str = "weight"


class CollectionRequest(FanRequest):
    flip_guard: int = 1000
    seed: int = 0


class VerifyRequest(FanRequest):
    collection: dict
    method: str = "weight"


class PipelineRequest(FanRequest):
    flip_guard: int = 1000
    seed: int = 0
    method: str = "weight"


def _resolve_fan(source: FanSource) -> StackyFan:
    if isinstance(source, str):
        if source not in BUILTIN_FANS:
            raise HTTPException(404, f"unknown built-in fan {source!r}")
        return BUILTIN_FANS[source]
    try:
        return StackyFan.from_dict(source)
    except (FanError, KeyError, TypeError, ValueError) as e:
        raise HTTPException(422, f"bad fan document: {e}")


def _json(payload) -> Response:
    return Response(content=canonical_json(payload),
                    media_type="application/json")


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/fans")
def list_fans():
    return _json({"fans": sorted(BUILTIN_FANS)})


@app.post("/check-fan")
def check_fan(req: CheckFanRequest):
    fan = _resolve_fan(req.fan)
    violations = validate(fan, seed=req.seed, samples=req.samples,
                          check_projective=req.check_projective)
    return _json({
        "valid": not violations,
        "violations": violations,
        "fan": fan.to_dict(),
        "k0_rank": k0_rank(fan) if not violations else None,
    })


@app.post("/walls")
def walls_endpoint(req: FanRequest):
    fan = _resolve_fan(req.fan)
    out = []
    try:
        for w in walls(fan):
            rel = mmp_mod.wall_relation(fan, w)
            out.append({
                "wall_rays": list(w.wall_rays),
                "side_a": w.side_a,
                "side_b": w.side_b,
                "relation": rel.to_dict(fan),
            })
    except FanError as e:
        raise HTTPException(422, str(e))
    return _json({"walls": out})


@app.post("/mmp")
def mmp_endpoint(req: MMPRequest):
    fan = _resolve_fan(req.fan)
    try:
        steps = mmp_mod.run_mmp(fan, flip_guard=req.flip_guard, seed=req.seed)
    except FanError as e:
        raise HTTPException(422, str(e))
    return _json({"steps": [s.to_dict() for s in steps]})


@app.post("/cohom")
def cohom_endpoint(req: CohomRequest):
    fan = _resolve_fan(req.fan)
    try:
        dims = cohomology_dims(fan, req.k, method=req.method)
    except (FanError, ValueError) as e:
        raise HTTPException(422, str(e))
    return _json({"dims": list(dims)})


@app.post("/collection")
def collection_endpoint(req: CollectionRequest):
    fan = _resolve_fan(req.fan)
    try:
        coll, steps = collection_mod.build_with_steps(
            fan, flip_guard=req.flip_guard, seed=req.seed
        )
    except FanError as e:
        raise HTTPException(422, str(e))
    return _json({
        "collection": coll.to_dict(),
        "steps": [s.to_dict() for s in steps],
    })


@app.post("/verify")
def verify_endpoint(req: VerifyRequest):
    fan = _resolve_fan(req.fan)
    try:
        coll = collection_mod.ExceptionalCollection.from_dict(
            fan, req.collection
        )
        report = verify_mod.verify_collection(fan, coll, method=req.method)
    except (FanError, KeyError, TypeError) as e:
        raise HTTPException(422, f"bad collection document: {e}")
    return _json({"report": report.to_dict(), "summary": report.summary()})


@app.post("/pipeline")
def pipeline_endpoint(req: PipelineRequest):
    fan = _resolve_fan(req.fan)
    try:
        coll, steps = collection_mod.build_with_steps(
            fan, flip_guard=req.flip_guard, seed=req.seed
        )
        report = verify_mod.verify_collection(fan, coll, method=req.method)
    except FanError as e:
        raise HTTPException(422, str(e))
    return _json({
        "steps": [s.to_dict() for s in steps],
        "collection": coll.to_dict(),
        "report": report.to_dict(),
        "summary": report.summary(),
    })
