"""HTTP service endpoints, request validation, canonical responses."""

import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from stackmmp.fans import BUILTIN_FANS
from stackmmp.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok"}


def test_fans_listing(client):
    r = client.get("/fans")
    assert r.status_code == 200
    names = r.json()["fans"]
    for expected in ["P1", "P2", "P3", "P1xP1", "F1", "P112", "P1r2"]:
        assert expected in names


def test_check_fan_builtin(client):
    r = client.post("/check-fan", json={"fan": "P2"})
    assert r.status_code == 200
    body = r.json()
    assert body["valid"] is True
    assert body["violations"] == []
    assert body["k0_rank"] == 3


def test_check_fan_document(client):
    doc = BUILTIN_FANS["F1"].to_dict()
    r = client.post("/check-fan", json={"fan": doc})
    assert r.status_code == 200
    assert r.json()["valid"] is True


def test_check_fan_invalid_document(client):
    doc = {"dim": 1, "rays": [[1]], "mult": [1], "max_cones": [[0]]}
    r = client.post("/check-fan", json={"fan": doc})
    assert r.status_code == 200
    body = r.json()
    assert body["valid"] is False and body["violations"]


def test_unknown_fan_404(client):
    r = client.post("/walls", json={"fan": "NOPE"})
    assert r.status_code == 404


def test_bad_fan_document_422(client):
    r = client.post("/walls", json={"fan": {"rays": "nonsense"}})
    assert r.status_code == 422


def test_walls(client):
    r = client.post("/walls", json={"fan": "F1"})
    assert r.status_code == 200
    ws = r.json()["walls"]
    assert len(ws) == 4
    kinds = sorted(w["relation"]["kind"] for w in ws)
    assert "divisorial" in kinds and "mori_fiber" in kinds


def test_mmp(client):
    r = client.post("/mmp", json={"fan": "FLIP3"})
    assert r.status_code == 200
    steps = r.json()["steps"]
    assert [s["kind"] for s in steps] == ["flip", "mori_fiber", "fano"]
    assert steps[0]["stratum"] == [2, 3]


def test_cohom(client):
    r = client.post("/cohom", json={"fan": "P2", "k": [0, 0, 2]})
    assert r.status_code == 200
    assert r.json()["dims"] == [6, 0, 0]
    r = client.post("/cohom", json={"fan": "P2", "k": [0, 0, 2],
                                    "method": "cech"})
    assert r.json()["dims"] == [6, 0, 0]


def test_cohom_bad_length(client):
    r = client.post("/cohom", json={"fan": "P2", "k": [0, 0]})
    assert r.status_code == 422


def test_collection_and_verify_roundtrip(client):
    r = client.post("/collection", json={"fan": "F1"})
    assert r.status_code == 200
    body = r.json()
    assert len(body["collection"]["objects"]) == 4
    assert [s["kind"] for s in body["steps"]] == ["divisorial", "fano"]
    r2 = client.post("/verify", json={
        "fan": "F1", "collection": body["collection"],
    })
    assert r2.status_code == 200
    rep = r2.json()["report"]
    assert rep["violations"] == 0 and rep["unchecked"] == 0
    assert rep["complete"] is True


def test_pipeline(client):
    r = client.post("/pipeline", json={"fan": "P112"})
    assert r.status_code == 200
    body = r.json()
    assert len(body["collection"]["objects"]) == 4
    assert body["report"]["strong"] is True
    assert "violations: 0" in body["summary"]


def test_responses_are_canonical_json(client):
    r = client.post("/check-fan", json={"fan": "P2"})
    doc = json.loads(r.content)
    # keys sorted at every level
    def sorted_keys(x):
        if isinstance(x, dict):
            assert list(x) == sorted(x)
            for v in x.values():
                sorted_keys(v)
        elif isinstance(x, list):
            for v in x:
                sorted_keys(v)
    sorted_keys(doc)
