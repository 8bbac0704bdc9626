import pytest
from fastapi.testclient import TestClient

from ceopt.service import create_app
from tests.conftest import CHICKEN_DOC, PD_DOC, SCG2_DOC


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_solve_chicken(client):
    resp = client.post("/solve", json={"game": CHICKEN_DOC, "concept": "ce"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["value"] == pytest.approx(10.5, abs=1e-9)
    assert body["report"]["support_size"] == 3
    assert {tuple(e["profile"]) for e in body["support"]} == {(0, 0), (0, 1), (1, 0)}
    assert "counts" not in body["support"][0]


def test_solve_scg_symmetric_returns_counts(client):
    resp = client.post(
        "/solve",
        json={
            "game": SCG2_DOC,
            "concept": "cce",
            "options": {"oracle": "scg-symmetric"},
        },
    )
    assert resp.status_code == 200
    entry = resp.json()["support"][0]
    assert "counts" in entry and "profile" not in entry


def test_verify_roundtrip(client):
    solution = client.post("/solve", json={"game": PD_DOC, "concept": "ce"}).json()
    resp = client.post("/verify", json={"game": PD_DOC, "solution": solution})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] is True
    assert body["min_ce_constraint"] >= -1e-7
    assert body["expected_utilities"] == [1.0, 1.0]


def test_verify_flags_bad_solution(client):
    fake = {"concept": "ce", "support": [{"profile": [0, 0], "p": 1.0}]}
    body = client.post("/verify", json={"game": PD_DOC, "solution": fake}).json()
    assert body["ok"] is False


def test_poa(client):
    resp = client.post("/poa", json={"game": PD_DOC, "concept": "ce"})
    assert resp.status_code == 200
    assert resp.json()["ratio"] == pytest.approx(3.0, abs=1e-6)


def test_poa_undefined_ratio(client):
    zero = {
        "type": "normal_form",
        "players": 1,
        "actions": [1],
        "utilities": [[0.0]],
    }
    resp = client.post("/poa", json={"game": zero, "concept": "ce"})
    assert resp.status_code == 409
    assert resp.json()["error_kind"] == "undefined-ratio"


def test_parse_error(client):
    bad = {"type": "normal_form", "players": 2, "actions": [2, 2], "utilities": [[0, 0]]}
    resp = client.post("/solve", json={"game": bad, "concept": "ce"})
    assert resp.status_code == 400
    assert resp.json()["error_kind"] == "parse-error"


def test_schema_validation_is_422(client):
    resp = client.post("/solve", json={"game": PD_DOC, "concept": "nash"})
    assert resp.status_code == 422


def test_unsupported_structure(client):
    resp = client.post(
        "/solve",
        json={"game": PD_DOC, "concept": "ce", "options": {"oracle": "tree"}},
    )
    assert resp.status_code == 400
    assert resp.json()["error_kind"] == "unsupported-structure"


def test_resource_limit(client):
    resp = client.post(
        "/solve",
        json={
            "game": CHICKEN_DOC,
            "concept": "ce",
            "options": {"method": "full", "profile_cap": 2},
        },
    )
    assert resp.status_code == 413
    assert resp.json()["error_kind"] == "resource-limit"


def test_nonconvergence(client):
    resp = client.post(
        "/solve",
        json={"game": CHICKEN_DOC, "concept": "ce", "options": {"max_iterations": 1}},
    )
    assert resp.status_code == 409
    assert resp.json()["error_kind"] == "nonconvergence"


def test_generate_deterministic(client):
    req = {"kind": "tree-polymatrix", "seed": 7, "players": 4, "actions": 2}
    a = client.post("/generate", json=req).json()
    b = client.post("/generate", json=req).json()
    assert a == b
    assert a["type"] == "polymatrix"
    assert len(a["edges"]) == 3
    assert "utilities" not in a


def test_generated_game_solves(client):
    game = client.post(
        "/generate", json={"kind": "normal-form", "seed": 3, "players": 2, "actions": 2}
    ).json()
    resp = client.post("/solve", json={"game": game, "concept": "cce"})
    assert resp.status_code == 200
