"""HTTP layer: endpoint wiring, error status mapping, config echoes."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

import acstk
from acstk.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _j_b_doc():
    mat = np.zeros((6, 6))
    mat[2, 0] = 1.0
    mat[0, 2] = -1.0
    mat[3, 1] = 1.0
    mat[1, 3] = -1.0
    mat[5, 4] = 1.0
    mat[4, 5] = -1.0
    return {"dim": 6, "matrix": mat.tolist()}


def _te_curve_doc():
    e = np.zeros((6, 6))
    e[2, 0] = 1.0
    e[0, 2] = 1.0
    e[3, 1] = -1.0
    e[1, 3] = -1.0
    return {
        "j0": acstk.j_std(6).mat.tolist(),
        "coeffs": [e.tolist()],
        "domain": [-0.9, 0.9],
    }


def test_health(client):
    res = client.get("/health")
    assert res.status_code == 200
    assert res.json()["status"] == "ok"


def test_catalog_listing(client):
    res = client.get("/catalog")
    assert res.status_code == 200
    body = res.json()
    assert "heis3xR3" in body["names"]
    assert body["algebra"] is None

    res = client.get("/catalog/heis3xR3")
    assert res.status_code == 200
    body = res.json()
    assert body["algebra"]["dim"] == 6
    assert body["algebra"]["brackets"] == [{"i": 1, "j": 2, "k": 3, "c": 1.0}]

    res = client.get("/catalog/not-a-name")
    assert res.status_code == 422
    assert res.json()["error"] == "validation"


def test_validate_ok_and_empty(client):
    res = client.post("/validate", json={"algebra": "heis3xR3"})
    assert res.status_code == 200
    assert res.json() == {
        "valid": True, "checked": ["algebra"],
        "config": {"op": "validate", "checked": ["algebra"]},
    }
    res = client.post("/validate", json={})
    assert res.status_code == 422


def test_validate_sol_type_algebra_loads(client):
    doc = {
        "name": "sol3xR3",
        "dim": 6,
        "brackets": [
            {"i": 1, "j": 2, "k": 3, "c": 1.0},
            {"i": 1, "j": 3, "k": 2, "c": 1.0},
        ],
    }
    res = client.post("/validate", json={"algebra": doc})
    assert res.status_code == 200
    assert res.json()["valid"] is True


def test_validate_jacobi_violation_is_422(client):
    doc = {
        "dim": 6,
        "brackets": [
            {"i": 1, "j": 2, "k": 3, "c": 1.0},
            {"i": 1, "j": 3, "k": 1, "c": 1.0},
        ],
    }
    res = client.post("/validate", json={"algebra": doc})
    assert res.status_code == 422
    assert "Jacobi" in res.json()["detail"]


def test_rank_j_b(client):
    res = client.post("/rank", json={"algebra": "heis3xR3", "acs": _j_b_doc()})
    assert res.status_code == 200
    body = res.json()
    assert body["rank"] == 1
    assert body["g"]["im"][0][0] == pytest.approx(-0.5, abs=1e-14)
    assert body["config"]["op"] == "rank"
    assert body["config"]["algebra"] == "heis3xR3"
    assert "threads" not in body["config"]


def test_rank_bad_acs_is_422(client):
    res = client.post("/rank", json={
        "algebra": "heis3xR3",
        "acs": {"dim": 6, "matrix": np.eye(6).tolist()},
    })
    assert res.status_code == 422
    assert res.json()["error"] == "validation"


def test_curve_scan(client):
    res = client.post("/curve/scan", json={
        "algebra": "heis3xR3", "curve": _te_curve_doc(), "grid": 101,
    })
    assert res.status_code == 200
    body = res.json()
    assert body["generic_rank"] == 1
    assert body["flagged"] == [50]
    assert body["skipped"] == []
    assert body["semicontinuity_ok"] is True
    assert len(body["ts"]) == 101
    assert body["ranks"][50] == 0
    assert body["sigma_k"][50] <= 1e-12


def test_curve_refine(client):
    res = client.post("/curve/refine", json={
        "algebra": "heis3xR3", "curve": _te_curve_doc(),
        "k": 1, "interval": [-0.5, 0.5],
    })
    assert res.status_code == 200
    body = res.json()
    assert body["diagnostic"] is None
    (lo, hi), = body["intervals"]
    assert lo <= 0.0 <= hi
    assert hi - lo <= 1e-10


def test_curve_refine_bad_interval_is_422(client):
    res = client.post("/curve/refine", json={
        "algebra": "heis3xR3", "curve": _te_curve_doc(),
        "k": 1, "interval": [-5.0, 5.0],
    })
    assert res.status_code == 422


def test_perturb_found_and_exhausted(client):
    j_a_doc = {"dim": 6, "matrix": acstk.j_std(6).mat.tolist()}
    res = client.post("/perturb", json={
        "algebra": "heis3xR3", "acs": j_a_doc,
        "target_rank": 1, "eps": 1e-3, "trials": 10, "seed": 42,
    })
    assert res.status_code == 200
    body = res.json()
    assert body["found"] is True
    assert body["rank"] == 1
    assert body["distance"] <= 1e-3
    assert body["acs"]["dim"] == 6

    res = client.post("/perturb", json={
        "algebra": "abelian6", "acs": j_a_doc,
        "target_rank": 1, "eps": 1e-3, "trials": 3, "seed": 0,
    })
    assert res.status_code == 200
    body = res.json()
    assert body["found"] is False
    assert body["trials_run"] == 3
    assert body["acs"] is None


def test_approx(client):
    e = np.zeros((6, 6))
    e[2, 0] = 1.0
    e[0, 2] = 1.0
    e[3, 1] = -1.0
    e[1, 3] = -1.0
    ts = np.linspace(0.0, 1.0, 17)
    samples = [{"t": float(t), "l": (0.5 * float(t) * e).tolist()} for t in ts]
    res = client.post("/approx", json={
        "j0": {"dim": 6, "matrix": acstk.j_std(6).mat.tolist()},
        "samples": samples, "degree": 4,
    })
    assert res.status_code == 200
    body = res.json()
    assert body["report"]["degree"] == 4
    assert body["report"]["sup_error"] <= 1e-15
    assert body["report"]["endpoint_error_0"] == 0.0
    assert len(body["curve"]["coeffs"]) == 4


def test_approx_bad_samples_is_422(client):
    res = client.post("/approx", json={
        "j0": {"dim": 6, "matrix": acstk.j_std(6).mat.tolist()},
        "samples": [{"t": 0.0, "l": np.zeros((6, 6)).tolist()}],
        "degree": 4,
    })
    assert res.status_code == 422


def test_invariants(client):
    res = client.post("/invariants", json={"algebra": "heis3xR3", "acs": _j_b_doc()})
    assert res.status_code == 200
    body = res.json()
    assert body["h1_ddc"] == 4
    assert body["b1"] == 5
    assert body["rank"] == 1
    assert body["method_a"] == body["method_b"] == 4


def test_patch_rank(client):
    mat = acstk.j_std(4).mat
    entries = [[repr(float(mat[k, i])) for i in range(4)] for k in range(4)]
    res = client.post("/patch/rank", json={
        "patch": {"dim": 4, "entries": entries, "box": [[-1.0, 1.0]] * 4},
        "per_axis": 2,
    })
    assert res.status_code == 200
    body = res.json()
    assert body["k_min"] == 0
    assert body["points"] == 16
    assert body["argmin_index"] == [0, 0, 0, 0]


def test_patch_rank_bad_entry_is_422(client):
    entries = [["0.0"] * 4 for _ in range(4)]
    entries[0][0] = "x1 +"
    res = client.post("/patch/rank", json={
        "patch": {"dim": 4, "entries": entries, "box": [[-1.0, 1.0]] * 4},
        "per_axis": 2,
    })
    assert res.status_code == 422
    assert "entry (1, 1)" in res.json()["detail"]


def test_recover_outside_chart_is_409():
    # NumericalError surfaces as 409 through the exception handler; the
    # rank endpoint cannot trigger it easily, so drive the handler via a
    # curve whose evaluation leaves the chart everywhere.
    client = TestClient(create_app())
    # L(t) = t * diag(-1, 1, ...) is singular at t = 1 only; a grid of 2
    # points hits t = 1 exactly, the other endpoint survives, so no error.
    # Use a domain collapsed around the singular point instead.
    diag = np.diag([-1.0, 1.0, -1.0, 1.0, -1.0, 1.0])
    res = client.post("/curve/scan", json={
        "algebra": "heis3xR3",
        "curve": {
            "j0": acstk.j_std(6).mat.tolist(),
            "coeffs": [diag.tolist()],
            "domain": [0.999999999999, 1.000000000001],
        },
        "grid": 3,
    })
    assert res.status_code == 409
    assert res.json()["error"] == "numerical"


def test_unknown_field_rejected(client):
    res = client.post("/rank", json={
        "algebra": "heis3xR3", "acs": _j_b_doc(), "bogus": 1,
    })
    assert res.status_code == 422
