"""CLI exit codes, file handling, artifact determinism across thread counts."""

import json
import os

import numpy as np
import pytest

import acstk
from acstk.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def j_b_path(workdir):
    mat = np.zeros((6, 6))
    mat[2, 0] = 1.0
    mat[0, 2] = -1.0
    mat[3, 1] = 1.0
    mat[1, 3] = -1.0
    mat[5, 4] = 1.0
    mat[4, 5] = -1.0
    return _write(workdir / "j_b.json", {"dim": 6, "matrix": mat.tolist()})


@pytest.fixture
def j_a_path(workdir):
    return _write(workdir / "j_a.json",
                  {"dim": 6, "matrix": acstk.j_std(6).mat.tolist()})


@pytest.fixture
def curve_path(workdir):
    e = np.zeros((6, 6))
    e[2, 0] = 1.0
    e[0, 2] = 1.0
    e[3, 1] = -1.0
    e[1, 3] = -1.0
    return _write(workdir / "curve.json", {
        "j0": acstk.j_std(6).mat.tolist(),
        "coeffs": [e.tolist()],
        "domain": [-0.9, 0.9],
    })


def test_no_command_is_usage(capsys):
    assert main([]) == 64
    assert main(["definitely-not-a-command"]) == 64
    capsys.readouterr()


def test_missing_required_flag_is_usage(capsys):
    assert main(["rank", "--algebra", "heis3xR3"]) == 64
    capsys.readouterr()


def test_rank_human_and_json(j_b_path, capsys):
    assert main(["rank", "--algebra", "heis3xR3", "--acs", j_b_path]) == 0
    out = capsys.readouterr().out
    assert "rank = 1" in out

    assert main(["rank", "--algebra", "heis3xR3", "--acs", j_b_path, "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["rank"] == 1
    assert body["config"]["op"] == "rank"
    assert "threads" not in body["config"]


def test_rank_missing_file_is_validation(capsys):
    assert main(["rank", "--algebra", "heis3xR3", "--acs", "nope.json"]) == 1
    assert "validation error" in capsys.readouterr().err


def test_rank_bad_acs_is_validation(workdir, capsys):
    bad = _write(workdir / "bad.json", {"dim": 6, "matrix": np.eye(6).tolist()})
    assert main(["rank", "--algebra", "heis3xR3", "--acs", bad]) == 1
    assert "J^2" in capsys.readouterr().err


def test_inline_algebra_document(workdir, j_b_path, capsys):
    alg = _write(workdir / "alg.json", {
        "name": "heis-copy", "dim": 6,
        "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
    })
    assert main(["rank", "--algebra", alg, "--acs", j_b_path, "--json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["rank"] == 1
    assert body["config"]["algebra"] == "heis-copy"


def test_curve_scan_csv(curve_path, workdir, capsys):
    csv_path = workdir / "profile.csv"
    code = main(["curve-scan", "--algebra", "heis3xR3", "--curve", curve_path,
                 "--grid", "101", "--csv", str(csv_path)])
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "t,rank,sigma_k"
    assert len(lines) == 102
    # row 51 is the grid point nearest 0 (linspace roundoff leaves ~1e-16):
    # the rank drops to 0 there
    t_mid, rank_mid, sigma_mid = lines[51].split(",")
    assert abs(float(t_mid)) <= 1e-14
    assert rank_mid == "0"
    assert float(sigma_mid) <= 1e-12
    out = capsys.readouterr().out
    assert "generic rank = 1" in out


def test_curve_scan_numerical_error(workdir, capsys):
    diag = np.diag([-1.0, 1.0, -1.0, 1.0, -1.0, 1.0])
    path = _write(workdir / "sing.json", {
        "j0": acstk.j_std(6).mat.tolist(),
        "coeffs": [diag.tolist()],
        "domain": [0.999999999999, 1.000000000001],
    })
    assert main(["curve-scan", "--algebra", "heis3xR3", "--curve", path,
                 "--grid", "3"]) == 2
    assert "numerical error" in capsys.readouterr().err


def test_curve_refine(curve_path, capsys):
    code = main(["curve-refine", "--algebra", "heis3xR3", "--curve", curve_path,
                 "--k", "1", "--interval", "-0.5", "0.5", "--json"])
    assert code == 0
    body = json.loads(capsys.readouterr().out)
    (lo, hi), = body["intervals"]
    assert lo <= 0.0 <= hi and hi - lo <= 1e-10


def test_perturb_writes_acs(j_a_path, workdir, capsys):
    out_path = workdir / "found.json"
    code = main(["perturb", "--algebra", "heis3xR3", "--acs", j_a_path,
                 "--target-rank", "1", "--eps", "1e-3", "--trials", "10",
                 "--seed", "42", "--out", str(out_path)])
    assert code == 0
    assert "found rank 1" in capsys.readouterr().out
    doc = json.loads(out_path.read_text())
    found = acstk.load_acs(doc)
    assert acstk.complex_rank(acstk.catalog("heis3xR3"), found) == 1


def test_perturb_exhausted_is_exit_3(j_a_path, capsys):
    code = main(["perturb", "--algebra", "abelian6", "--acs", j_a_path,
                 "--target-rank", "1", "--trials", "3"])
    assert code == 3
    assert "no structure of rank" in capsys.readouterr().out


def test_approx_writes_curve(j_a_path, workdir, capsys):
    e = np.zeros((6, 6))
    e[2, 0] = 1.0
    e[0, 2] = 1.0
    e[3, 1] = -1.0
    e[1, 3] = -1.0
    ts = np.linspace(0.0, 1.0, 17)
    samples = _write(workdir / "samples.json", {
        "samples": [{"t": float(t), "l": (0.5 * float(t) * e).tolist()} for t in ts],
    })
    out_path = workdir / "curve_out.json"
    code = main(["approx", "--j0", j_a_path, "--samples", samples,
                 "--degree", "4", "--out", str(out_path)])
    assert code == 0
    assert "degree 4" in capsys.readouterr().out
    curve = acstk.load_curve(json.loads(out_path.read_text()))
    assert curve.degree == 4


def test_invariants(j_b_path, capsys):
    assert main(["invariants", "--algebra", "heis3xR3", "--acs", j_b_path]) == 0
    out = capsys.readouterr().out
    assert "h1_ddc = 4" in out
    assert "b1 = 5" in out
    assert "rank = 1" in out


def test_patch_rank(workdir, capsys):
    mat = acstk.j_std(4).mat
    entries = [[repr(float(mat[k, i])) for i in range(4)] for k in range(4)]
    patch = _write(workdir / "patch.json",
                   {"dim": 4, "entries": entries, "box": [[-1.0, 1.0]] * 4})
    assert main(["patch-rank", "--patch", patch, "--per-axis", "2"]) == 0
    assert "min rank = 0" in capsys.readouterr().out


def test_catalog_listing(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    assert "heis3xR3" in out
    assert main(["catalog", "--name", "heis3xR3"]) == 0
    dumped = json.loads(capsys.readouterr().out)
    assert dumped["brackets"] == [{"i": 1, "j": 2, "k": 3, "c": 1.0}]
    assert main(["catalog", "--name", "bogus"]) == 1
    capsys.readouterr()


def test_validate_multiple(j_b_path, curve_path, capsys):
    assert main(["validate", "--algebra", "heis3xR3", "--acs", j_b_path,
                 "--curve", curve_path]) == 0
    assert "valid: algebra, acs, curve" in capsys.readouterr().out
    assert main(["validate"]) == 1
    capsys.readouterr()


def test_artifacts_identical_across_thread_counts(curve_path, workdir, capsys,
                                                  monkeypatch):
    outputs = {}
    for threads in ("1", "2"):
        monkeypatch.setenv("ACSTK_THREADS", threads)
        csv_path = workdir / f"profile_{threads}.csv"
        code = main(["curve-scan", "--algebra", "heis3xR3", "--curve", curve_path,
                     "--grid", "101", "--csv", str(csv_path), "--json"])
        assert code == 0
        outputs[threads] = (capsys.readouterr().out, csv_path.read_bytes())
    assert outputs["1"][0] == outputs["2"][0]
    assert outputs["1"][1] == outputs["2"][1]


def test_invalid_threads_env_is_validation(curve_path, capsys, monkeypatch):
    monkeypatch.setenv("ACSTK_THREADS", "banana")
    code = main(["curve-scan", "--algebra", "heis3xR3", "--curve", curve_path,
                 "--grid", "11"])
    assert code == 1
    assert "ACSTK_THREADS" in capsys.readouterr().err
