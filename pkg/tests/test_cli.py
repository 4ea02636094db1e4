"""Tests for the command-line front end: output formats, exit codes
and byte-identical determinism."""

import json

import pytest

from latticeforge import cli
from latticeforge import combine as cb
from latticeforge.numbers import QuadraticField
from latticeforge.quaternions import QuatAlgebra, quat_to_json
from latticeforge import hermitian as hm


CONSTS_CSV = (
    "alpha,r,R0,R_star,R1,rho1,R2,rho2,R3,rho3,R4,rho4,"
    "audit_samples,violations\n"
    "0.674741,0.4,1.016348,2.14575783116665,3.007349380202632,"
    "1.4017149177505164,5.56848811970393,0.6660078326016031,"
    "5.397414660757216,0.7773106471234108,5.56848811970393,"
    "0.6660078326016031,40000,0\n")


@pytest.fixture()
def consts_csv(tmp_path):
    p = tmp_path / "consts.csv"
    p.write_text(CONSTS_CSV)
    return str(p)


@pytest.fixture()
def scenario_json(tmp_path):
    p = tmp_path / "schottky.json"
    p.write_text(cb.make_schottky_scenario(steps=24).to_json())
    return str(p)


@pytest.fixture()
def broken_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text(cb.make_broken_scenario(steps=1).to_json())
    return str(p)


# -- constants ---------------------------------------------------------

def test_constants_single_point(tmp_path):
    out = tmp_path / "c.csv"
    code = cli.main(["constants", "--alpha", "0.7853981633974483",
                     "--r", "0.5", "--R0", "1",
                     "--samples", "200", "--audit", "500",
                     "--seed", "7", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].split(",") == list(cli.CONSTANTS_COLUMNS)
    row = dict(zip(cli.CONSTANTS_COLUMNS, lines[1].split(",")))
    assert float(row["rho4"]) == min(float(row["rho1"]),
                                     float(row["rho2"]),
                                     float(row["rho3"]))
    assert float(row["R4"]) == max(float(row["R2"]), float(row["R3"]))
    assert int(row["violations"]) == 0


def test_constants_deterministic(tmp_path):
    args = ["constants", "--alpha", "0.7853981633974483",
            "--r", "0.5", "--R0", "1",
            "--samples", "150", "--audit", "300", "--seed", "3"]
    o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(args + ["--out", str(o1)]) == 0
    assert cli.main(args + ["--out", str(o2)]) == 0
    assert o1.read_bytes() == o2.read_bytes()


def test_constants_grid_row_count(tmp_path):
    out = tmp_path / "c.csv"
    code = cli.main(["constants", "--alpha", "0.7853981633974483",
                     "--r", "0.2,0.5", "--R0", "1",
                     "--samples", "100", "--audit", "200",
                     "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 3


def test_constants_infeasible_point_flagged(tmp_path):
    # r far beyond the sampler's reachable subspace distances: the
    # search cannot converge, so the row is flagged and the run is
    # reported as partial
    out = tmp_path / "c.csv"
    code = cli.main(["constants", "--alpha", "0.7853981633974483",
                     "--r", "5.0", "--R0", "1",
                     "--samples", "100", "--audit", "200",
                     "--out", str(out)])
    assert code == 2
    assert "FAILED" in out.read_text().splitlines()[1]


# -- certify -----------------------------------------------------------

def test_certify_pass(tmp_path, scenario_json, consts_csv):
    out = tmp_path / "cert.json"
    code = cli.main(["certify", scenario_json, "--depth", "1",
                     "--faith-len", "4", "--constants", consts_csv,
                     "--out", str(out)])
    assert code == 0
    cert = json.loads(out.read_text())
    assert cert["status"] == "pass"
    assert cert["witness"] is None
    assert cert["min_separation"][0] >= cert["delta"]


def test_certify_broken_fails(tmp_path, broken_json, consts_csv):
    out = tmp_path / "cert.json"
    code = cli.main(["certify", broken_json, "--depth", "1",
                     "--faith-len", "4", "--constants", consts_csv,
                     "--out", str(out)])
    assert code == 1
    cert = json.loads(out.read_text())
    assert cert["status"] == "fail"
    assert cert["witness"] is not None


def test_certify_depth_zero_vacuous(tmp_path, scenario_json, consts_csv):
    out = tmp_path / "cert.json"
    code = cli.main(["certify", scenario_json, "--depth", "0",
                     "--faith-len", "2", "--constants", consts_csv,
                     "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["status"] == "pass"


def test_certify_budget_partial(tmp_path, scenario_json, consts_csv,
                                monkeypatch):
    monkeypatch.setenv("LATTICEFORGE_BUDGET", "1")
    out = tmp_path / "cert.json"
    code = cli.main(["certify", scenario_json, "--depth", "3",
                     "--faith-len", "2", "--constants", consts_csv,
                     "--out", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["status"] == "partial"


def test_certify_malformed_scenario(tmp_path, consts_csv, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"bad\": 1}")
    code = cli.main(["certify", str(bad), "--constants", consts_csv])
    assert code == 3
    assert "input error" in capsys.readouterr().err


def test_certify_missing_file(consts_csv):
    assert cli.main(["certify", "/nonexistent/path.json",
                     "--constants", consts_csv]) == 3


def test_certify_deterministic(tmp_path, scenario_json, consts_csv):
    o1, o2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["certify", scenario_json, "--depth", "1",
            "--faith-len", "4", "--constants", consts_csv]
    assert cli.main(args + ["--out", str(o1)]) == 0
    assert cli.main(args + ["--out", str(o2)]) == 0
    assert o1.read_bytes() == o2.read_bytes()


def test_load_constants_csv_rejects_garbage():
    with pytest.raises(cli.CliInputError):
        cli.load_constants_csv("nope\n1,2\n")


# -- quat --------------------------------------------------------------

def _quat_fixture_path(tmp_path, d=2):
    F = QuadraticField(d)
    A = QuatAlgebra(F, F(-1), F(-1))
    M = hm.SkewHermitianModule.diagonal(A, [A.i(), A.j(), A.k()])
    obj = {"module": M.to_json(),
           "p1": [quat_to_json(c) for c in M.basis_vector(0).coords],
           "p2": [quat_to_json(c) for c in M.basis_vector(1).coords]}
    p = tmp_path / "quat.json"
    p.write_text(json.dumps(obj))
    return str(p)


def test_quat_solver_pass(tmp_path):
    out = tmp_path / "out.json"
    code = cli.main(["quat", _quat_fixture_path(tmp_path),
                     "--out", str(out)])
    assert code == 0
    res = json.loads(out.read_text())
    assert res["status"] == "pass"
    assert all(res["orthogonality"].values())
    assert res["scaling_trace"]


def test_quat_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert cli.main(["quat", str(bad)]) == 3
    assert "input error" in capsys.readouterr().err


def test_quat_deterministic(tmp_path):
    src = _quat_fixture_path(tmp_path)
    o1, o2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["quat", src, "--out", str(o1)]) == 0
    assert cli.main(["quat", src, "--out", str(o2)]) == 0
    assert o1.read_bytes() == o2.read_bytes()


# -- witness -----------------------------------------------------------

def test_witness_table(tmp_path):
    out = tmp_path / "w.csv"
    code = cli.main(["witness", "--psi", "1,1", "--ns", "2,4,6,8",
                     "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,kernel_rank,h2_lower_bound"
    rows = [tuple(int(x) for x in ln.split(",")) for ln in lines[1:]]
    ranks = [r[1] for r in rows]
    assert all(hi > lo for lo, hi in zip(ranks, ranks[1:]))
    bounds = [r[2] for r in rows]
    assert bounds[-1] > 0
    assert all(hi >= lo for lo, hi in zip(bounds, bounds[1:]))


def test_witness_rejects_zero_psi(capsys):
    assert cli.main(["witness", "--psi", "0,0"]) == 3
    assert "input error" in capsys.readouterr().err


def test_witness_deterministic(tmp_path):
    o1, o2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(["witness", "--out", str(o1)]) == 0
    assert cli.main(["witness", "--out", str(o2)]) == 0
    assert o1.read_bytes() == o2.read_bytes()


# -- parser ------------------------------------------------------------

def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["unknown-subcommand"])
    assert exc.value.code == 3
