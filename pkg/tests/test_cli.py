import json
import math

import pytest

from planchlab.cli import main, parse_observable
from planchlab.identities import IdentityCaps, run_identity_suite


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_observable_names():
    assert parse_observable("pt4").canonical_text() == "pt4"
    assert parse_observable("p3").basis == "p"
    assert parse_observable("ps(2,1)").coeffs == {(2, 1): 1}
    assert parse_observable("fc4").basis == "fcum"
    with pytest.raises(ValueError):
        parse_observable("zz9")


def test_dump_profile_power_sum(capsys):
    code, out = run_cli(["identities", "--dump", "pt4"], capsys)
    assert code == 0
    assert out.strip() == "4*p3 + p1"


def test_structure_dump(capsys):
    code, out = run_cli(["identities", "--structure", "2", "2"], capsys)
    assert code == 0
    assert out.strip() == "(2,2):1 (3):4 (1,1):2"


def test_expect_value_and_poly(capsys):
    code, out = run_cli(["expect", "--name", "pt4", "--n", "2"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == "16"
    code, out = run_cli(["expect", "--name", "ps(1,1)", "--poly"], capsys)
    payload = json.loads(out)
    assert payload["falling_factorial_form"] == "n*(n-1)"
    assert payload["monomial_coefficients"] == ["0", "-1", "1"]


def test_sample_command_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    for out in (out1, out2):
        code, _ = run_cli(
            ["sample", "--n", "6", "--samples", "8", "--seed", "5", "--out", str(out)],
            capsys,
        )
        assert code == 0
    assert out1.read_text() == out2.read_text()
    records = [json.loads(line) for line in out1.read_text().strip().split("\n")]
    assert len(records) == 8
    assert all(sum(r["rows"]) == 6 for r in records)


def test_sample_n_one_rows(tmp_path, capsys):
    out = tmp_path / "ones.jsonl"
    run_cli(["sample", "--n", "1", "--samples", "5", "--seed", "3", "--out", str(out)], capsys)
    for line in out.read_text().strip().split("\n"):
        assert json.loads(line)["rows"] == [1]


def test_shape_command_columns(capsys):
    code, out = run_cli(
        ["shape", "--n", "1", "--seed", "2", "--grid", "11", "--extent", "2.5"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    config = json.loads(lines[0][len("# config: "):])
    assert config == {"kind": "shape", "n": 1, "seed": 2, "grid": 11, "extent": 2.5}
    assert lines[1] == "x,profile_scaled,limit_curve,residual_scaled,gaussian_overlay"
    table = {float(l.split(",")[0]): l.split(",") for l in lines[2:]}
    # limit curve hits 4/pi at the center and 2 at the seam
    assert abs(float(table[0.0][2]) - 4 / math.pi) < 1e-12
    assert float(table[2.0][2]) == 2.0
    assert float(table[-2.0][2]) == 2.0
    # a single box rescales to a peak of height 2 at the center
    assert float(table[0.0][1]) == 2.0
    # 17-significant-digit float formatting survives a round trip
    assert float(table[0.5][2]) == float(f"{float(table[0.5][2]):.17g}")


def test_clt_command_csv_exact_zero_rows(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, _ = run_cli(
        ["clt", "--variant", "transition", "--n", "64", "--samples", "25",
         "--seed", "10", "--format", "csv", "--out", str(out)],
        capsys,
    )
    assert code == 0
    lines = out.read_text().strip().split("\n")
    config = json.loads(lines[0][len("# config: "):])
    assert config["kind"] == "clt-transition" and config["n"] == 64
    rows = {l.split(",")[0]: l.split(",") for l in lines[2:]}
    assert float(rows["t1"][3]) == 0.0 and float(rows["t1"][4]) == 0.0
    assert float(rows["t2"][3]) == 0.0


def test_lln_command_json(capsys):
    code, out = run_cli(
        ["lln", "--n", "100", "--samples", "20", "--kmax", "4", "--seed", "8"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["kind"] == "lln"
    assert [r["k"] for r in payload["rows"]] == [2, 3, 4]


def test_biane_command(capsys):
    code, out = run_cli(["biane", "--rho", "2", "--steps", "5,9"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["config"]["rho"] == [2] and payload["sizes"] == [30, 90]


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 2}))
    code, out = run_cli(
        ["--config", str(cfg), "expect", "--name", "pt4"], capsys
    )
    assert json.loads(out)["config"]["n"] == 2
    # explicit flags beat the config file
    code, out = run_cli(
        ["--config", str(cfg), "expect", "--name", "pt4", "--n", "3"], capsys
    )
    assert json.loads(out)["config"]["n"] == 3


def test_identity_registry_reduced_caps():
    caps = IdentityCaps(
        lambda_cap=6, index_cap=5, small_lambda_cap=5, coordinate_cap=8,
        orthogonality_cap=5, expectation_rho_cap=3, expectation_n_cap=6,
        structure_cap=4, leading_kmax=3, marginal_cap=4,
    )
    results = run_identity_suite(caps)
    assert results and all(r.ok for r in results), [
        (r.name, r.detail) for r in results if not r.ok
    ]


def test_identities_cli_reduced(capsys):
    code, out = run_cli(
        ["identities", "--cap-boxes", "4", "--lambda-cap", "6", "--leading-kmax", "3"],
        capsys,
    )
    assert code == 0
    assert "checks passed" in out
    assert "FAIL" not in out
