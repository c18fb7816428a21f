"""CLI behavior: exit codes, JSON output, CSV format, determinism."""

import json

from chebbias.cli import main


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_group_summary(capsys):
    code, data = run_json(capsys, ["group", "--spec", "catalog:Q8", "--json"])
    assert code == 0
    assert data["order"] == 8 and data["n_classes"] == 5


def test_group_trivial(capsys):
    code, data = run_json(capsys, ["group", "--spec", "cyclic:1", "--json"])
    assert code == 0 and data["order"] == 1


def test_group_malformed_json(capsys):
    code = main(["group", "--spec", '{"kind": "cyclic"'])
    assert code == 2


def test_check_p_d8(capsys):
    code, data = run_json(capsys, ["check", "P", "--d", "2", "--spec", "catalog:D8", "--json"])
    assert code == 0 and data["found"]
    assert data["witness"]["a"] == "g1" and data["witness"]["b"] == "g0^2"
    assert data["replay"] is True


def test_check_pplus_s4_and_s3(capsys):
    code, data = run_json(capsys, ["check", "Pplus", "--p", "2", "--spec", "catalog:S4", "--json"])
    assert code == 0 and data["found"]
    code, data = run_json(capsys, ["check", "Pplus", "--p", "2", "--spec", "catalog:S3", "--json"])
    assert code == 0 and not data["found"]


def test_classify_cayley(capsys):
    code, data = run_json(
        capsys,
        ["classify", "--cayley", "--spec", "catalog:Q8", "--c1", "g0", "--c2", "g1", "--json"],
    )
    assert code == 0 and data["case"] == "EqualCounting"


def test_classify_bias(capsys):
    spec = json.dumps(
        {
            "kind": "direct_product",
            "factors": [{"kind": "catalog", "name": "Q8"}, {"kind": "cyclic", "n": 4}],
        }
    )
    code, data = run_json(
        capsys,
        ["classify", "--cayley", "--spec", spec, "--c1", "g2^2", "--c2", "g0^2", "--json"],
    )
    assert code == 0 and data["case"] == "ExtremeBias" and data["d"] == 2


def test_construct(capsys):
    code, data = run_json(capsys, ["construct", "gplus-ab", "--p", "2", "--n", "1", "--m", "2", "--json"])
    assert code == 0 and data["gplus_order"] == 32 and data["witness_replay"]
    code, data = run_json(capsys, ["construct", "appendix", "--m", "2", "--json"])
    assert code == 0 and data["order"] == 32
    assert data["sigma1_has_no_square_root_in_subgroup"]
    assert data["sigma2_has_square_root_in_subgroup"]


def test_linnik(capsys):
    code, data = run_json(
        capsys,
        ["linnik", "--p", "2", "--spec", "catalog:D8", "--class-b", "g0^2",
         "--rd", "3.0", "--deg", "24", "--json"],
    )
    assert code == 0 and data["r"] == 1


def test_simulate_writes_csv(tmp_path, capsys):
    out = tmp_path / "series.csv"
    code, data = run_json(
        capsys,
        ["simulate", "--cayley-of", "catalog:Q8", "--c1", "g0", "--c2", "g1",
         "--xmax", "20000", "--seed", "3", "--out", str(out), "--json"],
    )
    assert code == 0
    assert data["verdict"] == "EqualCounting"
    lines = out.read_text().splitlines()
    assert lines[0] == "x,pi_t,theta_t_intweight,psi_t_intweight,pi_C1_weighted,pi_C2_weighted,predicted,ratio"
    assert all(line.split(",")[1] == "0" for line in lines[1:])


def test_simulate_deterministic(tmp_path, capsys):
    argv = ["simulate", "--cayley-of", "catalog:D8", "--c1", "g1", "--c2", "g0^2",
            "--xmax", "30000", "--seed", "5", "--json"]
    code1, data1 = run_json(capsys, argv)
    code2, data2 = run_json(capsys, argv)
    assert code1 == code2 == 0
    assert data1 == data2


def test_quartic_run(tmp_path, capsys):
    out = tmp_path / "quartic.csv"
    code, data = run_json(capsys, ["quartic", "--xmax", "50000", "--out", str(out), "--json"])
    assert code == 0
    assert data["skipped_ramified"] == 1
    assert data["ramified_primes"] == [283]
    assert data["verdict"] == "ExtremeBias" and data["d"] == 2
    assert out.exists()


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suite", "unknown"]) == 2


def test_verify_bounds(capsys):
    assert main(["verify", "--suite", "bounds", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert all(item["passed"] for item in data)


def test_simulate_rejects_unknown_config_fields(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"mode": "synthetic", "bogus": 1}))
    assert main(["simulate", "--config", str(cfg)]) == 2
