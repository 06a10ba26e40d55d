import json

from nicrobin.cli import main
from nicrobin.config import MOD4
from nicrobin.enumeration import ExceptionSet, verify_records


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_violator(capsys):
    code, out, _ = run(capsys, "check", "720")
    assert code == 0
    assert "violated" in out and "sum of two squares: True" in out


def test_check_satisfier_json(capsys):
    code, out, _ = run(capsys, "check", "5041", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["robin"] == "below" and data["robin_violator"] is False
    assert data["nicolas"] == "below"


def test_check_factored_expression_equivalence(capsys):
    code_a, out_a, _ = run(capsys, "check", "72", "--json")
    code_b, out_b, _ = run(capsys, "check", "2^3*3^2", "--json")
    assert code_a == code_b == 0
    assert json.loads(out_a) == json.loads(out_b)


def test_check_n_equals_one(capsys):
    code, out, _ = run(capsys, "check", "1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["nicolas_violator"] and data["robin_violator"]
    assert data["threshold"] is None


def test_check_unfactorable_exit_code(capsys):
    code, _, err = run(capsys, "check", str(1000000000039 * 1000000000061))
    assert code == 3
    assert "cannot factor" in err


def test_check_bad_expression_exit_code(capsys):
    code, _, err = run(capsys, "check", "4^2")
    assert code == 3


def test_unknown_config_exit_code(capsys):
    code, _, err = run(capsys, "check", "10", "--config", "nope")
    assert code == 2
    assert "config error" in err


def test_malformed_config_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"modulus": 4}')
    code, _, err = run(capsys, "check", "10", "--config", str(bad))
    assert code == 2


def test_custom_config_file_round_trip(tmp_path, capsys):
    path = tmp_path / "mod4.json"
    path.write_text(json.dumps(MOD4.snapshot()))
    code, out, _ = run(capsys, "check", "720", "--config", str(path), "--json")
    assert code == 0
    assert json.loads(out)["robin_violator"] is True


def test_xset_json(capsys):
    code, out, _ = run(capsys, "xset", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 29
    assert data["max_r_plus_2s"] == 18
    assert [8, 5] in data["pairs"]


def test_brute_json(capsys):
    code, out, _ = run(capsys, "brute", "--max", "100", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["values"][:5] == [1, 2, 4, 5, 8]


def test_crossvalidate_json(capsys):
    code, out, _ = run(capsys, "crossvalidate", "--max", "10000", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["agreement"] is True


def test_bounds_kbounds(capsys):
    code, out, _ = run(capsys, "bounds", "--kbounds", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["kbounds"] == {"bound_a": 7718, "bound_b": 9951, "max_k": 10000}
    assert data["pass"] is True


def test_bounds_requires_selection(capsys):
    code, _, err = run(capsys, "bounds")
    assert code == 2


def test_bounds_theta_window(capsys):
    code, out, _ = run(capsys, "bounds", "--theta", "--from", "45000", "--to", "60000",
                       "--step", "5000", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["theta"]["failures"] == []


def test_limsup(capsys):
    code, out, _ = run(capsys, "limsup", "-n", "100", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["points"][0]["witness_exponent"] == 8


def test_enumerate_output_and_manifest(tmp_path, capsys):
    out_path = tmp_path / "exceptions.jsonl"
    code, out, _ = run(
        capsys, "enumerate", "--output", str(out_path), "--json"
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["records"] == 347
    assert summary["largest"] == "52509581344222812810"

    manifest_path = tmp_path / "exceptions.jsonl.manifest.json"
    manifest = json.loads(manifest_path.read_text())
    assert manifest["record_count"] == 347
    assert manifest["digest"] == summary["digest"]
    assert manifest["tool_version"]

    # round trip: reload the serialized set and re-verify every record
    loaded = ExceptionSet.from_jsonl(out_path.read_text())
    assert len(loaded) == 347
    verify_records(loaded, MOD4)
    assert loaded.digest() == summary["digest"]


def test_enumerate_filters(tmp_path, capsys):
    code, out, _ = run(
        capsys, "enumerate", "--two-squares-only", "--robin-only",
        "--output", str(tmp_path / "r.jsonl"), "--json",
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["records"] == 15
    values = [
        json.loads(line)["n"]
        for line in (tmp_path / "r.jsonl").read_text().splitlines()
    ]
    assert values == [
        "1", "2", "4", "5", "8", "9", "10", "16", "18", "20",
        "36", "72", "180", "360", "720",
    ]
