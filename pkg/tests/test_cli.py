import json
import math

import pytest

from schatlab.cli import list_builtins, main, run_config
from schatlab.experiments import ConfigError, parse_config
from schatlab.ioutil import read_csv, read_json


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def constants_config(tmp_path, **overrides):
    doc = {
        "experiment": "constants",
        "spec": {"kind": "kp_bicentralizer", "phi": "s", "p": 2.0},
        "dims": [6],
        "p": 2.0,
        "q": 2.0,
        "kinds": ["L"],
        "seed": 42,
        "samples": 30,
        "output": str(tmp_path / "out"),
    }
    doc.update(overrides)
    return doc


# --- validation --------------------------------------------------------------


def test_validate_ok(tmp_path, capsys):
    path = write_config(tmp_path, constants_config(tmp_path))
    assert main(["validate", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] and len(out["config_hash"]) == 64


def test_validate_missing_seed(tmp_path, capsys):
    doc = constants_config(tmp_path)
    del doc["seed"]
    path = write_config(tmp_path, doc)
    assert main(["validate", str(path)]) == 2
    err = json.loads(capsys.readouterr().out)["error"]
    assert err["field"] == "seed"


def test_validate_descending_dims(tmp_path):
    doc = constants_config(tmp_path, dims=[8, 4])
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_validate_rejects_unknown_keys(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(constants_config(tmp_path, extra_field=1))


def test_validate_rejects_bad_index(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(constants_config(tmp_path, p=-2.0))


def test_validate_fixed_dim_spec_mismatch(tmp_path):
    doc = constants_config(tmp_path, spec={
        "kind": "right_multiplication",
        "g": {"rows": 4, "cols": 4, "re": [0.0] * 16, "im": [0.0] * 16},
    }, dims=[6])
    with pytest.raises(ConfigError):
        parse_config(doc)


# --- run + determinism -------------------------------------------------------


def test_run_writes_artifacts_and_is_byte_deterministic(tmp_path, capsys):
    path = write_config(tmp_path, constants_config(tmp_path))
    assert main(["run", str(path)]) == 0
    out_dir = tmp_path / "out"
    first = {name: (out_dir / name).read_bytes()
             for name in ("results.csv", "report.json", "manifest.json")}
    assert main(["run", str(path)]) == 0
    for name, blob in first.items():
        assert (out_dir / name).read_bytes() == blob

    manifest = read_json(out_dir / "manifest.json")
    assert manifest["version"]
    assert manifest["spec_hash"]
    assert manifest["artifacts"] == ["results.csv", "report.json"]
    report = read_json(out_dir / "report.json")
    assert report["config_hash"] == manifest["config_hash"]
    raw = (out_dir / "results.csv").read_text()
    assert raw.startswith(f"# config={manifest['config_hash']}\n")


def test_growth_csv_schema(tmp_path):
    doc = {
        "experiment": "growth",
        "spec": {"kind": "kp_bicentralizer", "phi": "s", "p": 2.0},
        "dims": [8, 16, 32],
        "p": 2.0,
        "q": 2.0,
        "kinds": ["L"],
        "seed": 7,
        "samples": 20,
        "output": str(tmp_path / "growth"),
    }
    cfg = parse_config(doc)
    out = run_config(cfg)
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[1] == "dim,kind,value,samples,seed"
    rows = read_csv(out / "results.csv")
    assert len(rows) == 3
    assert [r["dim"] for r in rows] == ["8", "16", "32"]


def test_growth_kp_seq_matches_closed_form(tmp_path):
    doc = {
        "experiment": "growth",
        "dims": [8, 64],
        "p": 2.0,
        "phi": "s",
        "kinds": ["kp_seq"],
        "seed": 7,
        "output": str(tmp_path / "seq"),
    }
    out = run_config(parse_config(doc))
    rows = read_csv(out / "results.csv")
    for row in rows:
        n = int(row["dim"])
        assert float(row["value"]) == pytest.approx(math.log(n) / 2.0, abs=1e-10)


def test_gamma_experiment(tmp_path):
    doc = {
        "experiment": "gamma",
        "operator": {"kind": "identity", "k": 2},
        "seed": 11,
        "samples": 20000,
        "output": str(tmp_path / "gamma"),
    }
    out = run_config(parse_config(doc))
    report = read_json(out / "report.json")
    rep = report["reports"][0]
    assert abs(rep["value"] - math.sqrt(2.0)) <= 3.0 * rep["stderr"]


def test_splitting_experiment_schema(tmp_path):
    doc = {
        "experiment": "splitting",
        "spec": {"kind": "kp_bicentralizer", "phi": "s", "p": 2.0},
        "dims": [4, 8],
        "p": 2.0,
        "q": 2.0,
        "seed": 3,
        "samples": 16,
        "output": str(tmp_path / "split"),
    }
    out = run_config(parse_config(doc))
    rows = read_csv(out / "results.csv")
    assert set(rows[0]) == {"dim", "residual", "seed", "spec-hash"}
    assert len(rows) == 2


def test_modulus_experiment(tmp_path):
    doc = {
        "experiment": "modulus",
        "spec": {"kind": "sum", "terms": []},
        "dims": [4],
        "p": 2.0,
        "q": 2.0,
        "seed": 3,
        "samples": 40,
        "output": str(tmp_path / "mod"),
    }
    out = run_config(parse_config(doc))
    rows = read_csv(out / "results.csv")
    assert float(rows[0]["value"]) <= 1.0 + 1e-10


def test_distance_experiment(tmp_path):
    spec = {"kind": "kp_bicentralizer", "phi": "s", "p": 2.0}
    doc = {
        "experiment": "distance",
        "spec": spec,
        "spec2": spec,
        "dims": [5],
        "seed": 3,
        "samples": 10,
        "output": str(tmp_path / "dist"),
    }
    out = run_config(parse_config(doc))
    rows = read_csv(out / "results.csv")
    assert float(rows[0]["value"]) == 0.0


# --- replay ------------------------------------------------------------------


def test_replay_round_trip(tmp_path, capsys):
    path = write_config(tmp_path, constants_config(tmp_path))
    assert main(["run", str(path)]) == 0
    capsys.readouterr()
    assert main(["replay", str(tmp_path / "out" / "report.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] and out["delta"] <= 1e-12


def test_tolerance_overrides_validated_and_applied(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(constants_config(tmp_path, tolerances={"nope": 1e-9}))
    with pytest.raises(ConfigError):
        parse_config(constants_config(tmp_path, tolerances={"zero_rtol": -1.0}))
    from schatlab.experiments import _tol

    cfg = parse_config(constants_config(tmp_path,
                                        tolerances={"zero_rtol": 1e-6}))
    tol = _tol(cfg)
    assert tol.zero_rtol == 1e-6
    assert tol.slack_atol == 1e-8  # untouched defaults survive


def test_spec_by_file_path(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(
        {"kind": "kp_bicentralizer", "phi": "s", "p": 2.0}))
    doc = constants_config(tmp_path, spec=str(spec_path))
    cfg = parse_config(doc)
    out = run_config(cfg)
    assert (out / "results.csv").exists()
    bad = constants_config(tmp_path, spec=str(tmp_path / "missing.json"))
    with pytest.raises(ConfigError):
        parse_config(bad)


def test_gamma_matrix_operator_fixture(tmp_path):
    from schatlab.matcore import mat_to_json
    import numpy as np

    m = np.diag([1.0, 2.0]).astype(complex)
    doc = {
        "experiment": "gamma",
        "operator": {"kind": "matrix", "value": mat_to_json(m)},
        "seed": 5,
        "samples": 20000,
        "output": str(tmp_path / "gmat"),
    }
    out = run_config(parse_config(doc))
    rep = read_json(out / "report.json")["reports"][0]
    # Euclidean target: the exact value is the Frobenius norm sqrt(5)
    assert abs(rep["value"] - math.sqrt(5.0)) <= 3.0 * rep["stderr"]


def test_run_reports_numeric_failure(tmp_path, capsys, monkeypatch):
    import schatlab.cli as cli
    from schatlab.matcore import NumericError

    def boom(cfg):
        raise NumericError("factorization failed",
                           diagnostics={"sample_index": 3, "seed": 42})

    monkeypatch.setattr(cli, "run_experiment", boom)
    path = write_config(tmp_path, constants_config(tmp_path))
    assert main(["run", str(path)]) == 3
    err = json.loads(capsys.readouterr().out)["error"]
    assert err["type"] == "numeric"
    assert err["diagnostics"]["sample_index"] == 3


def test_replay_bad_index(tmp_path, capsys):
    path = write_config(tmp_path, constants_config(tmp_path))
    main(["run", str(path)])
    capsys.readouterr()
    assert main(["replay", str(tmp_path / "out" / "report.json"),
                 "--index", "5"]) == 2


# --- flags, env, listing -----------------------------------------------------


def test_flag_overrides(tmp_path, capsys):
    path = write_config(tmp_path, constants_config(tmp_path))
    override = tmp_path / "elsewhere"
    assert main(["run", str(path), "--output", str(override),
                 "--samples", "10", "--seed", "43"]) == 0
    rows = read_csv(override / "results.csv")
    assert rows[0]["samples"] == "10"
    assert rows[0]["seed"] == "43"


def test_env_default_output(tmp_path, monkeypatch):
    monkeypatch.setenv("SCHATLAB_OUT", str(tmp_path / "envout"))
    doc = constants_config(tmp_path)
    doc["output"] = ""
    cfg = parse_config(doc)
    out = run_config(cfg)
    assert out == tmp_path / "envout" / "constants"
    assert (out / "results.csv").exists()


def test_list_builtins_mentions_operations(capsys):
    text = list_builtins()
    for token in ("kp_bicentralizer", "lower_s", "gamma_summing_mc",
                  "holder_factor", "splitting_distance", "constants"):
        assert token in text
    assert main(["list"]) == 0
    assert "kp_bicentralizer" in capsys.readouterr().out
