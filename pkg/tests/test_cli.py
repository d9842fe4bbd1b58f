"""Command-line behaviour: exit codes, config precedence, file outputs."""

from __future__ import annotations

import json

import numpy as np
import pytest

from maxlinear.cli import main
from maxlinear.fileio import read_sample_csv, write_sample_csv


@pytest.fixture()
def sim_dir(tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--out", str(out), "--n", "10000", "--seed", "0"]) == 0
    return out


# ---------------------------------------------------------------------------
# exit code 0: full simulate -> learn round trips


def test_simulate_writes_expected_artifacts(sim_dir):
    assert (sim_dir / "sample.csv").exists()
    meta = json.loads((sim_dir / "model.json").read_text())
    assert meta["d"] == 10
    assert meta["n"] == 10_000
    assert meta["generations"] == [[10], [8, 9], [5, 6, 7], [1, 2, 3, 4]]
    x, names = read_sample_csv(sim_dir / "sample.csv")
    assert x.shape == (10_000, 10)
    assert names == [f"X{i}" for i in range(1, 11)]


def test_learn_from_data_happy_path(tmp_path, sim_dir):
    out = tmp_path / "learn"
    rc = main(
        ["learn", "--out", str(out), "--data", str(sim_dir / "sample.csv"), "--k", "100"]
    )
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["order"]["valid"] is True
    assert report["k"] == 100
    assert report["order"]["discovery"][0] == 10
    assert (out / "coefficients.csv").exists()
    assert (out / "model.dot").exists()


def test_learn_from_model_exact_mode(tmp_path, sim_dir):
    out = tmp_path / "learn"
    rc = main(["learn", "--out", str(out), "--model", str(sim_dir / "model.json")])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["mode"] == "exact-scalings"
    assert report["k"] is None
    assert report["order"]["generations"] == [[10], [8, 9], [5, 6, 7], [1, 2, 3, 4]]
    # exact scalings recover the generating coefficients
    got = np.asarray(report["coefficients_original_frame"])
    want = np.asarray(json.loads((sim_dir / "model.json").read_text())["coefficients"])
    np.testing.assert_allclose(got, want, atol=1e-6)


def test_study_exact_mode_and_sizes_parsing(tmp_path):
    out = tmp_path / "study"
    rc = main(
        [
            "study",
            "--out",
            str(out),
            "--sizes",
            "300,400",
            "--runs",
            "3",
            "--mode",
            "exact-scalings",
        ]
    )
    assert rc == 0
    lines = (out / "study.csv").read_text().strip().splitlines()
    assert lines[0] == "n,runs,valid,correct,ratio_percent"
    assert lines[1] == "300,3,3,3,100.00"
    assert lines[2] == "400,3,3,3,100.00"
    payload = json.loads((out / "study.json").read_text())
    assert payload["weights"] == "preset"
    assert payload["mode"] == "exact-scalings"


def test_transform_and_extremes_round_trip(tmp_path, sim_dir):
    trans = tmp_path / "trans.csv"
    rc = main(
        [
            "transform",
            "--data",
            str(sim_dir / "sample.csv"),
            "--out",
            str(trans),
            "--ops",
            "frechet",
        ]
    )
    assert rc == 0
    xt, _ = read_sample_csv(trans)
    assert xt.shape == (10_000, 10)
    assert np.all(xt > 0)

    ext = tmp_path / "extremes.csv"
    rc = main(
        [
            "extremes",
            "--data",
            str(sim_dir / "sample.csv"),
            "--out",
            str(ext),
            "--pairs",
            "1-2,9-10",
            "--count",
            "5",
        ]
    )
    assert rc == 0
    lines = ext.read_text().strip().splitlines()
    assert lines[0] == "i,j,source,xi,xj"
    assert len(lines) == 1 + 2 * 5


# ---------------------------------------------------------------------------
# exit code 2: validation errors


def test_missing_out_is_validation_error(tmp_path):
    assert main(["simulate", "--n", "10"]) == 2


def test_learn_with_both_sources_is_validation_error(tmp_path, sim_dir):
    rc = main(
        [
            "learn",
            "--out",
            str(tmp_path / "x"),
            "--data",
            str(sim_dir / "sample.csv"),
            "--model",
            str(sim_dir / "model.json"),
        ]
    )
    assert rc == 2


def test_learn_with_neither_source_is_validation_error(tmp_path):
    assert main(["learn", "--out", str(tmp_path / "x")]) == 2


def test_study_invalid_weights_via_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"weights": "bogus", "runs": 1, "sizes": "100"}))
    rc = main(
        ["study", "--out", str(tmp_path / "s"), "--config", str(cfg), "--mode", "exact-scalings"]
    )
    assert rc == 2


def test_argparse_rejects_unknown_choice(tmp_path):
    with pytest.raises(SystemExit):
        main(["study", "--out", str(tmp_path / "s"), "--weights", "bogus"])


# ---------------------------------------------------------------------------
# exit code 3: threshold / ordering failures


def test_all_zero_data_without_transform_is_threshold_error(tmp_path):
    data = tmp_path / "zeros.csv"
    write_sample_csv(np.zeros((50, 3)), data)
    rc = main(
        [
            "learn",
            "--out",
            str(tmp_path / "x"),
            "--data",
            str(data),
            "--k",
            "10",
            "--transform",
            "none",
        ]
    )
    assert rc == 3


def test_zero_tolerances_find_no_initial_node(tmp_path, sim_dir):
    rc = main(
        [
            "learn",
            "--out",
            str(tmp_path / "x"),
            "--data",
            str(sim_dir / "sample.csv"),
            "--k",
            "100",
            "--eps1",
            "0",
            "--eps2",
            "0",
        ]
    )
    assert rc == 3


# ---------------------------------------------------------------------------
# exit code 4: file and format errors


def test_malformed_config_json(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{nope")
    assert main(["simulate", "--out", str(tmp_path / "s"), "--config", str(cfg)]) == 4


def test_missing_config_file(tmp_path):
    missing = tmp_path / "absent.json"
    assert main(["simulate", "--out", str(tmp_path / "s"), "--config", str(missing)]) == 4


def test_config_must_be_object(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    assert main(["simulate", "--out", str(tmp_path / "s"), "--config", str(cfg)]) == 4


def test_bad_sample_csv(tmp_path):
    data = tmp_path / "bad.csv"
    data.write_text("a,b\n1.0,zzz\n")
    assert main(["learn", "--out", str(tmp_path / "x"), "--data", str(data)]) == 4


def test_missing_dag_file(tmp_path):
    rc = main(
        ["simulate", "--out", str(tmp_path / "s"), "--dag", str(tmp_path / "no.txt")]
    )
    assert rc == 4


# ---------------------------------------------------------------------------
# option precedence: flags > config file > defaults


def test_flag_overrides_config_overrides_default(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 50, "seed": 7}))
    # config only: n comes from the file
    out1 = tmp_path / "a"
    assert main(["simulate", "--out", str(out1), "--config", str(cfg)]) == 0
    x1, _ = read_sample_csv(out1 / "sample.csv")
    assert x1.shape == (50, 10)
    # flag beats config
    out2 = tmp_path / "b"
    assert (
        main(["simulate", "--out", str(out2), "--config", str(cfg), "--n", "20"]) == 0
    )
    x2, _ = read_sample_csv(out2 / "sample.csv")
    assert x2.shape == (20, 10)
    # seed still honoured from config: same seed, same leading rows
    np.testing.assert_array_equal(x1[:20], x2)


def test_simulate_outputs_are_byte_reproducible(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        assert main(["simulate", "--out", str(out), "--n", "500", "--seed", "11"]) == 0
    assert (a / "sample.csv").read_bytes() == (b / "sample.csv").read_bytes()
    assert (a / "model.json").read_bytes() == (b / "model.json").read_bytes()


def test_learn_reports_are_byte_reproducible(tmp_path, sim_dir):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for out in (a, b):
        rc = main(
            [
                "learn",
                "--out",
                str(out),
                "--data",
                str(sim_dir / "sample.csv"),
                "--k",
                "100",
            ]
        )
        assert rc == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "coefficients.csv").read_bytes() == (b / "coefficients.csv").read_bytes()
