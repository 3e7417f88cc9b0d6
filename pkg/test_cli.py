"""Tests for the spatialvar command line."""
import json

import numpy as np
import pytest

from spatialvar.cli import RunConfig, build_parser, main, run


def _field(write_csv, values, name="field.csv"):
    return str(write_csv(name, ["site_id", "value"], list(enumerate(values))))


def test_stirling_entry(capsys):
    assert main(["stirling", "--l", "4", "--m", "2"]) == 0
    assert capsys.readouterr().out == "l,m,value\n4,2,7\n"


def test_stirling_row(capsys):
    assert main(["stirling", "--l", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert [line.split(",")[2] for line in lines[1:]] == ["1", "7", "6", "1"]


def test_epoch_large_n_variance(capsys, write_csv):
    path = _field(write_csv, np.tile([1.0, -1.0], 50))
    assert main(["variance", "--mode", "epoch-large-n", "--alpha", "0.5", "--field", path]) == 0
    assert capsys.readouterr().out == "method,value,negative\nepoch-large-n,0.01,false\n"


@pytest.mark.parametrize("mode", ["second-order", "uniform-second-order", "large-n",
                                  "alpha-one", "alpha-near-one", "epoch"])
def test_every_variance_mode_runs(mode, capsys, write_csv):
    path = _field(write_csv, [1.0, 2.5, 0.5, 3.0, 2.0])
    assert main(["variance", "--mode", mode, "--alpha", "0.7", "--field", path]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[1].startswith(mode + ",")


def test_moments_from_moment_files(capsys, write_csv):
    mu = write_csv("mu.csv", ["site_id", "mu"], [(0, 0.0), (1, 0.0)])
    second = write_csv("m.csv", ["i", "j", "value"], [(0, 0, 1.0), (1, 1, 1.0)])
    code = main(["moments", "--alpha", "0.5", "--mu", str(mu), "--second", str(second),
                 "--format", "jsonlines"])
    assert code == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert rows[0] == {"moment": "es1", "value": 0.5}
    assert len(rows) == 10


def test_check(capsys):
    assert main(["check", "--alpha", "0.3", "--n", "100"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header == "alpha,ratio_margin,hoeffding_tail,sd_distance,verdict"
    assert row.endswith(",likely")


def test_simulate(capsys, write_csv):
    path = _field(write_csv, [1.0, 2.0, 3.0, 4.0])
    assert main(["simulate", "--field", path, "--alpha", "0.6", "--members", "500",
                 "--seed", "3"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.split(",")[:2] == ["mean_of_means", "ensemble_variance"]
    assert row.split(",")[2] == "500"


def test_sweep_rows(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--alphas", "0.1:0.9:0.1", "--ns", "10,30,100,300",
                 "--members", "2000", "--seed", "42", "--out", str(out), "--quiet"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 36
    assert lines[0].startswith("alpha,n,mc_variance,formula_variance,relative_error,flag_gt_0.1")


def test_sweep_is_byte_identical_across_worker_counts(tmp_path):
    paths = []
    for workers in ("1", "2"):
        out = tmp_path / f"sweep_{workers}.csv"
        assert main(["sweep", "--alphas", "0.3,0.8", "--ns", "20,200", "--members", "3000",
                     "--seed", "7", "--workers", workers, "--out", str(out), "-q"]) == 0
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_corrections_table(capsys):
    assert main(["corrections", "--alphas", "0.5,1", "--ns", "10,100"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5
    assert lines[1].startswith("0.5,10,-0.1,")


def test_synth_then_ingest(tmp_path, capsys):
    out = tmp_path / "synthetic.csv"
    assert main(["synth", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 358
    assert main(["variance", "--mode", "epoch", "--alpha", "0.5", "--field", str(out)]) == 0


def test_domain_error_exit_code(capsys, write_csv):
    path = _field(write_csv, [1.0, 2.0])
    assert main(["variance", "--mode", "epoch", "--alpha", "1.5", "--field", path]) == 2
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert err.startswith("error=domain reason=alpha-out-of-range message=")


def test_input_error_exit_codes(capsys, tmp_path, write_csv):
    assert main(["simulate", "--field", str(tmp_path / "none.csv"), "--alpha", "0.5"]) == 1
    assert "error=input reason=io-error" in capsys.readouterr().err
    bad = _field(write_csv, ["1.0", "NaN"], "bad.csv")
    assert main(["variance", "--mode", "epoch", "--alpha", "0.5", "--field", bad]) == 1
    assert "reason=non-finite-value" in capsys.readouterr().err
    assert main(["frobnicate"]) == 1
    assert "reason=usage" in capsys.readouterr().err
    assert main(["sweep", "--alphas", "0.5,0.4", "--ns", "10"]) == 1


def test_single_site_epoch_is_a_domain_error(capsys, write_csv):
    path = _field(write_csv, [2.0])
    assert main(["variance", "--mode", "epoch", "--alpha", "0.5", "--field", path]) == 2
    assert "reason=single-site" in capsys.readouterr().err


def test_run_config_from_parser():
    args = build_parser().parse_args(["sweep", "--alphas", "0.2:0.4:0.1", "--ns", "5,6"])
    config = RunConfig.from_args(args)
    assert config.alphas == (0.2, 0.3, 0.4)
    assert config.ns == (5, 6)
    assert config.fmt == "csv" and config.out is None


def test_run_returns_status(capsys):
    assert run(RunConfig(command="stirling", l=3, m=2)) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "3,2,3"
    assert run(RunConfig(command="stirling", l=40, m=2)) == 2
