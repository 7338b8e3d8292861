"""Command line interface: config round trips, CSV formats, determinism,
fault injection and input validation."""

import os

import pytest

from asymtransport import cli
from asymtransport.cli import ExperimentSpec, main

DATA = os.path.join(os.path.dirname(__file__), "data")


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_spec_config_round_trip(tmp_path):
    spec = ExperimentSpec(command="current", formula="q-product", q=0.77,
                          k=1.25, t=2.5, window=24, bernoulli=0.4,
                          replicas=321, seed=9, workers=3, out="x.csv")
    path = tmp_path / "run.cfg"
    spec.save(path)
    back = ExperimentSpec.load(path, "current")
    assert back == spec


def test_config_as_defaults(tmp_path):
    path = tmp_path / "run.cfg"
    ExperimentSpec(command="rate", model="asip", q=0.9, points=3,
                   x_max=1.0).save(path)
    out = tmp_path / "rate.csv"
    code = main(["rate", "--config", str(path), "--out", str(out)])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert lines[0] == "x,I(x)"
    assert len(lines) == 3 + 1 + 2
    assert lines[-2] == "sup,inf,limit"


def test_verify_suites_pass(tmp_path):
    out = tmp_path / "rep.txt"
    code = main(["verify", "--suite", "all", "--q", "0.8", "--k", "0.5",
                 "--out", str(out)])
    text = _read(out).decode()
    assert code == 0
    assert "result: pass" in text
    assert "FAIL" not in text


def test_verify_fault_injection_fails(tmp_path):
    out = tmp_path / "rep.txt"
    code = main(["verify", "--suite", "duality", "--q", "0.8", "--k", "0.5",
                 "--perturb-q", "0.01", "--out", str(out)])
    text = _read(out).decode()
    assert code == 1
    assert "result: FAIL" in text
    assert "self-duality" in text


def test_simulate_matches_golden_file(tmp_path):
    out = tmp_path / "sim.csv"
    code = main(["simulate", "--model", "asip", "--L", "4", "--n", "3",
                 "--q", "0.8", "--k", "0.5", "--t", "1", "--replicas", "5",
                 "--seed", "42", "--out", str(out)])
    assert code == 0
    assert _read(out) == _read(os.path.join(DATA, "simulate_golden.csv"))


def test_simulate_deterministic_across_runs(tmp_path):
    args = ["simulate", "--model", "sip", "--L", "3", "--n", "2",
            "--k", "0.75", "--t", "0.5", "--replicas", "4", "--seed", "7"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert _read(a) == _read(b)


def test_simulate_explicit_init(tmp_path):
    out = tmp_path / "sim.csv"
    code = main(["simulate", "--model", "asip", "--init", "2,0,1",
                 "--q", "0.7", "--k", "0.5", "--t", "0.3", "--replicas", "2",
                 "--seed", "1", "--out", str(out)])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert lines[0] == "replica,time,edge,direction"
    for line in lines[1:]:
        r, t, e, d = line.split(",")
        assert 0 <= int(r) < 2
        assert 0.0 < float(t) <= 0.3
        assert int(e) in (1, 2)
        assert int(d) in (-1, 1)


def test_current_worker_count_invariance(tmp_path):
    base = ["current", "--formula", "q-product", "--q", "0.8", "--k", "0.5",
            "--t", "0.5", "--window", "16", "--bernoulli", "0.5",
            "--replicas", "60", "--seed", "11"]
    a, b = tmp_path / "w1.csv", tmp_path / "w4.csv"
    main(base + ["--workers", "1", "--out", str(a)])
    main(base + ["--workers", "4", "--out", str(b)])
    assert _read(a) == _read(b)
    lines = _read(a).decode().splitlines()
    assert lines[0] == "formula,param_hash,theory,mc,se,z"
    row = lines[1].split(",")
    assert row[0] == "q-product"
    assert abs(float(row[5])) < 4.0


def test_current_step_formula(tmp_path):
    out = tmp_path / "cur.csv"
    code = main(["current", "--formula", "q-step", "--q", "0.8", "--k", "0.5",
                 "--t", "0.4", "--window", "12", "--replicas", "80",
                 "--seed", "5", "--out", str(out)])
    assert code == 0
    row = _read(out).decode().splitlines()[1].split(",")
    assert abs(float(row[5])) < 4.0


def test_current_energy_product_no_mc(tmp_path):
    out = tmp_path / "cur.csv"
    code = main(["current", "--formula", "energy-product", "--sigma", "0.5",
                 "--k", "0.5", "--t", "0.8", "--energy", "1.0",
                 "--seed", "3", "--out", str(out)])
    assert code == 0
    row = _read(out).decode().splitlines()[1].split(",")
    assert float(row[4]) == 0.0
    assert abs(float(row[5])) < 1e-10


def test_rate_csv_shape(tmp_path):
    out = tmp_path / "rate.csv"
    code = main(["rate", "--model", "sip", "--k", "0.5", "--sigma", "1.0",
                 "--energy", "0.5", "--points", "5", "--x-max", "2.0",
                 "--out", str(out)])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert lines[0] == "x,I(x)"
    assert len(lines) == 5 + 1 + 2
    sup, inf, limit = map(float, lines[-1].split(","))
    assert sup == limit
    assert inf == 0.0


def test_thermalize_qbetabinom(tmp_path):
    out = tmp_path / "th.csv"
    code = main(["thermalize", "--sampler", "qbetabinom", "--n", "4",
                 "--q", "0.7", "--k", "0.5", "--samples", "2000",
                 "--seed", "2", "--out", str(out)])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert lines[0] == "bin,empirical,exact"
    assert len(lines) == 1 + 5
    total = sum(float(line.split(",")[2]) for line in lines[1:])
    assert total == pytest.approx(1.0, abs=1e-12)


def test_thermalize_kmp_bins(tmp_path):
    out = tmp_path / "th.csv"
    code = main(["thermalize", "--sampler", "kmp", "--energy", "1.0",
                 "--bins", "10", "--samples", "1000", "--seed", "4",
                 "--out", str(out)])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert len(lines) == 1 + 10
    for line in lines[1:]:
        _, emp, exact = map(float, line.split(","))
        assert exact == pytest.approx(0.1, abs=1e-8)
        assert 0.0 <= emp <= 1.0


def test_empty_grid_rejected():
    with pytest.raises(SystemExit):
        main(["rate", "--model", "asip", "--q", "0.8", "--k", "0.5",
              "--points", "0"])


def test_nonpositive_horizon_rejected():
    with pytest.raises(SystemExit):
        main(["simulate", "--model", "asip", "--q", "0.8", "--k", "0.5",
              "--t", "0", "--seed", "1"])


def test_seed_required_for_stochastic_commands():
    for argv in (["simulate", "--model", "asip", "--t", "1"],
                 ["current", "--formula", "q-step", "--t", "1"],
                 ["thermalize", "--sampler", "kmp"]):
        with pytest.raises(SystemExit):
            main(argv)


def test_init_length_mismatch_rejected():
    with pytest.raises(SystemExit):
        main(["simulate", "--model", "asip", "--L", "5", "--init", "1,1",
              "--t", "1", "--seed", "1"])


def test_unknown_sampler_rejected():
    with pytest.raises(SystemExit):
        cli.cmd_thermalize(ExperimentSpec(command="thermalize",
                                          sampler="nope", seed=1))
