import json
import math
from pathlib import Path

import numpy as np
import pytest

from qwalk.cli import main


def read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def test_simulate_interface_outputs(tmp_path):
    code = main([
        "simulate", "--scenario", "interface",
        "--theta-minus", "-0.7853981634", "--theta-plus", "0.7853981634",
        "--sigma", "0.5235987756", "--steps", "40",
        "--out-dir", str(tmp_path),
    ])
    assert code == 0
    traj = read(tmp_path / "trajectory.csv").splitlines()
    assert traj[0] == "t,x,p"
    final = read(tmp_path / "final_distribution.csv").splitlines()
    assert final[0] == "x,p"
    summary = json.loads(read(tmp_path / "summary.json"))
    assert summary["command"] == "simulate"
    assert summary["derived"]["total_probability_final"] == pytest.approx(1.0, abs=1e-12)
    assert summary["schema_version"] == 1


def test_float_serialization_is_lossless(tmp_path):
    main(["simulate", "--scenario", "interface", "--steps", "30", "--out-dir", str(tmp_path)])
    rows = read(tmp_path / "trajectory.csv").splitlines()[1:]
    total = 0.0
    last_t = None
    for row in rows:
        t, x, p = row.split(",")
        if t != last_t:
            total = 0.0
            last_t = t
        total += float(p)
    # parse-back of 17-significant-digit text reproduces unit probability
    assert total == pytest.approx(1.0, abs=1e-12)


def test_rabi_output_and_summary(tmp_path):
    code = main(["rabi", "--size", "21", "--theta", "0.3141592654",
                 "--steps", "3000", "--out-dir", str(tmp_path)])
    assert code == 0
    lines = read(tmp_path / "rabi.csv").splitlines()
    assert lines[0] == "t,p_L,p_R"
    assert len(lines) == 3002
    derived = json.loads(read(tmp_path / "summary.json"))["derived"]
    assert derived["delta_omega"] == pytest.approx(2.1831e-3, rel=1e-3)
    assert derived["confinement"] > 1 - 1e-9
    assert derived["delta_omega_main_text_form"] < derived["delta_omega"] * 1e-2


def test_spectrum_sweep_csv(tmp_path):
    code = main(["spectrum", "--size", "14", "--segment", "7", "--points", "3",
                 "--theta-a-min", "-1.5707963267948966", "--theta-a-max", "-0.8",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    lines = read(tmp_path / "sweep.csv").splitlines()
    assert lines[0] == "theta_A,index,omega,ipr"
    assert len(lines) == 1 + 3 * 28


def test_gap_scaling_csv(tmp_path):
    code = main(["gap-scaling", "--thetas", "0.5", "--l-min", "4", "--l-max", "6",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    lines = read(tmp_path / "gap_scaling.csv").splitlines()
    assert lines[0] == "theta,L,omega_exact,omega_approx,omega_diag"
    assert len(lines) == 4


def test_analytic_check(tmp_path):
    code = main(["analytic-check", "--size", "11", "--theta", "0.3141592653589793",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    derived = json.loads(read(tmp_path / "summary.json"))["derived"]
    assert derived["count_analytic"] == 22
    assert derived["max_energy_deviation"] < 1e-9
    assert derived["max_eigenvector_residual"] < 1e-9


def test_disorder_batch(tmp_path):
    code = main(["disorder", "--size", "21", "--seeds", "5", "--steps", "10",
                 "--out-dir", str(tmp_path)])
    assert code == 0
    lines = read(tmp_path / "disorder.csv").splitlines()
    assert lines[0] == "seed,found_pair,delta_omega,period,confinement"
    assert len(lines) == 6
    derived = json.loads(read(tmp_path / "summary.json"))["derived"]
    assert derived["realizations"] == 5


def test_pi_units_flag(tmp_path):
    main(["simulate", "--scenario", "homogeneous", "--theta", "0.25", "--pi-units",
          "--steps", "5", "--out-dir", str(tmp_path)])
    cfg = json.loads(read(tmp_path / "summary.json"))["config"]
    assert cfg["theta"] == pytest.approx(math.pi / 4)


def test_dump_config_round_trip(tmp_path, capsys):
    args = ["simulate", "--scenario", "interface", "--theta-minus", "-0.7853981634",
            "--theta-plus", "0.7853981634", "--sigma", "0.5235987756", "--steps", "25"]
    out1 = tmp_path / "run1"
    assert main(args + ["--out-dir", str(out1)]) == 0
    assert main(args + ["--dump-config"]) == 0
    config_text = capsys.readouterr().out
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(config_text, encoding="utf-8")
    out2 = tmp_path / "run2"
    assert main(["simulate", "--config", str(cfg_file), "--out-dir", str(out2)]) == 0
    assert read(out1 / "trajectory.csv") == read(out2 / "trajectory.csv")
    assert read(out1 / "final_distribution.csv") == read(out2 / "final_distribution.csv")


def test_config_flags_override_file(tmp_path):
    cfg = tmp_path / "base.cfg"
    cfg.write_text("[qwalk]\ntheta = 0.2\nsteps = 5\n", encoding="utf-8")
    out = tmp_path / "out"
    code = main(["simulate", "--scenario", "homogeneous", "--config", str(cfg),
                 "--theta", "0.4", "--out-dir", str(out)])
    assert code == 0
    conf = json.loads(read(out / "summary.json"))["config"]
    assert conf["theta"] == pytest.approx(0.4)  # flag wins
    assert conf["steps"] == 5  # file value used


def test_missing_config_gives_exit_2(tmp_path, capsys):
    code = main(["simulate", "--config", str(tmp_path / "nope.cfg")])
    assert code == 2
    err = capsys.readouterr().err
    assert json.loads(err)["kind"] == "config"


def test_unknown_config_key_gives_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[qwalk]\nbogus-key = 1\n", encoding="utf-8")
    code = main(["simulate", "--config", str(cfg)])
    assert code == 2


def test_numerical_failure_gives_exit_3(tmp_path, capsys):
    # theta = 0 wire is gapless: no gap pair exists
    code = main(["rabi", "--size", "21", "--theta", "0", "--steps", "50",
                 "--out-dir", str(tmp_path)])
    assert code == 3
    record = json.loads(capsys.readouterr().err)
    assert "gap pair" in record["error"]
    assert json.loads(read(tmp_path / "error.json"))["command"] == "rabi"
