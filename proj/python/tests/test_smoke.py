import csv
import io
import json
import math
import os
import subprocess

import pytest

import coopjam


def test_rate_and_feasibility():
    s = coopjam.default_scenario()
    c = coopjam.sample_channels(s, 3)
    v = coopjam.check_positive_secrecy(s, c)
    assert isinstance(v["feasible"], bool)
    assert coopjam.secrecy_rate(s, c, [0.0, 0.0, 0.0]) >= 0.0


def test_single_link_example():
    s = coopjam.Scenario(p_max=[1.0], p_source=2.0, sigma2_dest=1.0, sigma2_eaves=[1.0])
    c = coopjam.ChannelGains(h_d=1.0, h_e=[0.0], g_d=[0.0], g_e=[0.0])
    assert coopjam.secrecy_rate(s, c, [0.0]) == pytest.approx(math.log2(3.0))


def test_optimizers_agree_on_easy_instance():
    s = coopjam.default_scenario()
    seed = 0
    while not coopjam.check_positive_secrecy(s, c := coopjam.sample_channels(s, seed))["feasible"]:
        seed += 1
    a = coopjam.algorithm_a(s, c)
    b = coopjam.algorithm_b(s, c)
    assert all(x <= y for x, y in zip(a["trace"], a["trace"][1:]))
    assert b["rate"] >= 0.0
    assert len(a["p"]) == 3


def test_sop_methods():
    s = coopjam.Scenario(p_max=[1.0, 1.6], p_source=31.6, sigma2_dest=0.1, sigma2_eaves=[0.1])
    closed = coopjam.sop(s, 1.0, "closed")
    integral = coopjam.sop(s, 1.0, "integral")
    p, se = coopjam.estimate_sop(s, 1.0, samples=200000, seed=5, threads=1)
    assert abs(closed - integral) < 1e-7
    assert abs(closed - p) < 5 * se


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        coopjam.Scenario(p_max=[-1.0], p_source=1.0, sigma2_dest=1.0, sigma2_eaves=[1.0])
    s = coopjam.Scenario(p_max=[1.0, 1.0], p_source=2.0, sigma2_dest=0.1, sigma2_eaves=[0.1])
    with pytest.raises(coopjam.DegenerateError):
        coopjam.sop(s, 1.0)


def test_experiment_csv():
    text = coopjam.run_experiment("convergence", seed=2, n_sets=1)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["channel_set", "iteration", "secrecy_rate"]
    assert len(rows) > 2


@pytest.mark.skipif("COOPJAM_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_json(tmp_path):
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({"n_jammers": 3, "n_eavesdroppers": 2, "p_source": 2.0, "p_max": [1, 1, 3],
                                    "sigma2_dest": 0.1, "sigma2_eaves": [0.1, 0.1]}))
    out = subprocess.run([os.environ["COOPJAM_CLI"], "optimize", "--scenario", str(scenario), "--method", "b",
                          "--seed", "4", "--json"], capture_output=True, text=True)
    assert out.returncode in (0, 2)
    assert '"rate"' in out.stdout
