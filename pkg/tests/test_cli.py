import json
import math
from pathlib import Path

import numpy as np
import pytest

from orthofit import generate_trial, simulate
from orthofit.cli import main

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"

# (golden file, argv, exit code); error cases write nothing to stdout
FIT_CASES = [
    ("fit_projection.json", ["simple.csv", "--method", "projection"], 0),
    ("fit_simple_three_columns.json", ["three_columns.csv", "--method", "simple"], 2),
    ("fit_normal_constant_x.json", ["constant_x.csv", "--method", "normal"], 3),
    ("fit_normal.json", ["simple.csv", "--method", "normal"], 0),
    ("fit_simple.json", ["simple.csv", "--method", "simple"], 0),
]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fit_argv(csv, *rest):
    return ["fit", DATA / csv, "--response", "y", *rest]


@pytest.mark.parametrize("golden, argv, code", FIT_CASES)
def test_fit_golden(capsys, golden, argv, code):
    got_code, out, err = run(capsys, *fit_argv(*argv))
    assert got_code == code
    assert out == (GOLDEN / golden).read_text()
    assert bool(err) == (code != 0)


@pytest.mark.parametrize("method", ["projection", "normal", "simple"])
def test_fit_hand_values(capsys, method):
    code, out, _ = run(capsys, *fit_argv("simple.csv", "--method", method))
    res = json.loads(out)
    assert code == 0
    np.testing.assert_allclose(res["coefficients"], [0.5, 1.5], atol=1e-14)
    np.testing.assert_allclose(res["fitted"], [0.5, 2, 3.5], atol=1e-14)
    assert res["rss"] == pytest.approx(1.5, abs=1e-14)
    assert list(res) == ["method", "rank", "rss", "r_squared", "coefficients", "fitted", "residuals"]


@pytest.mark.parametrize("csv", ["simple.csv", "three_columns.csv", "constant_x.csv"])
def test_fit_round_trip(capsys, csv):
    code, out, _ = run(capsys, *fit_argv(csv))
    res = json.loads(out)
    y = np.loadtxt(DATA / csv, delimiter=",", skiprows=1)[:, -1]
    assert code == 0
    assert np.max(np.abs(np.add(res["fitted"], res["residuals"]) - y)) <= 1e-12


def test_fit_wide_design_has_null_coefficients(capsys):
    code, out, _ = run(capsys, *fit_argv("three_columns.csv"))
    res = json.loads(out)
    assert code == 0 and res["coefficients"] is None and res["rank"] == 3


def test_fit_no_intercept(capsys):
    code, out, _ = run(capsys, *fit_argv("simple.csv", "--no-intercept"))
    res = json.loads(out)
    # through the origin: b = sum(xy) / sum(x^2) = 9 / 5
    assert code == 0
    assert res["coefficients"] == pytest.approx([1.8], abs=1e-15)


def test_fit_constant_regressor_projection(capsys):
    code, out, _ = run(capsys, *fit_argv("constant_x.csv"))
    res = json.loads(out)
    assert code == 0 and res["rank"] == 1 and res["coefficients"] is None
    assert res["fitted"] == pytest.approx([2, 2, 2], abs=1e-15)
    assert run(capsys, *fit_argv("constant_x.csv", "--method", "simple"))[0] == 3


@pytest.mark.parametrize(
    "content, needle",
    [
        ("x,y\n1,2\n3\n", "line 3"),
        ("x,y\n1,2\n3,abc\n", "line 3"),
        ("x,y\n1,2\n3,nan\n", "line 3"),
        ("x,y\n1,2\n", "at least 2"),
        ("", "header"),
        ("x,x\n1,2\n3,4\n", "line 1"),
    ],
)
def test_fit_parse_errors(capsys, tmp_path, content, needle):
    p = tmp_path / "bad.csv"
    p.write_text(content)
    code, out, err = run(capsys, "fit", p, "--response", "y")
    assert code == 2 and out == ""
    assert needle in err


def test_fit_usage_errors(capsys, tmp_path):
    assert run(capsys, "fit", tmp_path / "missing.csv", "--response", "y")[0] == 2
    assert run(capsys, *fit_argv("simple.csv")[:-2], "--response", "z")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["fit", str(DATA / "simple.csv"), "--response", "y", "--method", "qr"])
    assert exc.value.code == 2
    capsys.readouterr()


def write_config(tmp_path, **kw):
    cfg = dict(beta0=1.0, beta1=2.0, sigma=0.5, n_obs=20, n_trials=30, seed=7)
    cfg.update(kw)
    p = tmp_path / "config.json"
    p.write_text(json.dumps(cfg))
    return p


def strip_timing(text):
    return {k: v for k, v in json.loads(text).items() if not k.startswith("wall_time")}


def test_simulate_sigma_zero(capsys, tmp_path):
    code, out, err = run(capsys, "simulate", write_config(tmp_path, sigma=0))
    assert code == 2 and out == "" and "sigma" in err


def test_simulate_unknown_field(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", write_config(tmp_path, sigmaa=1))
    assert code == 2 and "sigmaa" in err


def test_simulate_bad_json(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    assert run(capsys, "simulate", p)[0] == 2


def test_simulate_deterministic(capsys, tmp_path):
    p = write_config(tmp_path)
    c1, o1, _ = run(capsys, "simulate", p)
    c2, o2, _ = run(capsys, "simulate", p, "--workers", "3")
    assert c1 == c2 == 0
    assert strip_timing(o1) == strip_timing(o2)
    assert list(json.loads(o1)) == [
        "mean_beta0", "mean_beta1", "sd_beta0", "sd_beta1", "mean_sigma2_hat",
        "wall_time_per_trial", "wall_time_median_per_trial", "n_trials_completed",
    ]


def test_simulate_both_has_discrepancy(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", write_config(tmp_path, solver="both"))
    assert code == 0 and "max_solver_discrepancy" in json.loads(out)


def test_simulate_degenerate_trial_names_index(capsys, tmp_path, monkeypatch):
    real = generate_trial

    def fake(config, i):
        data = real(config, i)
        if i == 4:
            return type(data)(np.full(data.n, 0.5), data.y)
        return data

    monkeypatch.setattr(simulate, "generate_trial", fake)
    code, out, err = run(capsys, "simulate", write_config(tmp_path, solver="both"))
    assert code == 3 and out == "" and "trial 4" in err


def test_bench(capsys, tmp_path):
    assert run(capsys, "bench", write_config(tmp_path, solver="projection"))[0] == 2
    code, out, _ = run(capsys, "bench", write_config(tmp_path, solver="both", n_trials=1))
    res = json.loads(out)
    assert code == 0
    assert set(res["wall_time_per_trial"]) == {"projection", "normal_equations"}
    assert all(t > 0 for t in res["wall_time_per_trial"].values())
    assert len(res["trial_timings"]) == 1


def test_json_floats_round_trip(capsys):
    _, out, _ = run(capsys, *fit_argv("simple.csv"))
    for v in json.loads(out)["fitted"]:
        assert float(repr(v)) == v and math.isfinite(v)
