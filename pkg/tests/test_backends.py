import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthofit import _backend, _pykernels, fit_projection, run_simulation, SimConfig, with_intercept

compiled = pytest.importorskip("orthofit._kernels")


@st.composite
def matrices(draw):
    n = draw(st.integers(1, 40))
    k = draw(st.integers(1, 7))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    X = rng.standard_normal((n, k)) * 10.0 ** rng.integers(-3, 4, k)
    if draw(st.booleans()) and k > 1:
        X[:, -1] = X[:, 0] * 3.0  # force a dependent column
    return np.asfortranarray(X), rng.standard_normal(n)


def test_extension_selected_by_default():
    if os.environ.get("ORTHOFIT_BACKEND", "auto") == "auto":
        assert _backend.BACKEND == "cython"


@settings(max_examples=300)
@given(matrices(), st.booleans())
def test_kernels_bit_identical(problem, reorth):
    X, y = problem
    for a, b in zip(compiled.mgs(X, 1e-12, reorth), _pykernels.mgs(X, 1e-12, reorth)):
        np.testing.assert_array_equal(a, b)
    Q = compiled.mgs(X, 1e-12, reorth)[0]
    for a, b in zip(compiled.project(Q, y), _pykernels.project(Q, y)):
        np.testing.assert_array_equal(a, b)
    a, b = compiled.normal_equations(X, y, 1e-12), _pykernels.normal_equations(X, y, 1e-12)
    assert (a is None) == (b is None)
    if a is not None:
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(compiled.matvec(X, a), _pykernels.matvec(X, a))
    assert compiled.dot(y, y) == _pykernels.dot(y, y)
    assert compiled.mean(y) == _pykernels.mean(y)
    np.testing.assert_array_equal(compiled.axpy(-0.3, y, y), _pykernels.axpy(-0.3, y, y))


def _fit_and_simulate():
    cfg = SimConfig(sigma=0.5, n_obs=30, n_trials=40, seed=9, solver="both")
    return fit_projection(with_intercept([[0, 1, 2]]), [1, 1, 4]), run_simulation(cfg)


def test_end_to_end_identical_under_fallback(request):
    fit_c, rep_c = _fit_and_simulate()
    request.getfixturevalue("pure_backend")
    fit_py, rep_py = _fit_and_simulate()
    np.testing.assert_array_equal(fit_py.fitted, fit_c.fitted)
    for field in ("mean_beta0", "mean_beta1", "sd_beta0", "sd_beta1", "mean_sigma2_hat", "max_solver_discrepancy"):
        assert getattr(rep_py, field) == getattr(rep_c, field)


def test_env_var_forces_fallback():
    code = "import orthofit; print(orthofit.BACKEND)"
    env = dict(os.environ, ORTHOFIT_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backend_benchmark_script_runs(tmp_path):
    script = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_backends.py")
    out = tmp_path / "bench.json"
    subprocess.run([sys.executable, script, "--repeat", "1", "--trials", "5", "--json", str(out)],
                   check=True, capture_output=True)
    import json

    records = json.loads(out.read_text())
    assert {r["case"] for r in records} == {"mgs", "project", "normal_equations", "simulation"}
