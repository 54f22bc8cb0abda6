"""Monte Carlo simulation of simple regression under y = b0 + b1 x + e.

Random streams
--------------
Each trial draws from its own Philox4x64-10 counter-based stream, keyed by
``(seed, 0)`` with the 256-bit counter starting at ``trial_index << 128``.
Streams of different trials never overlap, and a trial's data depends only
on ``(seed, trial_index)`` and the config.

Raw 64-bit words become uniforms on [0, 1) through their top 53 bits. Normal
variates come from the Box-Muller transform, which consumes exactly two words
per pair of variates. There is no rejection step, so the number of words
consumed is fixed. For ``x_spec.kind == "uniform"`` the first ``n_obs`` words
give ``x``, and the noise words follow.
"""

from __future__ import annotations

import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from ._backend import BACKEND, kernels
from .core import DesignMatrix, _freeze
from .errors import DegeneracyError, DegenerateRegressorError, OrthofitError, SolverDiscrepancyError
from .regress import SimpleRegressionData, fit_normal_equations, fit_projection

__all__ = [
    "ConfigError",
    "XSpec",
    "SimConfig",
    "SimReport",
    "BenchmarkReport",
    "generate_trial",
    "standard_normals",
    "run_simulation",
    "benchmark",
    "DISCREPANCY_RTOL",
]

SOLVERS = ("projection", "normal_equations", "both")
#: Per-trial gate: max |yhat_projection - yhat_normal| <= DISCREPANCY_RTOL * (1 + ||y||).
DISCREPANCY_RTOL = 1e-8
_U53 = 2.0 ** -53


class ConfigError(OrthofitError, ValueError):
    """Invalid simulation configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class XSpec:
    kind: str = "grid"
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("grid", "uniform"):
            raise ConfigError("x_spec.kind", f"must be 'grid' or 'uniform', got {self.kind!r}")
        for name in ("a", "b"):
            v = getattr(self, name)
            if not _is_real(v):
                raise ConfigError(f"x_spec.{name}", f"must be a finite real, got {v!r}")
        if not self.a < self.b:
            raise ConfigError("x_spec", f"requires a < b, got a={self.a}, b={self.b}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": float(self.a), "b": float(self.b)}


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_count(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass(frozen=True)
class SimConfig:
    beta0: float = 1.0
    beta1: float = 2.0
    sigma: float = 1.0
    n_obs: int = 50
    n_trials: int = 1000
    x_spec: XSpec = field(default_factory=XSpec)
    seed: int = 0
    solver: str = "projection"

    def __post_init__(self) -> None:
        for name in ("beta0", "beta1", "sigma"):
            if not _is_real(getattr(self, name)):
                raise ConfigError(name, f"must be a finite real, got {getattr(self, name)!r}")
        if not self.sigma > 0:
            raise ConfigError("sigma", f"must be > 0, got {self.sigma}")
        if not _is_count(self.n_obs) or self.n_obs < 3:
            raise ConfigError("n_obs", f"must be an integer >= 3, got {self.n_obs!r}")
        if not _is_count(self.n_trials) or self.n_trials < 1:
            raise ConfigError("n_trials", f"must be an integer >= 1, got {self.n_trials!r}")
        if not _is_count(self.seed) or not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.solver not in SOLVERS:
            raise ConfigError("solver", f"must be one of {', '.join(SOLVERS)}, got {self.solver!r}")
        if not isinstance(self.x_spec, XSpec):
            raise ConfigError("x_spec", "must be an XSpec")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SimConfig":
        """Build a config from parsed JSON, rejecting unknown or mistyped fields."""
        if not isinstance(d, Mapping):
            raise ConfigError("config", "must be a JSON object")
        known = {"beta0", "beta1", "sigma", "n_obs", "n_trials", "x_spec", "seed", "solver"}
        for key in d:
            if key not in known:
                raise ConfigError(str(key), "unknown field")
        kwargs = dict(d)
        if "x_spec" in kwargs:
            xs = kwargs["x_spec"]
            if not isinstance(xs, Mapping):
                raise ConfigError("x_spec", "must be an object with kind, a, b")
            for key in xs:
                if key not in ("kind", "a", "b"):
                    raise ConfigError(f"x_spec.{key}", "unknown field")
            kwargs["x_spec"] = XSpec(**xs)
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "beta0": self.beta0,
            "beta1": self.beta1,
            "sigma": self.sigma,
            "n_obs": self.n_obs,
            "n_trials": self.n_trials,
            "x_spec": self.x_spec.to_dict(),
            "seed": self.seed,
            "solver": self.solver,
        }


@dataclass(frozen=True)
class SimReport:
    mean_beta0: float
    mean_beta1: float
    sd_beta0: float
    sd_beta1: float
    mean_sigma2_hat: float
    max_solver_discrepancy: Optional[float]
    wall_time_per_trial: dict
    wall_time_median_per_trial: dict
    n_trials_completed: int

    def to_dict(self) -> dict:
        out = {
            "mean_beta0": self.mean_beta0,
            "mean_beta1": self.mean_beta1,
            "sd_beta0": self.sd_beta0,
            "sd_beta1": self.sd_beta1,
            "mean_sigma2_hat": self.mean_sigma2_hat,
        }
        if self.max_solver_discrepancy is not None:
            out["max_solver_discrepancy"] = self.max_solver_discrepancy
        out["wall_time_per_trial"] = dict(self.wall_time_per_trial)
        out["wall_time_median_per_trial"] = dict(self.wall_time_median_per_trial)
        out["n_trials_completed"] = self.n_trials_completed
        return out


@dataclass(frozen=True)
class BenchmarkReport:
    n_obs: int
    n_trials: int
    backend: str
    wall_time_per_trial: dict
    wall_time_median_per_trial: dict
    max_solver_discrepancy: float
    trial_timings: list

    def to_dict(self) -> dict:
        return {
            "n_obs": self.n_obs,
            "n_trials": self.n_trials,
            "backend": self.backend,
            "wall_time_per_trial": dict(self.wall_time_per_trial),
            "wall_time_median_per_trial": dict(self.wall_time_median_per_trial),
            "max_solver_discrepancy": self.max_solver_discrepancy,
            "trial_timings": [dict(t) for t in self.trial_timings],
        }


def _stream(seed: int, trial_index: int) -> np.random.Philox:
    return np.random.Philox(key=np.array([seed, 0], dtype=np.uint64),
                            counter=np.array([0, 0, trial_index, 0], dtype=np.uint64))


def _uniforms(words: np.ndarray) -> np.ndarray:
    """[0, 1) from the top 53 bits of each word."""
    return (words >> np.uint64(11)).astype(np.float64) * _U53


def standard_normals(bitgen: np.random.Philox, n: int) -> np.ndarray:
    """``n`` standard normal variates by Box-Muller, two raw words per pair."""
    pairs = (n + 1) // 2
    words = bitgen.random_raw(2 * pairs)
    u1 = ((words[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * _U53  # (0, 1]
    u2 = _uniforms(words[1::2])
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = (2.0 * np.pi) * u2
    z = np.empty(2 * pairs)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:n]


def generate_trial(config: SimConfig, trial_index: int) -> SimpleRegressionData:
    """Data for one trial; a pure function of ``(config, trial_index)``."""
    if not 0 <= trial_index < config.n_trials:
        raise IndexError(f"trial_index {trial_index} outside [0, {config.n_trials})")
    n = config.n_obs
    spec = config.x_spec
    bitgen = _stream(config.seed, trial_index)
    if spec.kind == "grid":
        x = np.linspace(spec.a, spec.b, n)
    else:
        x = spec.a + (spec.b - spec.a) * _uniforms(bitgen.random_raw(n))
    eps = config.sigma * standard_normals(bitgen, n)
    y = config.beta0 + config.beta1 * x + eps
    return SimpleRegressionData(_freeze(x), _freeze(y))


@dataclass
class _Trial:
    beta0: float
    beta1: float
    sigma2_hat: float
    discrepancy: Optional[float]
    times: dict


def _timed(fn, *args):
    t0 = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - t0


def _run_trial(config: SimConfig, i: int, solvers: tuple[str, ...]) -> _Trial:
    data = generate_trial(config, i)
    design = DesignMatrix(np.column_stack([np.ones(data.n), data.x]))
    fits, times = {}, {}
    for name in solvers:
        fn = fit_projection if name == "projection" else fit_normal_equations
        try:
            fits[name], times[name] = _timed(fn, design, data.y)
        except DegeneracyError as exc:
            raise type(exc)(f"trial {i}: {name} solver failed: {exc}") from exc
        if fits[name].coefficients is None:
            raise DegenerateRegressorError(f"trial {i}: {name} solver found a rank-deficient design")
    primary = fits[solvers[0]]
    discrepancy = None
    if len(solvers) == 2:
        diff = np.abs(fits["projection"].fitted - fits["normal_equations"].fitted)
        discrepancy = float(np.max(diff))
        limit = DISCREPANCY_RTOL * (1.0 + math.sqrt(kernels.dot(data.y, data.y)))
        if not discrepancy <= limit:
            raise SolverDiscrepancyError(
                f"trial {i}: solvers disagree by {discrepancy:.3e} (limit {limit:.3e})")
    b0, b1 = (float(c) for c in primary.coefficients)
    return _Trial(b0, b1, primary.rss / (data.n - 2), discrepancy, times)


def _solvers(config: SimConfig) -> tuple[str, ...]:
    if config.solver == "both":
        return ("projection", "normal_equations")
    return (config.solver,)


def _run_trials(config: SimConfig, workers: int) -> list[_Trial]:
    solvers = _solvers(config)
    indices = range(config.n_trials)
    if workers <= 1:
        return [_run_trial(config, i, solvers) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves trial-index order
        return list(pool.map(lambda i: _run_trial(config, i, solvers), indices))


def _mean(values: np.ndarray) -> float:
    return float(kernels.mean(np.ascontiguousarray(values, dtype=np.float64)))


def _sd(values: np.ndarray) -> float:
    n = values.shape[0]
    if n < 2:
        return 0.0
    m = _mean(values)
    d = np.ascontiguousarray(values - m)
    return math.sqrt(kernels.dot(d, d) / (n - 1))


def _timing_summary(trials: list[_Trial], solvers) -> tuple[dict, dict]:
    mean_t, median_t = {}, {}
    for name in solvers:
        ts = [t.times[name] for t in trials]
        mean_t[name] = math.fsum(ts) / len(ts)
        median_t[name] = statistics.median(ts)
    return mean_t, median_t


def run_simulation(config: SimConfig, *, workers: int = 1) -> SimReport:
    """Fit every trial and aggregate the sampling statistics.

    With ``solver == "both"``, coefficient statistics come from the projection
    fit, and each trial's fitted vectors must agree within
    ``DISCREPANCY_RTOL * (1 + ||y||)``. The statistics do not depend on
    ``workers``, because they are aggregated in trial order.
    ``mean_sigma2_hat`` averages ``rss / (n_obs - 2)``.
    """
    trials = _run_trials(config, workers)
    b0 = np.array([t.beta0 for t in trials])
    b1 = np.array([t.beta1 for t in trials])
    s2 = np.array([t.sigma2_hat for t in trials])
    discrepancy = None
    if config.solver == "both":
        discrepancy = max(t.discrepancy for t in trials)
    mean_t, median_t = _timing_summary(trials, _solvers(config))
    return SimReport(
        mean_beta0=_mean(b0),
        mean_beta1=_mean(b1),
        sd_beta0=_sd(b0),
        sd_beta1=_sd(b1),
        mean_sigma2_hat=_mean(s2),
        max_solver_discrepancy=discrepancy,
        wall_time_per_trial=mean_t,
        wall_time_median_per_trial=median_t,
        n_trials_completed=len(trials),
    )


def benchmark(config: SimConfig) -> BenchmarkReport:
    """Time both solvers on identical trial data (fit calls only)."""
    if config.solver != "both":
        raise ConfigError("solver", f"benchmark requires solver 'both', got {config.solver!r}")
    trials = _run_trials(config, 1)
    solvers = _solvers(config)
    mean_t, median_t = _timing_summary(trials, solvers)
    timings = [{"trial": i, **{name: t.times[name] for name in solvers}}
               for i, t in enumerate(trials)]
    return BenchmarkReport(
        n_obs=config.n_obs,
        n_trials=config.n_trials,
        backend=BACKEND,
        wall_time_per_trial=mean_t,
        wall_time_median_per_trial=median_t,
        max_solver_discrepancy=max(t.discrepancy for t in trials),
        trial_timings=timings,
    )
