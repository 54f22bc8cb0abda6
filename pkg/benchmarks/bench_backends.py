"""Compare the compiled kernels with the numpy fallback.

Times modified Gram-Schmidt, projection, normal equations and a whole
simulation batch on both backends, after checking the results are
bit-identical.

    python benchmarks/bench_backends.py [--repeat 20] [--json out.json]
"""

import argparse
import json
import statistics
import time

import numpy as np

from orthofit import SimConfig, _pykernels, core, orthogonalize, regress, run_simulation, simulate

try:
    from orthofit import _kernels
except ImportError:
    _kernels = None

SHAPES = [(50, 2), (1_000, 2), (10_000, 2), (200, 8), (2_000, 16)]


def time_call(fn, repeat):
    runs = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        runs.append(time.perf_counter() - t0)
    return statistics.median(runs)


def kernel_cases(k, X, y):
    Q = k.mgs(X, 1e-12, False)[0]
    return {
        "mgs": lambda: k.mgs(X, 1e-12, False),
        "project": lambda: k.project(Q, y),
        "normal_equations": lambda: k.normal_equations(X, y, 1e-12),
    }


def use_backend(k):
    for mod in (core, orthogonalize, regress, simulate):
        mod.kernels = k


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--json", help="also write the records to this file")
    args = parser.parse_args()
    if _kernels is None:
        parser.exit(1, "compiled extension not built; run `pip install -e .` first\n")

    backends = {"cython": _kernels, "python": _pykernels}
    rng = np.random.default_rng(0)
    records = []
    print(f"{'case':<18} {'shape':>12} {'cython':>12} {'python':>12} {'speedup':>8}")
    for n, k in SHAPES:
        X = np.asfortranarray(rng.standard_normal((n, k)))
        y = rng.standard_normal(n)
        for a, b in zip(_kernels.mgs(X, 1e-12, False), _pykernels.mgs(X, 1e-12, False)):
            assert np.array_equal(a, b), "backends disagree"
        times = {name: {op: time_call(fn, args.repeat) for op, fn in kernel_cases(kern, X, y).items()}
                 for name, kern in backends.items()}
        for op in times["cython"]:
            c, p = times["cython"][op], times["python"][op]
            records.append({"case": op, "n": n, "k": k, "cython": c, "python": p})
            print(f"{op:<18} {f'{n}x{k}':>12} {c * 1e6:>10.1f}us {p * 1e6:>10.1f}us {p / c:>7.1f}x")

    cfg = SimConfig(sigma=0.5, n_obs=50, n_trials=args.trials, seed=1, solver="both")
    sim = {}
    for name, kern in backends.items():
        use_backend(kern)
        t0 = time.perf_counter()
        run_simulation(cfg)
        sim[name] = time.perf_counter() - t0
    use_backend(_kernels)
    records.append({"case": "simulation", "n": cfg.n_obs, "k": 2, "trials": cfg.n_trials, **sim})
    print(f"{'simulation':<18} {f'{cfg.n_trials} trials':>12} {sim['cython']:>11.2f}s "
          f"{sim['python']:>11.2f}s {sim['python'] / sim['cython']:>7.1f}x")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(records, fh, indent=2)


if __name__ == "__main__":
    main()
