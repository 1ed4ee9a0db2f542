"""Benchmark the compiled tree kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--rows 20000] [--features 11]

Times the split scan, whole-tree training, batch prediction, and a full
GBM fit on synthetic data shaped like the transaction feature matrix.
"""

import argparse
import time

import numpy as np

from remitwatch._kernels import get_backend, py_backend
from remitwatch.mlcore.gbm import GbmConfig, train_gbm
from remitwatch.mlcore.tree import TreeConfig, train_tree
from remitwatch.mlcore import gbm as gbm_module
from remitwatch import _kernels


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=20_000)
    parser.add_argument("--features", type=int, default=11)
    parser.add_argument("--rounds", type=int, default=40)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.rows, args.features))
    y = ((X[:, 0] > 0) ^ (X[:, 1] > 0)).astype(float)
    t = rng.normal(size=args.rows)
    t -= t.mean()
    w = np.ones(args.rows)
    x_sorted = np.sort(X[:, 0]).copy()

    backends = [("python", py_backend)]
    try:
        backends.append(("compiled", get_backend("compiled")))
    except ImportError:
        print("compiled backend unavailable; benchmarking fallback only")

    results = {}
    for name, impl in backends:
        scan = timeit(lambda: impl.scan_split(x_sorted, t, w, 20))
        tree_cfg = TreeConfig(max_depth=6, min_samples_leaf=20)
        fit = timeit(lambda: train_tree(X, t, config=tree_cfg, kernels=impl), repeat=2)
        tree = train_tree(X, t, config=tree_cfg, kernels=impl)
        pred = timeit(lambda: impl.predict_tree(tree.feature, tree.threshold,
                                                tree.left, tree.right, tree.value, X))
        # route the full GBM through this backend
        saved = (_kernels.scan_split, _kernels.predict_tree)
        _kernels.scan_split, _kernels.predict_tree = impl.scan_split, impl.predict_tree
        try:
            gbm_time = timeit(lambda: train_gbm(
                X, y, GbmConfig(n_rounds=args.rounds, min_samples_leaf=20)), repeat=1)
        finally:
            _kernels.scan_split, _kernels.predict_tree = saved
        results[name] = (scan, fit, pred, gbm_time)

    header = f"{'backend':<10} {'scan_split':>12} {'tree_fit':>12} {'predict':>12} {'gbm_' + str(args.rounds):>12}"
    print(header)
    print("-" * len(header))
    for name, (scan, fit, pred, gbm_time) in results.items():
        print(f"{name:<10} {scan * 1e3:>10.2f}ms {fit * 1e3:>10.2f}ms "
              f"{pred * 1e3:>10.2f}ms {gbm_time:>11.2f}s")
    if len(results) == 2:
        py, cy = results["python"], results["compiled"]
        print()
        for label, i in (("scan_split", 0), ("tree_fit", 1), ("predict", 2), ("gbm", 3)):
            print(f"speedup {label}: {py[i] / cy[i]:.1f}x")


if __name__ == "__main__":
    main()
