"""Compare the compiled split-search kernel against the pure-NumPy fallback.

The gradient-boosting trainer spends most of its time scanning sorted feature
columns for the best split. That scan has two interchangeable implementations:
a Cython extension (built at install time when a C compiler is available) and
a pure-NumPy version used as a fallback or when PUPILMOOD_PURE_PY is set.
Both must produce bit-identical models; this script times a full fit under
each backend in a subprocess and verifies the predictions match exactly.

Usage: python3 benchmarks/bench_backends.py [--rows N] [--cols D] [--trees T]
"""

import argparse
import json
import os
import subprocess
import sys
import tempfile
import textwrap

WORKER = textwrap.dedent(
    """
    import json, sys, time
    import numpy as np
    from pupilmood.learn import backend
    from pupilmood.learn.gbdt import GbdtParams, fit_gbdt

    n, d, trees, repeats = (int(a) for a in sys.argv[1:5])
    rng = np.random.default_rng(7)
    X = rng.normal(size=(n, d))
    y = (X[:, 0] + 0.5 * X[:, 1] + 0.3 * rng.normal(size=n) > 0).astype(np.int64)
    params = GbdtParams(n_trees=trees, max_depth=4, learning_rate=0.1)

    fit_gbdt(X, y, params)  # warm-up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        model = fit_gbdt(X, y, params)
        best = min(best, time.perf_counter() - t0)
    probs = model.predict_proba(X)
    print(json.dumps({
        "backend": backend.BACKEND,
        "seconds": best,
        "final_loss": model.loss_trace[-1],
        "prob_digest": [float(p) for p in probs[:32]],
    }))
    """
)


def run_worker(pure: bool, n: int, d: int, trees: int, repeats: int) -> dict:
    env = {k: v for k, v in os.environ.items() if k != "PUPILMOOD_PURE_PY"}
    if pure:
        env["PUPILMOOD_PURE_PY"] = "1"
    with tempfile.NamedTemporaryFile("w", suffix=".py", delete=False) as f:
        f.write(WORKER)
        path = f.name
    try:
        out = subprocess.run(
            [sys.executable, path, str(n), str(d), str(trees), str(repeats)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
    finally:
        os.unlink(path)
    return json.loads(out.stdout)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=2000)
    ap.add_argument("--cols", type=int, default=48)
    ap.add_argument("--trees", type=int, default=60)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    compiled = run_worker(False, args.rows, args.cols, args.trees, args.repeats)
    pure = run_worker(True, args.rows, args.cols, args.trees, args.repeats)

    print(f"dataset: {args.rows} rows x {args.cols} cols, {args.trees} trees")
    for r in (compiled, pure):
        print(f"  backend={r['backend']:<7} best of {args.repeats}: {r['seconds']:.3f}s")
    if compiled["backend"] == pure["backend"]:
        print("note: compiled extension unavailable; both runs used the NumPy fallback")
    else:
        speedup = pure["seconds"] / compiled["seconds"]
        print(f"  speedup: {speedup:.2f}x")

    same = (
        compiled["prob_digest"] == pure["prob_digest"]
        and compiled["final_loss"] == pure["final_loss"]
    )
    print(f"  bit-identical predictions: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    raise SystemExit(main())
