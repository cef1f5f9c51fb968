"""Compare the compiled and NumPy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 20] [--json out.json]

Each kernel is timed on identical inputs under both backends (best of
``--repeat`` runs), followed by one full separable-state minimization of a
mixed 3-qubit state, which is where the kernels spend their time in practice.
"""
from __future__ import annotations

import argparse
import json
import time
from contextlib import contextmanager

import numpy as np

from gpent import kernels
from gpent.separable import Budget, minimize_relative_entropy
from gpent.states import haar_state, partial_trace

NAMES = ("log_divided_differences", "khatri_rao", "khatri_rao_grad", "relent_objective")


@contextmanager
def backend(module):
    saved = {n: getattr(kernels, n) for n in NAMES}
    for n in NAMES:
        setattr(kernels, n, getattr(module, n))
    try:
        yield
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    dims = (4, 4)  # two blocks of two qubits each
    D, K = 16, 64
    V = rng.normal(size=(sum(dims), K)) + 1j * rng.normal(size=(sum(dims), K))
    Phi = kernels.python.khatri_rao(V, dims) / np.sqrt(K)
    R = rng.normal(size=(D, K)) + 1j * rng.normal(size=(D, K))
    X = rng.normal(size=(D, D)) + 1j * rng.normal(size=(D, D))
    rho = X @ X.conj().T
    rho /= np.trace(rho).real
    lam = np.sort(rng.uniform(1e-6, 1.0, D))
    return {
        "log_divided_differences": lambda k: k.log_divided_differences(lam),
        "khatri_rao": lambda k: k.khatri_rao(V, dims),
        "khatri_rao_grad": lambda k: k.khatri_rao_grad(R, V, dims),
        "relent_objective": lambda k: k.relent_objective(Phi, rho, -0.5, 1e-12),
    }


def full_minimize():
    # random 5-qubit state reduced to four qubits: mixed, so no shortcut applies
    psi = haar_state((2,) * 5, np.random.default_rng(1))
    rho = partial_trace(psi, [1, 2, 3, 4]).matrix
    budget = Budget(restarts=2)
    return lambda: minimize_relative_entropy(rho, (4, 4), budget, np.random.SeedSequence(0))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--json", help="also write the results here")
    args = ap.parse_args(argv)

    if kernels.compiled is None:
        print("compiled kernels are not built; only the NumPy backend can be timed")
    backends = {"python": kernels.python}
    if kernels.compiled is not None:
        backends["cython"] = kernels.compiled

    results = {}
    rng = np.random.default_rng(0)
    for name, call in cases(rng).items():
        for bname, mod in backends.items():
            results[(name, bname)] = best_of(lambda: call(mod), args.repeat)
    run = full_minimize()
    for bname, mod in backends.items():
        with backend(mod):
            results[("full minimize", bname)] = best_of(run, 1)

    rows = sorted({k for k, _ in results}, key=lambda k: (k == "full minimize", k))
    print(f"{'kernel':<26}{'python':>12}{'cython':>12}{'speedup':>10}")
    for r in rows:
        py = results[(r, "python")]
        cy = results.get((r, "cython"))
        tail = f"{cy * 1e3:>10.3f}ms{py / cy:>9.2f}x" if cy else f"{'-':>12}{'-':>10}"
        print(f"{r:<26}{py * 1e3:>10.3f}ms{tail}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({f"{k}/{b}": t for (k, b), t in results.items()}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
