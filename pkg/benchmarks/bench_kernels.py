"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one row per kernel with the best-of-N wall time for each backend and
the max relative difference between their results.  End-to-end timings of
the functionals that use the kernels are run under both backends in
subprocesses (the backend is fixed at import time).
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from radcoulomb import _kernels_py
from radcoulomb.quadrature import cumulative_matrix, panel_rule

try:
    from radcoulomb import _kernels
except ImportError:  # extension not built
    _kernels = None


def _cases(rng: np.random.Generator):
    n_rho, n_r = 512, 4096
    rhos = np.sort(rng.uniform(0.1, 50.0, n_rho))
    r = np.sort(rng.uniform(0.0, 10.0, n_r))
    wg = rng.normal(size=n_r)
    yield "sine_sum 512x4096", (rhos, r, wg)

    n = 400_000
    rr = rng.uniform(1.0, 5.0, n)
    h = rr * rng.uniform(1e-6, 1.0, n)
    yield "gagliardo_sum 4e5", (rr, h, rng.uniform(size=n), rng.normal(size=n), rng.normal(size=n), 0.75)

    edges = np.linspace(0.0, 20.0, 4097)
    x, w = panel_rule(edges, 16)
    f = np.exp(-x * x)
    yield "coulomb_prefix 4096x16", (np.ascontiguousarray(x), np.ascontiguousarray(w), f,
                                     np.ascontiguousarray(cumulative_matrix(16)), 0.5 * np.diff(edges))


_END_TO_END = """
import timeit
from radcoulomb import kernels
from radcoulomb.profiles import make_tent
from radcoulomb.functionals import sobolev_spectral, sobolev_gagliardo, coulomb_newton
u = make_tent(0.01, 193.06977288832496, 3.72759372031494)
t = make_tent(1.0, 2.0, 1.0)
for name, fn in [("sobolev_spectral tent eps=0.01 s=0.75", lambda: sobolev_spectral(u, 0.75)),
                 ("sobolev_gagliardo tent(1,2,1) s=0.75", lambda: sobolev_gagliardo(t, 0.75)),
                 ("coulomb_newton tent eps=0.01", lambda: coulomb_newton(u))]:
    best = min(timeit.repeat(fn, number=1, repeat={repeat}))
    print(f"{{kernels.BACKEND}}\\t{{name}}\\t{{best:.4f}}")
"""


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<26}{'numpy [s]':>12}{'cython [s]':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, case in _cases(rng):
        py = getattr(_kernels_py, name.split()[0])
        t_py = min(timeit.repeat(lambda: py(*case), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:<26}{t_py:>12.4f}{'n/a':>12}")
            continue
        cy = getattr(_kernels, name.split()[0])
        t_cy = min(timeit.repeat(lambda: cy(*case), number=1, repeat=args.repeat))
        a, b = np.atleast_1d(py(*case)), np.atleast_1d(cy(*case))
        diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), 1e-300))
        print(f"{name:<26}{t_py:>12.4f}{t_cy:>12.4f}{t_py / t_cy:>10.1f}{diff:>14.2e}")

    print("\nend to end (best of", args.repeat, "runs)")
    code = _END_TO_END.format(repeat=args.repeat)
    for pure in ("1", ""):
        env = dict(os.environ, RADCOULOMB_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        sys.stdout.write(out.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
