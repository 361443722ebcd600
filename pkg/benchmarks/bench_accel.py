"""Compare the numba kernels with their pure-numpy fallbacks.

    python benchmarks/bench_accel.py [--n 200000] [--repeat 5]

Both implementations are imported directly, so the CORRQSL_DISABLE_NUMBA flag
does not matter here. The first numba call (compilation) is excluded.
"""
import argparse
import time

import numpy as np

from corrqsl import _accel
from corrqsl.distinguishability import BISECT_TOL, _scan_loop, _scan_numpy, scan_step
from corrqsl.dynamics import _kappa_loop, _kappa_numpy
from corrqsl.dynamics import eta
from corrqsl.kernels import _closed_form_loop, _closed_form_numpy, kernel_arrays, prefactors
from corrqsl.params import ModelParams


def best_of(fn, repeat):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(params, n):
    t = np.linspace(0.0, 100.0 / params.omega_c, n)
    pref = prefactors(params)
    k = kernel_arrays(params, t)
    args_k = (t, params.mu, params.chi, params.omega_c, pref)
    args_kap = (t, k, params.lam, 1.0 / eta(params), params.omega_0)
    horizon = 400.0 / params.omega_c
    args_scan = (horizon, scan_step(params, horizon), float(pref[3]), params.mu + 1.0,
                 params.omega_c, BISECT_TOL)
    return [
        ("kernel closed form", _closed_form_loop, _closed_form_numpy, args_k),
        ("kappa and kappa-dot", _kappa_loop, _kappa_numpy, args_kap),
        ("r-dot zero scan", _scan_loop, _scan_numpy, args_scan),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="time samples for the array kernels")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _accel.numba is None:
        print("numba is not installed; only the numpy path is available")
        return
    params = ModelParams(alpha=0.01, mu=5.0, v=0.01, lam=0.25)
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}{'max |diff|':>14}")
    for name, fast, slow, fargs in cases(params, args.n):
        a, b = fast(*fargs), slow(*fargs)
        if isinstance(a, tuple):
            diff = max(float(np.max(np.abs(x - y))) for x, y in zip(a, b))
        else:
            diff = float(np.max(np.abs(a - b))) if a.size else 0.0
        tf = best_of(lambda: fast(*fargs), args.repeat)
        ts = best_of(lambda: slow(*fargs), args.repeat)
        print(f"{name:<22}{tf * 1e3:>12.3f}{ts * 1e3:>12.3f}{ts / tf:>10.2f}{diff:>14.3e}")


if __name__ == "__main__":
    main()
