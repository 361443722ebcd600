"""Trace distance, information-flow rate and the BLP non-Markovianity measure.

The optimal pair is the evolved |+>, |-> pair of the uncorrelated dynamics,
whose distance is |kappa_0(t)|**exponent = exp(-exponent * r(t)). Growth of
the distance happens exactly where r decreases, so intervals are located from
the sign changes of the analytic r-dot.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ._accel import njit, pick
from .kernels import kernel_arrays, prefactors
from .params import time_check

BISECT_TOL = 1e-10


@dataclass(frozen=True)
class NonMarkovReport:
    n_value: float
    intervals: tuple = field(default_factory=tuple)
    horizon: float = 0.0
    exponent: int = 2
    converged: bool = True

    def as_dict(self):
        return {
            "n_value": self.n_value,
            "intervals": [list(iv) for iv in self.intervals],
            "horizon": self.horizon,
            "exponent": self.exponent,
            "converged": self.converged,
        }


def _check_exponent(exponent):
    if exponent not in (1, 2):
        raise ValueError(f"exponent must be 1 or 2, got {exponent!r}")
    return int(exponent)


def trace_distance(a, b):
    """Half the trace norm of ``a - b`` for two qubit states."""
    return math.hypot(a.p_ee - b.p_ee, abs(a.coh - b.coh))


def pair_distance_arrays(params, t, exponent=2):
    exponent = _check_exponent(exponent)
    r = kernel_arrays(params, t)[0]
    return np.exp(-exponent * r)


def optimal_pair_distance(params, t, exponent=2):
    t = time_check(t)
    return float(pair_distance_arrays(params, np.array([t]), exponent)[0])


def sigma_arrays(params, t, exponent=2):
    exponent = _check_exponent(exponent)
    k = kernel_arrays(params, t)
    return -exponent * k[3] * np.exp(-exponent * k[0])


def sigma(params, t, exponent=2):
    """Rate of change of the optimal-pair distance."""
    t = time_check(t)
    return float(sigma_arrays(params, np.array([t]), exponent)[0])


# ----------------------------------------------------------------------------
# zeros of r-dot: dense sign scan followed by bisection

def _rdot_numpy(t, amp, p, omega_c):
    x = omega_c * t
    return amp * np.sin(p * np.arctan(x)) * np.exp(-0.5 * p * np.log1p(x * x))


def _scan_numpy(horizon, step, amp, p, omega_c, tol):
    n = int(math.ceil(horizon / step))
    grid = np.minimum(np.arange(n + 1) * step, horizon)
    sgn = np.sign(_rdot_numpy(grid, amp, p, omega_c))
    nz = np.nonzero(sgn)[0]
    if nz.size < 2:
        return np.empty(0)
    flips = np.nonzero(sgn[nz[1:]] != sgn[nz[:-1]])[0]
    lo = grid[nz[flips]]
    hi = grid[nz[flips + 1]]
    s_lo = sgn[nz[flips]]
    while True:
        wide = (hi - lo) > tol
        if not wide.any():
            break
        mid = 0.5 * (lo + hi)
        fm = np.sign(_rdot_numpy(mid, amp, p, omega_c))
        same = (fm == s_lo) & wide
        other = (fm == -s_lo) & wide
        exact = (fm == 0) & wide
        lo = np.where(same, mid, lo)
        hi = np.where(other, mid, hi)
        lo = np.where(exact, mid, lo)
        hi = np.where(exact, mid, hi)
    return 0.5 * (lo + hi)


@njit
def _rdot_scalar(t, amp, p, omega_c):
    x = omega_c * t
    return amp * math.sin(p * math.atan(x)) * math.exp(-0.5 * p * math.log1p(x * x))


@njit
def _sign(x):
    if x > 0.0:
        return 1
    if x < 0.0:
        return -1
    return 0


@njit
def _scan_loop(horizon, step, amp, p, omega_c, tol):
    n = int(math.ceil(horizon / step))
    zeros = np.empty(n + 1)
    count = 0
    last_t = 0.0
    last_s = 0
    for i in range(n + 1):
        t = min(i * step, horizon)
        s = _sign(_rdot_scalar(t, amp, p, omega_c))
        if s == 0:
            continue
        if last_s != 0 and s != last_s:
            lo = last_t
            hi = t
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                sm = _sign(_rdot_scalar(mid, amp, p, omega_c))
                if sm == 0:
                    lo = mid
                    hi = mid
                elif sm == last_s:
                    lo = mid
                else:
                    hi = mid
            zeros[count] = 0.5 * (lo + hi)
            count += 1
        last_t = t
        last_s = s
    return zeros[:count]


_scan_kernel = pick(_scan_loop, _scan_numpy)


def scan_step(params, horizon):
    return min(0.01 / params.omega_c, horizon / 1e4)


def rdot_zeros(params, horizon, step=None):
    """Sign changes of r-dot in ``(0, horizon]``, each located to 1e-10."""
    if step is None:
        step = scan_step(params, horizon)
    amp = prefactors(params)[3]
    if amp == 0.0 or horizon <= 0.0:
        return np.empty(0)
    return _scan_kernel(float(horizon), float(step), float(amp), params.mu + 1.0,
                        params.omega_c, BISECT_TOL)


def increasing_intervals(params, horizon):
    """Maximal subintervals of ``[0, horizon]`` on which r decreases."""
    zeros = rdot_zeros(params, horizon)
    edges = np.concatenate([[0.0], zeros, [horizon]])
    mids = 0.5 * (edges[:-1] + edges[1:])
    amp = prefactors(params)[3]
    falling = _rdot_numpy(mids, amp, params.mu + 1.0, params.omega_c) < 0
    return [(float(edges[i]), float(edges[i + 1])) for i in np.nonzero(falling)[0]
            if edges[i + 1] > edges[i]]


def _measure(params, horizon, exponent):
    intervals = increasing_intervals(params, horizon)
    if not intervals:
        return 0.0, intervals
    ends = np.array(intervals).ravel()
    dist = pair_distance_arrays(params, ends, exponent).reshape(-1, 2)
    total = float(np.sum(np.maximum(dist[:, 1] - dist[:, 0], 0.0)))
    return total, intervals


def non_markovianity(params, horizon=None, exponent=2, tol=1e-6, max_doublings=4):
    """BLP measure of the optimal |+>, |-> pair up to a self-checked horizon.

    The horizon (default ``100 / omega_c``) is doubled until the measure
    changes by less than ``tol``; after ``max_doublings`` without that the
    report carries ``converged=False``.
    """
    exponent = _check_exponent(exponent)
    if horizon is None:
        horizon = 100.0 / params.omega_c
    horizon = float(horizon)
    if not horizon > 0:
        raise ValueError(f"horizon must be > 0, got {horizon!r}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    n_prev, _ = _measure(params, horizon, exponent)
    converged = False
    for _ in range(max_doublings):
        horizon *= 2.0
        n_cur, intervals = _measure(params, horizon, exponent)
        if abs(n_cur - n_prev) < tol:
            converged = True
            break
        n_prev = n_cur
    return NonMarkovReport(n_cur, tuple(intervals), horizon, exponent, converged)


def non_markovianity_partial(params, tau, exponent=2):
    """Measure restricted to the window ``[0, tau]``."""
    exponent = _check_exponent(exponent)
    tau = time_check(tau, "tau")
    if tau == 0.0:
        return 0.0
    return _measure(params, tau, exponent)[0]
