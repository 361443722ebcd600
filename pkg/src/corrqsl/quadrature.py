"""Adaptive Gauss-Kronrod (G7/K15) integration, vectorized over panels.

The integrand receives a 1-D array of nodes and returns either an array of
the same length or an ``(m, n)`` array for ``m`` simultaneous integrals that
share one panel mesh. A panel is bisected while any component needs it.
"""
import numpy as np

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 abscissae on [-1, 1]: -x0..-x6, 0, x6..x0
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_WK15 = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_WG7 = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes (x1, x3, x5) and the centre
for k, idx in enumerate((1, 3, 5)):
    _WG7[idx] = _WG[k]
    _WG7[14 - idx] = _WG[k]
_WG7[7] = _WG[3]

_EPS = np.finfo(float).eps


class QuadratureError(RuntimeError):
    """Adaptive scheme could not meet the tolerance within its panel budget."""


def _gk15(func, a, b):
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(func(x.ravel()), dtype=float)
    squeeze = fx.ndim == 1
    fx = fx.reshape((1 if squeeze else fx.shape[0], a.size, 15))
    resk = fx @ _WK15
    resg = fx @ _WG7
    resabs = np.abs(fx) @ _WK15
    resasc = np.abs(fx - 0.5 * resk[..., None]) @ _WK15
    resk *= half
    resabs *= half
    resasc *= half
    err = np.abs((resk - resg * half))
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return resk, err, floor, squeeze


def initial_mesh(a, b, max_width):
    """Uniform edges from ``a`` to ``b`` with spacing at most ``max_width``."""
    if not np.isfinite(max_width) or max_width <= 0 or max_width >= b - a:
        return np.array([a, b], dtype=float)
    n = int(np.ceil((b - a) / max_width))
    return np.linspace(a, b, n + 1)


def integrate(func, edges, epsabs=1e-9, epsrel=0.0, max_panels=400_000, max_rounds=80):
    """Integrate ``func`` over the interval spanned by the sorted ``edges``.

    Returns ``(value, error_estimate)``; both are floats for a scalar integrand
    and arrays of length ``m`` for a vector-valued one.
    """
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1].copy()
    b = edges[1:].copy()
    res, err, floor, squeeze = _gk15(func, a, b)

    for _ in range(max_rounds):
        total = res.sum(axis=1)
        total_err = err.sum(axis=1)
        tol = np.maximum(epsabs, epsrel * np.abs(total))
        if np.all(total_err <= tol):
            break
        width = b - a
        splittable = (err > 2.0 * floor) & (width > 64.0 * _EPS * np.maximum(np.abs(a), np.abs(b)))[None, :]
        pick = np.zeros(a.size, dtype=bool)
        for k in np.nonzero(total_err > tol)[0]:
            order = np.argsort(-err[k], kind="stable")
            # smallest set of worst panels whose removal leaves <= tol/2
            excess = total_err[k] - 0.5 * tol[k]
            cum = np.cumsum(err[k][order])
            n_take = int(np.searchsorted(cum, excess)) + 1
            chosen = order[:n_take]
            pick[chosen[splittable[k][chosen]]] = True
        if not pick.any():
            # every offending panel sits at the round-off floor
            if np.all(total_err <= np.maximum(tol, 10.0 * floor.sum(axis=1))):
                break
            raise QuadratureError(
                f"round-off limited: error {total_err.max():.3e} exceeds tolerance {tol.max():.3e}"
            )
        if a.size + pick.sum() > max_panels:
            raise QuadratureError(
                f"panel budget {max_panels} exhausted; error {total_err.max():.3e}, "
                f"tolerance {tol.max():.3e}"
            )
        mid = 0.5 * (a[pick] + b[pick])
        new_a = np.concatenate([a[pick], mid])
        new_b = np.concatenate([mid, b[pick]])
        r2, e2, f2, _ = _gk15(func, new_a, new_b)
        keep = ~pick
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        res = np.concatenate([res[:, keep], r2], axis=1)
        err = np.concatenate([err[:, keep], e2], axis=1)
        floor = np.concatenate([floor[:, keep], f2], axis=1)
    else:
        raise QuadratureError(f"no convergence after {max_rounds} refinement rounds")

    # sort by position so the summation order does not depend on refinement history
    order = np.argsort(a, kind="stable")
    value = res[:, order].sum(axis=1)
    error = err.sum(axis=1)
    if squeeze:
        return float(value[0]), float(error[0])
    return value, error


def exp_tail_bound(power, w_max, omega_c):
    """Bound on the integral of w**power * exp(-w/omega_c) over [w_max, inf).

    Valid once ``w_max >= 2 * power * omega_c``; the bound is
    ``2 * w_max**power * omega_c * exp(-w_max/omega_c)``.
    """
    if power > 0 and w_max < 2.0 * power * omega_c:
        raise ValueError("tail bound needs w_max >= 2 * power * omega_c")
    return 2.0 * w_max**power * omega_c * np.exp(-w_max / omega_c)
