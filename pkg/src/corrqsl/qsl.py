"""Quantum speed limit bounds built on the relative-purity angle.

Two routes: a generic one (angle, time-averaged norms of rho-dot from its
singular values, ML/MT/unified bounds) valid for any amplitudes ``c_e, c_g``,
and the closed expression for the correlated state with c_e = c_g = 1/sqrt(2).
They agree once the latter carries the factor tau.
"""
from dataclasses import asdict, dataclass
import math

import numpy as np

from .dynamics import coherence_l1, generator_stack, kappa, kappa_arrays, reduced_state
from .kernels import prefactors
from .params import INV_SQRT2
from .quadrature import initial_mesh, integrate

AS_PRINTED = "as_printed"
WITH_TAU = "derived_with_tau_factor"
CONVENTIONS = (AS_PRINTED, WITH_TAU)
_ALIASES = {
    "as_printed": AS_PRINTED, "as-printed": AS_PRINTED,
    "derived_with_tau_factor": WITH_TAU, "with-tau-factor": WITH_TAU,
    "with_tau_factor": WITH_TAU, "derived-with-tau-factor": WITH_TAU,
}
NORMS = ("op", "tr", "hs")


def normalize_convention(name):
    try:
        return _ALIASES[str(name).strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown convention {name!r}; expected one of as-printed, with-tau-factor"
        ) from None


@dataclass(frozen=True)
class QslReport:
    tau: float
    theta: float
    lambda_op: float
    lambda_tr: float
    lambda_hs: float
    tau_ml: float
    tau_mt: float
    tau_unified: float
    tau_correlated: float
    convention: str
    coherence_initial: float

    def as_dict(self):
        return asdict(self)


def _tau_check(tau):
    tau = float(tau)
    if not math.isfinite(tau) or tau <= 0:
        raise ValueError(f"tau must be a finite time > 0, got {tau!r}")
    return tau


def _overlap(a, b):
    # tr[a b] for qubit states given as (p_ee, p_gg, coh)
    return a[0] * b[0] + a[1] * b[1] + 2.0 * (a[2] * b[2].conjugate()).real


def purity_gap(rho0, rhot):
    """``(tr[rho0^2], tr[rho0 rhot], tr[rho0 (rho0 - rhot)])``.

    The gap is formed from entry differences so it keeps full relative
    precision when the two states are close.
    """
    a = (rho0.p_ee, rho0.p_gg, rho0.coh)
    b = (rhot.p_ee, rhot.p_gg, rhot.coh)
    diff = (a[0] - b[0], a[1] - b[1], a[2] - b[2])
    return _overlap(a, a), _overlap(a, b), _overlap(a, diff)


def relative_purity_angle(rho0, rhot):
    """arccos(sqrt(tr[rho0 rhot] / tr[rho0^2])), in [0, pi/2].

    Evaluated as atan2(sqrt(gap), sqrt(overlap)); the ratio is clamped to
    [0, 1], so states with tr[rho0 rhot] > tr[rho0^2] give 0.
    """
    purity, overlap, gap = purity_gap(rho0, rhot)
    if not purity > 0:
        raise ValueError("initial state has zero purity")
    return math.atan2(math.sqrt(max(gap, 0.0)), math.sqrt(max(overlap, 0.0)))


def matrix_norms(m):
    """Operator, trace and Hilbert-Schmidt norms of 2x2 complex matrices.

    Works on a single ``(2, 2)`` matrix or a stack ``(..., 2, 2)``. Singular
    values come from the closed form sigma_1,2 = (q +- d) / 2 with
    q^2 = |a + e d*|^2 + |b - e c*|^2 and d^2 = |a - e d*|^2 + |b + e c*|^2,
    e = exp(i arg det), which avoids the cancellation in F^2 - 2|det|.
    """
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    phase = np.exp(1j * np.angle(a * d - b * c))
    q = np.hypot(np.abs(a + phase * d.conj()), np.abs(b - phase * c.conj()))
    dd = np.hypot(np.abs(a - phase * d.conj()), np.abs(b + phase * c.conj()))
    s1 = 0.5 * (q + dd)
    s2 = np.maximum(0.5 * (q - dd), 0.0)
    op, tr, hs = s1, s1 + s2, np.hypot(s1, s2)
    if op.ndim == 0:
        return float(op), float(tr), float(hs)
    return op, tr, hs


def _time_mesh(params, tau):
    # phase rotation needs panels <= pi / (8 omega_0); the kernels vary on 1/omega_c
    width = min(tau, 0.5 / params.omega_c)
    if params.omega_0 > 0:
        width = min(width, math.pi / (8.0 * params.omega_0))
    edges = initial_mesh(0.0, tau, width)
    # graded breakpoints around the Gaussian decay time of exp(-r), r ~ curv t^2
    curv = 0.5 * prefactors(params)[0] * params.mu * (params.mu + 1.0) * params.omega_c**2
    if curv > 0:
        t_dec = 1.0 / math.sqrt(curv)
        graded = t_dec * 2.0 ** np.arange(-4, 64)
        graded = graded[graded < min(width, tau)]
        edges = np.union1d(edges, graded)
    return edges


def averaged_norms(params, tau, epsabs=1e-8, epsrel=1e-10):
    """Time averages over [0, tau] of the op, tr and hs norms of rho-dot."""
    tau = _tau_check(tau)

    def integrand(t):
        return np.vstack(matrix_norms(generator_stack(params, t)))

    vals, _ = integrate(integrand, _time_mesh(params, tau), epsabs=epsabs, epsrel=epsrel)
    return dict(zip(NORMS, (float(x) / tau for x in vals)))


def averaged_norm(params, tau, which="op"):
    if which not in NORMS:
        raise ValueError(f"which must be one of {NORMS}, got {which!r}")
    return averaged_norms(params, tau)[which]


def kappa_dot_path_length(params, tau, epsabs=1e-8, epsrel=1e-10):
    """Integral of |kappa-dot| over [0, tau]."""
    tau = _tau_check(tau)
    value, _ = integrate(lambda t: np.abs(kappa_arrays(params, t)[1]),
                         _time_mesh(params, tau), epsabs=epsabs, epsrel=epsrel)
    return value


def _bound(inv_speed, distance):
    # a state that never moves has no bound to report
    if distance == 0.0:
        return 0.0
    return inv_speed * distance


def _generic(params, tau):
    rho0 = reduced_state(params, 0.0)
    rhot = reduced_state(params, tau)
    purity, _, _ = purity_gap(rho0, rhot)
    theta = relative_purity_angle(rho0, rhot)
    distance = math.sin(theta) ** 2 * purity
    lam = averaged_norms(params, tau)
    inv = {k: (math.inf if v == 0.0 else 1.0 / v) for k, v in lam.items()}
    ml = _bound(max(inv["op"], inv["tr"]), distance)
    mt = _bound(inv["hs"], distance)
    unified = _bound(max(inv.values()), distance)
    return theta, lam, ml, mt, unified, rho0


def qsl_ml(params, tau):
    return _generic(params, _tau_check(tau))[2]


def qsl_mt(params, tau):
    return _generic(params, _tau_check(tau))[3]


def qsl_unified(params, tau):
    return _generic(params, _tau_check(tau))[4]


def _require_balanced(params):
    if abs(params.c_e - INV_SQRT2) > 1e-12 or abs(params.c_g - INV_SQRT2) > 1e-12:
        raise ValueError("the correlated-state formula needs c_e = c_g = 1/sqrt(2)")


def qsl_from_coherence(coherence, kappa_tau, path_length, tau, convention=AS_PRINTED):
    """(C0^2 - C0 Re kappa(tau)) / int |kappa-dot|, with C0 the initial l1 coherence.

    A negative numerator (overlap above the initial purity) is clamped to 0,
    matching the clamped angle of the generic route.
    """
    convention = normalize_convention(convention)
    numerator = max(coherence * coherence - coherence * kappa_tau.real, 0.0)
    value = 0.0 if numerator == 0.0 else numerator / path_length
    if convention == WITH_TAU:
        value *= tau
    return value


def qsl_correlated(params, tau, convention=AS_PRINTED):
    """Speed-limit time of the correlated initial state (c_e = c_g = 1/sqrt(2)).

    ``as_printed`` omits the factor tau that the generic unified bound carries;
    ``derived_with_tau_factor`` includes it.
    """
    tau = _tau_check(tau)
    _require_balanced(params)
    k0 = kappa(params, 0.0)
    if k0.imag != 0.0 or k0.real < 0.0:
        raise AssertionError(f"kappa(0) must be real and non-negative, got {k0!r}")
    return qsl_from_coherence(abs(k0), kappa(params, tau), kappa_dot_path_length(params, tau),
                              tau, convention)


def qsl_consistency_check(params, tau, rtol=1e-8):
    """Closed correlated-state expression (with tau) against the generic unified bound."""
    tau = _tau_check(tau)
    special = qsl_correlated(params, tau, WITH_TAU)
    generic = qsl_unified(params, tau)
    return abs(special - generic) <= rtol * max(abs(special), abs(generic)) or special == generic


def qsl_report(params, tau, convention=AS_PRINTED):
    tau = _tau_check(tau)
    convention = normalize_convention(convention)
    theta, lam, ml, mt, unified, rho0 = _generic(params, tau)
    try:
        correlated = qsl_correlated(params, tau, convention)
    except ValueError:
        correlated = math.nan
    return QslReport(
        tau=tau, theta=theta,
        lambda_op=lam["op"], lambda_tr=lam["tr"], lambda_hs=lam["hs"],
        tau_ml=ml, tau_mt=mt, tau_unified=unified,
        tau_correlated=correlated, convention=convention,
        coherence_initial=coherence_l1(rho0),
    )
