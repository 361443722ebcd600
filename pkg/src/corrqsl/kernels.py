"""Decoherence kernels r(t), s(t), phi(t) of the super-ohmic dephasing bath.

Closed forms (with their analytic time derivatives) plus an independent
frequency-domain quadrature of the defining integrals, used as an oracle.
"""
from dataclasses import dataclass
import math

import numpy as np

from ._accel import njit, pick
from .params import ModelParams, time_check
from .quadrature import QuadratureError, exp_tail_bound, initial_mesh, integrate
from .special import gamma


@dataclass(frozen=True)
class KernelValues:
    t: float
    r: float
    s: float
    phi: float
    r_dot: float
    s_dot: float
    phi_dot: float

    def as_tuple(self):
        return (self.r, self.s, self.phi, self.r_dot, self.s_dot, self.phi_dot)


def prefactors(params):
    """Amplitudes of the six closed-form terms and the constant s(0).

    Returned as a float64 array ``[c_r, c_s, c_phi, c_rdot, c_sdot, c_phidot, s0]``.
    """
    a, mu, chi, wc = params.alpha, params.mu, params.chi, params.omega_c
    sa = math.sqrt(a)
    c_r = 4.0 * a * gamma(mu) * wc**mu
    c_s = 2.0 * sa * gamma(chi) * wc**chi
    c_phi = sa * gamma(chi) * wc**chi
    c_rdot = 4.0 * a * gamma(mu + 1.0) * wc ** (mu + 1.0)
    c_sdot = 2.0 * sa * gamma(chi + 1.0) * wc ** (chi + 1.0)
    c_phidot = sa * gamma(chi + 1.0) * wc ** (chi + 1.0)
    s0 = -0.5 * wc**params.v * gamma(params.v)
    return np.array([c_r, c_s, c_phi, c_rdot, c_sdot, c_phidot, s0])


def _closed_form_numpy(t, mu, chi, omega_c, pref):
    x = omega_c * t
    th = np.arctan(x)
    lg = np.log1p(x * x)

    def one_minus(p):
        # 1 - cos(p th) (1+x^2)^(-p/2), free of cancellation at small t
        return 2.0 * np.sin(0.5 * p * th) ** 2 - np.cos(p * th) * np.expm1(-0.5 * p * lg)

    def damped(p, trig):
        return trig(p * th) * np.exp(-0.5 * p * lg)

    out = np.empty((6, t.size))
    out[0] = pref[0] * one_minus(mu)
    out[1] = pref[1] * one_minus(chi) + pref[6]
    out[2] = pref[2] * damped(chi, np.sin)
    out[3] = pref[3] * damped(mu + 1.0, np.sin)
    out[4] = pref[4] * damped(chi + 1.0, np.sin)
    out[5] = pref[5] * damped(chi + 1.0, np.cos)
    return out


@njit
def _closed_form_loop(t, mu, chi, omega_c, pref):
    n = t.size
    out = np.empty((6, n))
    for i in range(n):
        x = omega_c * t[i]
        th = math.atan(x)
        lg = math.log1p(x * x)
        out[0, i] = pref[0] * (2.0 * math.sin(0.5 * mu * th) ** 2
                               - math.cos(mu * th) * math.expm1(-0.5 * mu * lg))
        out[1, i] = pref[1] * (2.0 * math.sin(0.5 * chi * th) ** 2
                               - math.cos(chi * th) * math.expm1(-0.5 * chi * lg)) + pref[6]
        env_chi = math.exp(-0.5 * chi * lg)
        env_mu1 = math.exp(-0.5 * (mu + 1.0) * lg)
        env_chi1 = math.exp(-0.5 * (chi + 1.0) * lg)
        out[2, i] = pref[2] * math.sin(chi * th) * env_chi
        out[3, i] = pref[3] * math.sin((mu + 1.0) * th) * env_mu1
        out[4, i] = pref[4] * math.sin((chi + 1.0) * th) * env_chi1
        out[5, i] = pref[5] * math.cos((chi + 1.0) * th) * env_chi1
    return out


_closed_form_kernel = pick(_closed_form_loop, _closed_form_numpy)


def kernel_arrays(params, t):
    """Rows ``r, s, phi, r_dot, s_dot, phi_dot`` on the time grid ``t``.

    No validation of ``t``; negative times give the analytic continuation.
    """
    t = np.ascontiguousarray(t, dtype=float).ravel()
    return _closed_form_kernel(t, params.mu, params.chi, params.omega_c, prefactors(params))


def kernel_closed_form(params, t):
    """Kernels and their derivatives at time ``t >= 0`` from the closed forms."""
    t = time_check(t)
    row = kernel_arrays(params, np.array([t]))[:, 0]
    return KernelValues(t, *map(float, row))


def r_dot(params, t):
    """Analytic derivative of r; its sign decides where distinguishability grows."""
    t = np.ascontiguousarray(t, dtype=float).ravel()
    pref = prefactors(params)[3]
    x = params.omega_c * t
    p = params.mu + 1.0
    return pref * np.sin(p * np.arctan(x)) * np.exp(-0.5 * p * np.log1p(x * x))


# ----------------------------------------------------------------------------
# quadrature oracle

def spectral_density(w, params):
    """Effective coupling J(w) = sqrt(alpha) w^((mu-1)/2) exp(-w / 2 omega_c)."""
    return math.sqrt(params.alpha) * w ** (0.5 * (params.mu - 1.0)) * np.exp(-0.5 * w / params.omega_c)


def state_function(w, params):
    """Displacement profile f(w) = w^((v-1)/2) exp(-w / 2 omega_c)."""
    return w ** (0.5 * (params.v - 1.0)) * np.exp(-0.5 * w / params.omega_c)


def _vacuum_norm(params, w_split, w_max, epsabs, epsrel):
    # integral of f^2 over [0, w_max]; the w^(v-1) endpoint singularity is removed
    # on [0, w_split] by u = w^v, dw w^(v-1) = du / v
    v, wc = params.v, params.omega_c
    upper = w_split**v

    def substituted(u):
        return np.exp(-np.exp(np.log(u) / v) / wc) / v

    head, e1 = integrate(substituted, initial_mesh(0.0, upper, upper / 8.0),
                         epsabs=0.5 * epsabs, epsrel=epsrel)
    tail, e2 = integrate(lambda w: state_function(w, params) ** 2,
                         initial_mesh(w_split, w_max, wc), epsabs=0.5 * epsabs, epsrel=epsrel)
    return head + tail, e1 + e2


def kernel_quadrature(params, t, epsabs=1e-9, epsrel=1e-13):
    """Kernels by direct adaptive quadrature of the frequency integrals.

    Integrates on ``[0, w_max]`` with ``w_max = omega_c * max(50, 50 (mu + v))``
    and panels no wider than ``pi / (4 t)``; the truncated exponential tail is
    bounded analytically and must stay below half the tolerance. Raises
    ``QuadratureError`` when the tolerance cannot be met.
    """
    t = time_check(t)
    wc, mu, chi, v = params.omega_c, params.mu, params.chi, params.v
    a = params.alpha
    sa = math.sqrt(a)
    w_max = wc * max(50.0, 50.0 * (mu + v))
    # (power of w, bound on the non-exponential prefactor) per integrand
    tails = [(mu - 1.0, 8.0 * a), (chi - 1.0, 4.0 * sa), (chi - 1.0, sa),
             (mu, 4.0 * a), (chi, 2.0 * sa), (chi, sa), (v - 1.0, 0.5)]
    while max(k * exp_tail_bound(p, w_max, wc) for p, k in tails) > 0.5 * epsabs:
        w_max *= 2.0

    def integrand(w):
        jj = spectral_density(w, params)
        ff = state_function(w, params)
        j2 = jj * jj
        jf = jj * ff
        wt = w * t
        one_minus_cos = 2.0 * np.sin(0.5 * wt) ** 2
        sin_wt = np.sin(wt)
        cos_wt = np.cos(wt)
        return np.vstack([
            4.0 * j2 * one_minus_cos,
            2.0 * jf * one_minus_cos,
            jf * sin_wt,
            4.0 * j2 * w * sin_wt,
            2.0 * jf * w * sin_wt,
            jf * w * cos_wt,
        ])

    width = wc if t == 0 else min(wc, math.pi / (4.0 * t))
    vals, _ = integrate(integrand, initial_mesh(0.0, w_max, width), epsabs=0.5 * epsabs, epsrel=epsrel)
    norm, _ = _vacuum_norm(params, min(wc, w_max), w_max, epsabs, epsrel)
    r, s1, phi, rd, sd, phd = map(float, vals)
    return KernelValues(t, r, s1 - 0.5 * norm, phi, rd, sd, phd)


__all__ = [
    "KernelValues", "QuadratureError", "kernel_arrays", "kernel_closed_form",
    "kernel_quadrature", "prefactors", "r_dot", "spectral_density", "state_function",
]
