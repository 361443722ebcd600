"""Exact reduced qubit state for the correlated initial condition."""
from dataclasses import dataclass
import cmath
import math

import numpy as np

from ._accel import njit, pick
from .kernels import kernel_arrays, prefactors
from .params import time_check


@dataclass(frozen=True)
class QubitDensityMatrix:
    """Qubit state ``[[p_ee, coh], [conj(coh), 1 - p_ee]]``."""

    p_ee: float
    coh: complex

    def __post_init__(self):
        p = float(self.p_ee)
        c = complex(self.coh)
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"population p_ee={p} outside [0, 1]")
        if abs(c) ** 2 > p * (1.0 - p) + 1e-12:
            raise ValueError(f"|coh|^2={abs(c) ** 2:.3e} exceeds p_ee (1 - p_ee); state not positive")
        object.__setattr__(self, "p_ee", p)
        object.__setattr__(self, "coh", c)

    @property
    def p_gg(self):
        return 1.0 - self.p_ee

    def matrix(self):
        return np.array([[self.p_ee, self.coh], [self.coh.conjugate(), self.p_gg]], dtype=complex)

    def purity(self):
        return self.p_ee**2 + self.p_gg**2 + 2.0 * abs(self.coh) ** 2

    def eigenvalues(self):
        d = 0.5 * (self.p_ee - self.p_gg)
        rad = math.hypot(d, abs(self.coh))
        return 0.5 - rad, 0.5 + rad


def vacuum_overlap(params):
    """Re <0|D(f)|0> = exp(-1/2 int f^2) = exp(s(0)); underflows to 0 for small v."""
    return math.exp(prefactors(params)[6])


def eta(params):
    lam = params.lam
    o = vacuum_overlap(params)
    return math.sqrt((1.0 - lam) ** 2 + lam**2 + 2.0 * lam * (1.0 - lam) * o)


def _kappa_numpy(t, k, lam, inv_eta, omega_0):
    r, s, phi, rd, sd, phd = k
    rot = np.exp(-2j * omega_0 * t - r) * inv_eta
    corr = lam * np.exp(s - 2j * phi)
    bracket = (1.0 - lam) + corr
    kap = rot * bracket
    kdot = rot * ((-2j * omega_0 - rd) * bracket + corr * (sd - 2j * phd))
    return kap, kdot


@njit
def _kappa_loop(t, k, lam, inv_eta, omega_0):
    n = t.size
    kap = np.empty(n, dtype=np.complex128)
    kdot = np.empty(n, dtype=np.complex128)
    for i in range(n):
        rot = cmath.exp(complex(-k[0, i], -2.0 * omega_0 * t[i])) * inv_eta
        corr = lam * cmath.exp(complex(k[1, i], -2.0 * k[2, i]))
        bracket = (1.0 - lam) + corr
        kap[i] = rot * bracket
        kdot[i] = rot * (complex(-k[3, i], -2.0 * omega_0) * bracket
                         + corr * complex(k[4, i], -2.0 * k[5, i]))
    return kap, kdot


_kappa_kernel = pick(_kappa_loop, _kappa_numpy)


def kappa_arrays(params, t):
    """Decoherence factor and its time derivative on a time grid."""
    t = np.ascontiguousarray(t, dtype=float).ravel()
    k = kernel_arrays(params, t)
    return _kappa_kernel(t, k, params.lam, 1.0 / eta(params), params.omega_0)


def kappa(params, t):
    t = time_check(t)
    return complex(kappa_arrays(params, np.array([t]))[0][0])


def kappa_dot(params, t):
    t = time_check(t)
    return complex(kappa_arrays(params, np.array([t]))[1][0])


def coupling_amplitude(params):
    """c_e conj(c_g): the factor multiplying kappa in the off-diagonal element."""
    return params.c_e * params.c_g.conjugate()


def reduced_state(params, t):
    t = time_check(t)
    return QubitDensityMatrix(abs(params.c_e) ** 2, coupling_amplitude(params) * kappa(params, t))


def generator_stack(params, t):
    """rho-dot at each time, shape ``(n, 2, 2)``; the diagonal is identically 0."""
    _, kdot = kappa_arrays(params, t)
    off = coupling_amplitude(params) * kdot
    out = np.zeros((off.size, 2, 2), dtype=complex)
    out[:, 0, 1] = off
    out[:, 1, 0] = off.conjugate()
    return out


def generator_value(params, t):
    """Time derivative of the reduced state, as a 2x2 complex matrix."""
    t = time_check(t)
    return generator_stack(params, np.array([t]))[0]


def coherence_l1(state):
    """Sum of the moduli of the off-diagonal elements."""
    return 2.0 * abs(state.coh)
