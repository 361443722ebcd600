"""Physical parameter bundle shared by every computation."""
from dataclasses import dataclass, fields, replace
import math

INV_SQRT2 = 1.0 / math.sqrt(2.0)
SMALL_V = 1e-4


class ParameterError(ValueError):
    """Invalid model parameter. ``name`` is the offending field."""

    def __init__(self, name, message):
        super().__init__(f"{name}: {message}")
        self.name = name


@dataclass(frozen=True)
class ModelParams:
    """Dephasing-qubit model with a correlated initial system-bath state.

    ``alpha`` coupling strength, ``mu`` ohmicity (super-ohmic only, mu > 0),
    ``v`` exponent of the displacement profile, ``omega_c`` bath cutoff,
    ``omega_0`` qubit frequency, ``lam`` initial correlation in [0, 1],
    ``c_e``/``c_g`` system amplitudes. Units with hbar = 1.
    """

    alpha: float = 0.01
    mu: float = 5.0
    v: float = 0.01
    omega_c: float = 1.0
    omega_0: float = 1.0
    lam: float = 0.0
    c_e: complex = INV_SQRT2
    c_g: complex = INV_SQRT2

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("c_e", "c_g"):
                value = complex(value)
                if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                    raise ParameterError(f.name, "must be finite")
            else:
                value = float(value)
                if not math.isfinite(value):
                    raise ParameterError(f.name, "must be finite")
            object.__setattr__(self, f.name, value)
        if self.alpha < 0:
            raise ParameterError("alpha", f"must be >= 0, got {self.alpha}")
        if self.mu <= 0:
            raise ParameterError("mu", f"must be > 0 (super-ohmic), got {self.mu}")
        if self.v <= 0:
            raise ParameterError("v", f"must be > 0, got {self.v}")
        if self.omega_c <= 0:
            raise ParameterError("omega_c", f"must be > 0, got {self.omega_c}")
        if self.omega_0 < 0:
            raise ParameterError("omega_0", f"must be >= 0, got {self.omega_0}")
        if not 0.0 <= self.lam <= 1.0:
            raise ParameterError("lambda", f"must lie in [0, 1], got {self.lam}")
        norm = abs(self.c_e) ** 2 + abs(self.c_g) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ParameterError("c_e", f"|c_e|^2 + |c_g|^2 must be 1, got {norm!r}")

    @property
    def chi(self):
        return 0.5 * (self.mu + self.v)

    @property
    def small_v(self):
        """True when exp(s(0)) underflows; the overlap term is then exactly 0."""
        return self.v < SMALL_V

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value
        return out


def time_check(t, name="t"):
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"{name} must be a finite time >= 0, got {t!r}")
    return t
