"""Euler gamma function (Lanczos approximation, g=7, 9 terms)."""
import math

_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _lanczos(x):
    # valid for x >= 0.5
    x -= 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (x + i)
    t = x + _G + 0.5
    # split the power to keep t**(x+0.5) finite up to x ~ 170
    half = t ** (0.5 * (x + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * acc


def gamma(x):
    """Gamma function for positive real ``x``.

    Raises ``ValueError`` for ``x <= 0`` and for non-finite input.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"gamma is defined here only for finite x > 0, got {x!r}")
    if x < 0.5:
        # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    return _lanczos(x)
