import math

import numpy as np
from hypothesis import strategies as st

from corrqsl import ModelParams


def random_params(rng, balanced=True, mu_range=(0.5, 8.0)):
    kw = dict(
        alpha=float(10 ** rng.uniform(-3, math.log10(0.2))),
        mu=float(rng.uniform(*mu_range)),
        v=float(10 ** rng.uniform(-2.3, 0.0)),
        omega_c=float(rng.uniform(0.5, 2.0)),
        omega_0=float(rng.uniform(0.0, 2.0)),
        lam=float(rng.uniform(0.0, 1.0)),
    )
    if not balanced:
        theta, phase = rng.uniform(0.05, math.pi / 2 - 0.05), rng.uniform(0, 2 * math.pi)
        kw.update(c_e=math.cos(theta), c_g=math.sin(theta) * complex(math.cos(phase), math.sin(phase)))
    return ModelParams(**kw)


@st.composite
def model_params(draw, balanced=True, mu_min=0.5):
    kw = dict(
        alpha=draw(st.floats(0.0, 0.2)),
        mu=draw(st.floats(mu_min, 8.0)),
        v=draw(st.floats(0.005, 2.0)),
        omega_c=draw(st.floats(0.5, 2.0)),
        omega_0=draw(st.floats(0.0, 2.0)),
        lam=draw(st.floats(0.0, 1.0)),
    )
    if not balanced:
        theta = draw(st.floats(0.0, math.pi / 2))
        phase = draw(st.floats(0.0, 2 * math.pi))
        kw.update(c_e=math.cos(theta), c_g=math.sin(theta) * complex(math.cos(phase), math.sin(phase)))
    return ModelParams(**kw)


def rng(seed):
    return np.random.default_rng(seed)
