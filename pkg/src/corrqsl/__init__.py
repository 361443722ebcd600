"""Reduced dynamics, non-Markovianity and speed limits of a dephasing qubit
whose initial state is correlated with a bosonic bath."""

__version__ = "0.1.0"

from .params import ModelParams, ParameterError  # noqa: E402
from .quadrature import QuadratureError  # noqa: E402
from .kernels import KernelValues, kernel_closed_form, kernel_quadrature  # noqa: E402
from .dynamics import (  # noqa: E402
    QubitDensityMatrix, coherence_l1, eta, generator_value, kappa, kappa_dot, reduced_state,
)
from .distinguishability import (  # noqa: E402
    NonMarkovReport, non_markovianity, non_markovianity_partial, optimal_pair_distance, sigma,
    trace_distance,
)
from .qsl import (  # noqa: E402
    QslReport, averaged_norm, matrix_norms, qsl_consistency_check, qsl_correlated, qsl_ml,
    qsl_mt, qsl_report, qsl_unified, relative_purity_angle,
)
from .special import gamma  # noqa: E402
