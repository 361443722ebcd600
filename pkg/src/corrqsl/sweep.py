"""Parameter-grid experiments and the figure presets."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from datetime import datetime, timezone
import itertools
import math

import numpy as np

from . import __version__
from .distinguishability import non_markovianity, non_markovianity_partial, optimal_pair_distance
from .dynamics import coherence_l1, reduced_state
from .params import ModelParams
from .qsl import AS_PRINTED, normalize_convention, qsl_correlated

METRICS = ("non_markovianity", "qsl_correlated", "coherence_initial", "trace_distance_pair")
# user-facing axis name -> ModelParams field
PARAM_AXES = {
    "alpha": "alpha", "mu": "mu", "v": "v", "omega_c": "omega_c",
    "omega_0": "omega_0", "lambda": "lam",
}
EXTRA_AXES = ("tau", "horizon")
DEFAULT_OPTIONS = {
    "exponent": 2,
    "convention": AS_PRINTED,
    "horizon": None,
    "tau": 1.0,
    "tol": 1e-6,
}


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in PARAM_AXES and self.name not in EXTRA_AXES:
            allowed = ", ".join([*PARAM_AXES, *EXTRA_AXES])
            raise ValueError(f"unknown axis {self.name!r}; expected one of {allowed}")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"axis {self.name}: count must be an integer >= 2")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or not self.min < self.max:
            raise ValueError(f"axis {self.name}: need finite min < max, got {self.min}, {self.max}")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"axis {self.name}: scale must be linear or log")
        if self.scale == "log" and self.min <= 0:
            raise ValueError(f"axis {self.name}: log scale needs min > 0")
        object.__setattr__(self, "count", int(self.count))

    def values(self):
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSpec:
    metric: str
    axes: tuple
    fixed: ModelParams = field(default_factory=ModelParams)
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}; expected one of {', '.join(METRICS)}")
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 2:
            raise ValueError("a sweep has one or two axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"swept parameters must be distinct, got {names}")
        unknown = set(self.options) - set(DEFAULT_OPTIONS)
        if unknown:
            raise ValueError(f"unknown sweep option(s): {', '.join(sorted(unknown))}")
        opts = {**DEFAULT_OPTIONS, **self.options}
        opts["convention"] = normalize_convention(opts["convention"])
        if opts["exponent"] not in (1, 2):
            raise ValueError("exponent must be 1 or 2")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "options", opts)

    @property
    def shape(self):
        return tuple(a.count for a in self.axes)


@dataclass(frozen=True)
class SweepRow:
    index: tuple
    values: tuple
    value: float
    converged: bool
    note: str = ""


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list
    provenance: dict

    def grid(self):
        """Metric values reshaped to the axis grid (first axis major)."""
        return np.array([r.value for r in self.rows]).reshape(self.spec.shape)

    def axis_values(self):
        return [a.values() for a in self.spec.axes]

    def summary(self):
        vals = np.array([r.value for r in self.rows])
        finite = np.isfinite(vals)
        out = {"rows": len(self.rows), "non_converged": sum(not r.converged for r in self.rows)}
        if finite.any():
            i = int(np.nanargmax(np.where(finite, vals, -np.inf)))
            out.update(min=float(np.nanmin(vals)), max=float(np.nanmax(vals)),
                       argmax=dict(zip((a.name for a in self.spec.axes), self.rows[i].values)))
        return out


def _point_params(spec, point):
    changes = {PARAM_AXES[k]: v for k, v in point.items() if k in PARAM_AXES}
    return spec.fixed.with_(**changes) if changes else spec.fixed


def evaluate_point(spec, point):
    """Metric at one grid point; returns ``(value, converged)``."""
    params = _point_params(spec, point)
    opts = spec.options
    tau = point.get("tau", opts["tau"])
    if spec.metric == "non_markovianity":
        if "tau" in point:
            return non_markovianity_partial(params, tau, opts["exponent"]), True
        horizon = point.get("horizon", opts["horizon"])
        rep = non_markovianity(params, horizon, opts["exponent"], opts["tol"])
        return rep.n_value, rep.converged
    if spec.metric == "qsl_correlated":
        return qsl_correlated(params, tau, opts["convention"]), True
    if spec.metric == "coherence_initial":
        return coherence_l1(reduced_state(params, 0.0)), True
    return optimal_pair_distance(params, tau, opts["exponent"]), True


def _evaluate_row(args):
    spec, index = args
    values = tuple(float(ax.values()[i]) for ax, i in zip(spec.axes, index))
    point = dict(zip((a.name for a in spec.axes), values))
    try:
        value, converged = evaluate_point(spec, point)
        return SweepRow(index, values, float(value), bool(converged))
    except Exception as exc:  # one bad point must not sink a long sweep
        return SweepRow(index, values, math.nan, False, f"{type(exc).__name__}: {exc}")


def _fixed_as_strings(params):
    out = {}
    for f in fields(params):
        value = getattr(params, f.name)
        out[f.name] = repr(value) if isinstance(value, complex) else value
    return out


def run_sweep(spec, workers=1):
    """Evaluate ``spec.metric`` over the full grid.

    Rows come back in lexicographic order of the axis indices whatever the
    number of ``workers``; each point is a pure function of the SweepSpec.
    """
    indices = list(itertools.product(*(range(a.count) for a in spec.axes)))
    jobs = [(spec, idx) for idx in indices]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_row, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        rows = [_evaluate_row(job) for job in jobs]
    rows.sort(key=lambda r: r.index)
    provenance = {
        "library": "corrqsl",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "fixed": _fixed_as_strings(spec.fixed),
        "options": dict(spec.options),
        "small_v": spec.fixed.small_v,
    }
    return SweepResult(spec, rows, provenance)


# ----------------------------------------------------------------------------
# presets

ALPHA_LOG = dict(min=1e-3, max=0.2, scale="log")
TAU_RANGE = dict(min=0.03, max=3.0)


def _alpha(count):
    return Axis("alpha", count=count, **ALPHA_LOG)


def _pair(name, a, b):
    return Axis(name, a, b, 2)


def _presets():
    base = ModelParams(alpha=0.01, v=0.01, omega_c=1.0, omega_0=1.0)
    corr = base.with_(lam=0.25)
    return {
        "fig1a": SweepSpec("non_markovianity", (_alpha(61), Axis("mu", 1.0, 8.0, 61)), base.with_(lam=0.0)),
        "fig1b": SweepSpec("non_markovianity", (_alpha(61), Axis("v", 0.01, 1.0, 61)),
                           base.with_(mu=5.0, lam=0.0)),
        "fig2a": SweepSpec("qsl_correlated", (Axis("mu", 1.0, 8.0, 101),), corr, {"tau": 1.0}),
        "fig2b": SweepSpec("non_markovianity", (Axis("mu", 1.0, 8.0, 101),), base.with_(lam=0.0)),
        "fig3a": SweepSpec("qsl_correlated", (Axis("tau", count=101, **TAU_RANGE), _pair("mu", 5.0, 8.0)), corr),
        "fig3b": SweepSpec("non_markovianity", (Axis("tau", count=101, **TAU_RANGE), _pair("mu", 5.0, 8.0)),
                           base.with_(lam=0.0)),
        "fig4a": SweepSpec("qsl_correlated", (Axis("tau", count=101, **TAU_RANGE), Axis("lambda", 0.25, 1.0, 4)),
                           base.with_(mu=8.0)),
        "fig4b": SweepSpec("qsl_correlated", (Axis("tau", count=101, **TAU_RANGE), Axis("lambda", 0.25, 1.0, 4)),
                           base.with_(mu=5.0)),
        "fig5a": SweepSpec("qsl_correlated", (Axis("lambda", 0.0, 1.0, 101), _pair("mu", 5.0, 8.0)), base,
                           {"tau": 1.0}),
        "fig5b": SweepSpec("coherence_initial", (Axis("lambda", 0.0, 1.0, 101),), base),
        "fig6a": SweepSpec("qsl_correlated", (_alpha(101),), corr.with_(mu=5.0), {"tau": 1.0}),
        "fig6b": SweepSpec("non_markovianity", (_alpha(101),), base.with_(mu=5.0, lam=0.0)),
        "fig7a": SweepSpec("qsl_correlated", (_alpha(61), Axis("tau", count=61, **TAU_RANGE)), corr.with_(mu=8.0)),
        "fig7b": SweepSpec("qsl_correlated", (_alpha(61), Axis("tau", count=61, **TAU_RANGE)), corr.with_(mu=5.0)),
    }


FIGURES = tuple(_presets())


def figure_preset(fig_id):
    presets = _presets()
    try:
        return presets[fig_id]
    except KeyError:
        raise ValueError(f"unknown figure {fig_id!r}; expected one of {', '.join(presets)}") from None
