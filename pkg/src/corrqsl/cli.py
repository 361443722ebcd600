"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 numerical failure
(quadrature or horizon non-convergence).
"""
import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .config import ConfigError, parse_config_text, resolve
from .distinguishability import non_markovianity
from .dynamics import coherence_l1, kappa_arrays, reduced_state
from .export import fmt, sweep_to_csv, sweep_to_json, table_to_csv, table_to_json
from .kernels import kernel_closed_form, kernel_quadrature
from .quadrature import QuadratureError
from .qsl import qsl_consistency_check, qsl_report
from .svg import sweep_to_svg
from .sweep import FIGURES, METRICS, Axis, SweepSpec, figure_preset, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
KERNEL_FIELDS = ("r", "s", "phi", "r_dot", "s_dot", "phi_dot")

# CLI flag dest -> RunConfig field
_MODEL_FLAGS = {
    "alpha": "alpha", "mu": "mu", "v": "v", "omega_c": "omega_c", "omega0": "omega_0",
    "lam": "lam", "c_e": "c_e", "c_g": "c_g", "exponent": "exponent", "convention": "convention",
    "horizon": "horizon", "tol": "tol", "tau": "tau", "format": "format", "out": "out",
    "strict": "strict",
}


class NumericalFailure(RuntimeError):
    pass


def _global_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", default=argparse.SUPPRESS, help="flat key = value config file")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="treat non-converged rows as a numerical failure")
    return p


def _model_parent():
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model parameters")
    S = argparse.SUPPRESS
    g.add_argument("--alpha", type=float, default=S)
    g.add_argument("--mu", type=float, default=S)
    g.add_argument("--v", type=float, default=S)
    g.add_argument("--omega-c", dest="omega_c", type=float, default=S)
    g.add_argument("--omega0", "--omega-0", dest="omega0", type=float, default=S)
    g.add_argument("--lambda", dest="lam", type=float, default=S)
    g.add_argument("--c-e", dest="c_e", type=complex, default=S, help="excited amplitude, e.g. 0.6")
    g.add_argument("--c-g", dest="c_g", type=complex, default=S, help="ground amplitude, e.g. 0.8j")
    return p


def _build_parser():
    glob, model = _global_parent(), _model_parent()
    S = argparse.SUPPRESS
    parser = argparse.ArgumentParser(prog="corrqsl", parents=[glob],
                                     description="Correlated-bath dephasing qubit: kernels, "
                                                 "non-Markovianity and speed limits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernels", parents=[glob, model], help="bath kernels and quadrature residuals")
    p.add_argument("--t", type=float, nargs="+", default=[0.0, 1.0], metavar="T")

    p = sub.add_parser("kappa", parents=[glob, model], help="coherence factor and reduced state")
    p.add_argument("--t", type=float, nargs="+", default=[0.0, 1.0], metavar="T")

    p = sub.add_parser("nonmarkov", parents=[glob, model], help="non-Markovianity measure")
    p.add_argument("--horizon", type=float, default=S)
    p.add_argument("--exponent", type=int, choices=(1, 2), default=S)
    p.add_argument("--tol", type=float, default=S)

    p = sub.add_parser("qsl", parents=[glob, model], help="speed-limit bounds")
    p.add_argument("--tau", type=float, default=S)
    p.add_argument("--convention", choices=("as-printed", "with-tau-factor"), default=S)

    p = sub.add_parser("sweep", parents=[glob, model], help="custom parameter sweep")
    p.add_argument("--metric", choices=METRICS, required=True)
    p.add_argument("--axis", action="append", required=True, metavar="NAME:MIN:MAX:COUNT[:log]")
    p.add_argument("--tau", type=float, default=S)
    p.add_argument("--horizon", type=float, default=S)
    p.add_argument("--exponent", type=int, choices=(1, 2), default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--convention", choices=("as-printed", "with-tau-factor"), default=S)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("reproduce", parents=[glob], help="run a figure preset")
    p.add_argument("figure", metavar="FIG", help=f"one of {', '.join(FIGURES)}")
    p.add_argument("outdir", metavar="OUTDIR")
    p.add_argument("--workers", type=int, default=1)
    return parser


def parse_axis(text):
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ValueError(f"axis {text!r}: expected NAME:MIN:MAX:COUNT[:log]")
    scale = "linear"
    if len(parts) == 5:
        if parts[4] not in ("log", "linear"):
            raise ValueError(f"axis {text!r}: scale must be log or linear")
        scale = parts[4]
    try:
        lo, hi, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise ValueError(f"axis {text!r}: MIN and MAX must be numbers and COUNT an integer") from None
    return Axis(parts[0], lo, hi, count, scale)


def _config(args):
    overrides = {_MODEL_FLAGS[k]: v for k, v in vars(args).items() if k in _MODEL_FLAGS}
    path = getattr(args, "config", None)
    if path is None:
        return resolve(overrides=overrides)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", key="config") from None
    values, lines = parse_config_text(text, source=path)
    return resolve(values, lines, overrides, source=path)


def _emit(cfg, text):
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(cfg, columns, rows, meta=None):
    _emit(cfg, table_to_json(columns, rows, meta) if cfg.format == "json" else table_to_csv(columns, rows))


def cmd_kernels(cfg, ts):
    params = cfg.params()
    columns = ["t", *KERNEL_FIELDS, *(f"{k}_residual" for k in KERNEL_FIELDS)]
    rows = []
    for t in ts:
        closed = kernel_closed_form(params, t).as_tuple()
        quad = kernel_quadrature(params, t).as_tuple()
        rows.append([float(t), *closed, *(c - q for c, q in zip(closed, quad))])
    _table(cfg, columns, rows)
    return EXIT_OK


def cmd_kappa(cfg, ts):
    params = cfg.params()
    kap, kdot = kappa_arrays(params, np.array([float(t) for t in ts]))
    columns = ["t", "kappa_re", "kappa_im", "kappa_abs", "kappa_dot_re", "kappa_dot_im",
               "p_ee", "coherence_l1"]
    rows = []
    for t, k, kd in zip(ts, kap, kdot):
        state = reduced_state(params, t)
        rows.append([float(t), k.real, k.imag, abs(k), kd.real, kd.imag, state.p_ee, coherence_l1(state)])
    _table(cfg, columns, [[float(x) for x in row] for row in rows])
    return EXIT_OK


def cmd_nonmarkov(cfg, horizon=None):
    rep = non_markovianity(cfg.params(), horizon, cfg.exponent, cfg.tol)
    if cfg.format == "json":
        _emit(cfg, json.dumps(rep.as_dict(), indent=2) + "\n")
    else:
        intervals = ";".join(f"{fmt(a)}:{fmt(b)}" for a, b in rep.intervals)
        _emit(cfg, table_to_csv(["n_value", "horizon", "exponent", "converged", "intervals"],
                                [[rep.n_value, rep.horizon, rep.exponent, rep.converged, intervals]]))
    if not rep.converged:
        raise NumericalFailure(f"non-Markovianity did not converge by horizon {rep.horizon:g} "
                               f"(tol {cfg.tol:g})")
    return EXIT_OK


def cmd_qsl(cfg):
    params = cfg.params()
    rep = qsl_report(params, cfg.tau, cfg.convention)
    try:
        consistent = qsl_consistency_check(params, cfg.tau)
    except ValueError:
        consistent = None  # closed formula undefined for unbalanced amplitudes
    doc = {**rep.as_dict(), "consistency_check": consistent}
    if cfg.format == "json":
        _emit(cfg, json.dumps({k: (v if not isinstance(v, float) or np.isfinite(v) else str(v))
                               for k, v in doc.items()}, indent=2) + "\n")
    else:
        cols = list(doc)
        _emit(cfg, table_to_csv(cols, [["" if doc[c] is None else doc[c] for c in cols]]))
    return EXIT_OK


def _check_strict(cfg, result):
    bad = sum(not r.converged for r in result.rows)
    if bad and cfg.strict:
        raise NumericalFailure(f"{bad} of {len(result.rows)} rows did not converge")


def cmd_sweep(cfg, metric, axes, workers=1, horizon=None):
    options = {"exponent": cfg.exponent, "convention": cfg.convention, "tau": cfg.tau,
               "tol": cfg.tol, "horizon": horizon}
    spec = SweepSpec(metric, tuple(parse_axis(a) for a in axes), cfg.params(), options)
    result = run_sweep(spec, workers)
    _emit(cfg, sweep_to_json(result) if cfg.format == "json" else sweep_to_csv(result))
    _check_strict(cfg, result)
    return EXIT_OK


def summary_line(fig_id, result):
    s = result.summary()
    line = f"{fig_id}: rows={s['rows']} non_converged={s['non_converged']}"
    if "max" in s:
        where = " ".join(f"{k}={v:.6g}" for k, v in s["argmax"].items())
        line += f" min={s['min']:.6g} max={s['max']:.6g} argmax {where}"
    return line


def cmd_reproduce(cfg, fig_id, outdir, workers=1):
    spec = figure_preset(fig_id)
    result = run_sweep(spec, workers)
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, f"{fig_id}.csv"), "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_to_csv(result))
    with open(os.path.join(outdir, f"{fig_id}.svg"), "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_to_svg(result, title=fig_id))
    if cfg.format == "json":
        with open(os.path.join(outdir, f"{fig_id}.json"), "w", encoding="utf-8", newline="") as fh:
            fh.write(sweep_to_json(result))
    print(summary_line(fig_id, result))
    _check_strict(cfg, result)
    return EXIT_OK


def _dispatch(args):
    cfg = _config(args)
    horizon = cfg.horizon
    if args.command == "kernels":
        return cmd_kernels(cfg, args.t)
    if args.command == "kappa":
        return cmd_kappa(cfg, args.t)
    if args.command == "nonmarkov":
        return cmd_nonmarkov(cfg, horizon)
    if args.command == "qsl":
        return cmd_qsl(cfg)
    if args.command == "sweep":
        return cmd_sweep(cfg, args.metric, args.axis, args.workers, horizon)
    return cmd_reproduce(cfg, args.figure, args.outdir, args.workers)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        return _dispatch(args)
    except (QuadratureError, NumericalFailure, FloatingPointError, ZeroDivisionError) as exc:
        print(f"corrqsl: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"corrqsl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
