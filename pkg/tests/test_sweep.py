import math

import numpy as np
import pytest

from corrqsl import ModelParams
from corrqsl.sweep import FIGURES, Axis, SweepSpec, evaluate_point, figure_preset, run_sweep


def small_spec(metric="qsl_correlated"):
    return SweepSpec(metric, (Axis("mu", 2.0, 8.0, 4), Axis("lambda", 0.0, 1.0, 3)),
                     ModelParams(), {"tau": 0.8})


def values(result):
    return [r.value for r in result.rows]


def test_rows_in_lexicographic_order():
    res = run_sweep(small_spec())
    assert [r.index for r in res.rows] == [(i, j) for i in range(4) for j in range(3)]
    assert res.grid().shape == (4, 3)


def test_deterministic():
    a, b = run_sweep(small_spec()), run_sweep(small_spec())
    assert values(a) == values(b)


def test_parallel_matches_serial():
    spec = SweepSpec("non_markovianity", (Axis("mu", 1.5, 8.0, 6), Axis("alpha", 0.001, 0.2, 3, "log")))
    serial, parallel = run_sweep(spec), run_sweep(spec, workers=2)
    assert values(serial) == values(parallel)
    assert [r.converged for r in serial.rows] == [r.converged for r in parallel.rows]


def test_provenance():
    res = run_sweep(small_spec())
    prov = res.provenance
    assert prov["library"] == "corrqsl" and prov["options"]["tau"] == 0.8
    assert prov["fixed"]["mu"] == 5.0 and "timestamp" in prov


def test_failures_are_isolated():
    # the correlated formula rejects unbalanced amplitudes; the row is flagged, not fatal
    spec = SweepSpec("qsl_correlated", (Axis("mu", 2.0, 3.0, 2),), ModelParams(c_e=0.6, c_g=0.8))
    res = run_sweep(spec)
    assert all(math.isnan(r.value) and not r.converged and r.note for r in res.rows)
    assert res.summary()["non_converged"] == 2


def test_tau_axis_gives_partial_measure():
    spec = SweepSpec("non_markovianity", (Axis("tau", 0.3, 0.9, 3),))
    vals = values(run_sweep(spec))
    assert vals[0] == 0.0 and vals[-1] > 0


def test_summary_argmax():
    res = run_sweep(SweepSpec("coherence_initial", (Axis("lambda", 0.0, 1.0, 5),)))
    s = res.summary()
    assert s["argmax"] == {"lambda": 0.0}
    assert s["max"] == pytest.approx(1.0)


@pytest.mark.parametrize("kwargs", [
    dict(name="beta", min=0, max=1, count=3),
    dict(name="mu", min=1, max=1, count=3),
    dict(name="mu", min=1, max=2, count=1),
    dict(name="alpha", min=0, max=1, count=3, scale="log"),
    dict(name="mu", min=1, max=2, count=3, scale="cubic"),
])
def test_axis_validation(kwargs):
    with pytest.raises(ValueError):
        Axis(**kwargs)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("speed", (Axis("mu", 1, 2, 2),))
    with pytest.raises(ValueError):
        SweepSpec("qsl_correlated", (Axis("mu", 1, 2, 2), Axis("mu", 1, 2, 2)))
    with pytest.raises(ValueError):
        SweepSpec("qsl_correlated", (Axis("mu", 1, 2, 2),), options={"bogus": 1})
    with pytest.raises(ValueError):
        SweepSpec("qsl_correlated", (Axis("mu", 1, 2, 2),), options={"exponent": 3})


def test_evaluate_point_metrics():
    spec = SweepSpec("trace_distance_pair", (Axis("mu", 1, 2, 2),), options={"tau": 0.0})
    assert evaluate_point(spec, {"mu": 5.0}) == (1.0, True)


def test_all_presets_build():
    for fig in FIGURES:
        spec = figure_preset(fig)
        assert 1 <= len(spec.axes) <= 2
    assert figure_preset("fig1a").shape == (61, 61)
    assert figure_preset("fig5b").shape == (101,)
    with pytest.raises(ValueError, match="fig9"):
        figure_preset("fig9")


def test_fig5b_preset_values():
    res = run_sweep(figure_preset("fig5b"))
    vals = values(res)
    assert vals[0] == pytest.approx(1.0, abs=1e-12) and vals[-1] < 1e-10
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def _ranks(x):
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x))
    ranks[order] = np.arange(len(x))
    return ranks


def spearman(a, b):
    ra, rb = _ranks(np.asarray(a)), _ranks(np.asarray(b))
    return float(np.corrcoef(ra, rb)[0, 1])


def test_fig2_inverse_relationship():
    qsl_curve = run_sweep(figure_preset("fig2a"))
    n_curve = run_sweep(figure_preset("fig2b"))
    np.testing.assert_array_equal(qsl_curve.axis_values()[0], n_curve.axis_values()[0])
    rho = spearman(values(qsl_curve), values(n_curve))
    assert rho <= -0.5, f"Spearman rank correlation {rho:.3f} between tau_QSL(mu) and N(mu)"
