"""CSV and JSON serialization of sweep results and reports."""
import csv
import io
import json
import math


def fmt(x):
    """Full-precision scientific notation (17 significant digits)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def sweep_header(n_axes):
    cols = []
    for k in range(1, n_axes + 1):
        cols += [f"axis{k}", f"axis{k}_value"]
    return cols + ["metric", "value", "converged"]


def sweep_to_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [a.name for a in result.spec.axes]
    writer.writerow(sweep_header(len(names)))
    for row in result.rows:
        line = []
        for name, value in zip(names, row.values):
            line += [name, fmt(value)]
        line += [result.spec.metric, fmt(row.value), "true" if row.converged else "false"]
        writer.writerow(line)
    return buf.getvalue()


def read_sweep_csv(text):
    """Parse the long-format CSV back into dicts with float values."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        item = {}
        for key, value in rec.items():
            if key.endswith("_value") or key == "value":
                item[key] = float(value)
            elif key == "converged":
                item[key] = value == "true"
            else:
                item[key] = value
        out.append(item)
    return out


def _jsonable(x):
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def sweep_to_json(result):
    spec = result.spec
    doc = {
        "metric": spec.metric,
        "axes": [{"name": a.name, "min": a.min, "max": a.max, "count": a.count, "scale": a.scale}
                 for a in spec.axes],
        "rows": [
            {**{a.name: v for a, v in zip(spec.axes, r.values)},
             "value": r.value, "converged": r.converged, **({"note": r.note} if r.note else {})}
            for r in result.rows
        ],
        "provenance": result.provenance,
    }
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def table_to_csv(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else _cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def table_to_json(columns, rows, meta=None):
    doc = {"rows": [dict(zip(columns, row)) for row in rows]}
    if meta:
        doc["meta"] = meta
    return json.dumps(_jsonable(doc), indent=2) + "\n"
