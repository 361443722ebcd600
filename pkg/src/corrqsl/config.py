"""Run configuration: a flat ``key = value`` file (a TOML subset) plus CLI overrides."""
from dataclasses import dataclass, fields, replace
import math
import re

from .params import ModelParams, ParameterError
from .qsl import AS_PRINTED, normalize_convention


class ConfigError(ValueError):
    """Bad configuration; ``key`` and ``line`` locate the problem when known."""

    def __init__(self, message, key=None, line=None, source=None):
        where = ""
        if source is not None and line is not None:
            where = f"{source}:{line}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(f"{where}{key + ': ' if key else ''}{message}")
        self.key = key
        self.line = line


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.01
    mu: float = 5.0
    v: float = 0.01
    omega_c: float = 1.0
    omega_0: float = 1.0
    lam: float = 0.0
    c_e: complex = ModelParams.c_e
    c_g: complex = ModelParams.c_g
    exponent: int = 2
    convention: str = AS_PRINTED
    horizon: float = None  # None means 100 / omega_c
    tol: float = 1e-6
    tau: float = 1.0
    format: str = "csv"
    out: str = ""
    strict: bool = False

    def __post_init__(self):
        self.params()  # ModelParams invariants
        if self.exponent not in (1, 2):
            raise ParameterError("exponent", f"must be 1 or 2, got {self.exponent!r}")
        object.__setattr__(self, "convention", normalize_convention(self.convention))
        for name in ("horizon", "tol", "tau"):
            value = getattr(self, name)
            if value is None and name == "horizon":
                continue
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(name, f"must be a finite number > 0, got {value!r}")
        if self.format not in ("csv", "json"):
            raise ParameterError("format", f"must be csv or json, got {self.format!r}")

    def params(self):
        return ModelParams(alpha=self.alpha, mu=self.mu, v=self.v, omega_c=self.omega_c,
                           omega_0=self.omega_0, lam=self.lam, c_e=self.c_e, c_g=self.c_g)

    def with_(self, **changes):
        return replace(self, **changes)


# file key -> RunConfig field
KEYS = {f.name: f.name for f in fields(RunConfig)}
KEYS.pop("lam")
KEYS.update({"lambda": "lam", "omega0": "omega_0"})
_KINDS = {
    "alpha": float, "mu": float, "v": float, "omega_c": float, "omega_0": float, "lam": float,
    "c_e": complex, "c_g": complex, "exponent": int, "convention": str, "horizon": float,
    "tol": float, "tau": float, "format": str, "out": str, "strict": bool,
}
_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*$")
_NUMBER = re.compile(r"^[+-]?(\d[\d_]*(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _strip_comment(text):
    quote = None
    for i, ch in enumerate(text):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return text[:i]
    return text


def _literal(raw):
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        return raw[1:-1]
    if raw in ("true", "false"):
        return raw == "true"
    if _NUMBER.match(raw):
        text = raw.replace("_", "")
        return int(text) if re.fullmatch(r"[+-]?\d+", text) else float(text)
    raise ValueError(f"cannot parse value {raw!r}")


def _coerce(field, value):
    kind = _KINDS[field]
    if kind is bool:
        if not isinstance(value, bool):
            raise ValueError(f"expected true or false, got {value!r}")
        return value
    if isinstance(value, bool):
        raise ValueError(f"expected a {kind.__name__}, got a boolean")
    if kind is str:
        if not isinstance(value, str):
            raise ValueError(f"expected a string, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        if not isinstance(value, int):
            raise ValueError(f"expected an integer, got {value!r}")
        return value
    if kind is complex:
        try:
            return complex(value.replace(" ", "")) if isinstance(value, str) else complex(value)
        except ValueError:
            raise ValueError(f"expected a complex number, got {value!r}") from None
    if isinstance(value, str):
        raise ValueError(f"expected a number, got string {value!r}")
    return float(value)


def parse_config_text(text, source=None):
    """Parse config text into a dict of RunConfig field overrides and their lines."""
    values, lines = {}, {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = _strip_comment(line).strip()
        if not body:
            continue
        if body.startswith("["):
            raise ConfigError("tables are not supported; use flat key = value lines",
                              line=lineno, source=source)
        m = _LINE.match(body)
        if not m:
            raise ConfigError(f"expected 'key = value', got {body!r}", line=lineno, source=source)
        key, raw = m.groups()
        if key not in KEYS:
            raise ConfigError(f"unknown key; expected one of {', '.join(sorted(KEYS))}",
                              key=key, line=lineno, source=source)
        field = KEYS[key]
        if field in values:
            raise ConfigError("duplicate key", key=key, line=lineno, source=source)
        try:
            values[field] = _coerce(field, _literal(raw))
        except ValueError as exc:
            raise ConfigError(str(exc), key=key, line=lineno, source=source) from None
        lines[field] = (key, lineno)
    return values, lines


def resolve(file_values=None, file_lines=None, overrides=None, source=None):
    """Defaults <- file values <- CLI overrides, validated as one RunConfig."""
    merged = {**(file_values or {}), **(overrides or {})}
    try:
        return RunConfig(**merged)
    except ParameterError as exc:
        field = "lam" if exc.name == "lambda" else exc.name
        if file_lines and field in file_lines and field not in (overrides or {}):
            key, lineno = file_lines[field]
            raise ConfigError(str(exc).split(": ", 1)[1], key=key, line=lineno, source=source) from None
        raise


def parse_config(path, overrides=None):
    """Read ``path`` and return the fully resolved RunConfig."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    values, lines = parse_config_text(text, source=str(path))
    return resolve(values, lines, overrides, source=str(path))
