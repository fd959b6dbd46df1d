"""Run configuration: a YAML document turned into validated domain objects.

Rational numbers are written as integers or "p/q" strings; floats are
rejected so nothing inexact slips in.  Every error names the key path it
came from.

Example::

    surface:
      in: ["0", "1"]
      out: ["inf"]
    lie: "gl(2)"            # or {labels: [...], brackets: [...]}
    lambdas: [-1, 0, 1, 2]
    window: 4
    connections: {R: "0", T: "0"}
    cocycles:
      - {name: gv, type: vector}
      - {name: mix, type: D1, coefficients: ["1", "-1/2", "2"]}
    tasks: [duality, grading, regression, identities]
    targets: ["gl(2)-D1"]
"""
from dataclasses import dataclass, field

import yaml

from .basis import SurfaceError, make_surface
from .cocycles import (
    Affine,
    Cycle,
    Mixing,
    SEPARATING,
    VectorField,
    cocycle_D1,
    cocycle_lambda,
    function_cocycle,
    mixing_cocycle,
)
from .exact.parsing import parse_rational_function
from .exact.rational import ZERO_FUNCTION
from .exact.scalar import to_scalar
from .lie import (
    BilinearForm,
    LieAlgebraError,
    LinearForm,
    build_named,
    from_table,
    killing_form,
    trace_form,
    trace_linear_form,
    trace_outer_form,
)

TASKS = (
    "duality",
    "partition",
    "grading",
    "regression",
    "identities",
    "locality",
    "invariance",
    "extension",
)

COCYCLE_TYPES = ("function", "vector", "mixing", "D1", "lambda", "affine", "mix")


class ConfigError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class CocycleEntry:
    name: str
    kind: str
    spec: object
    algebra: str


@dataclass
class RunConfig:
    surface: object
    lie: object
    lambdas: list
    window: int
    R: object
    T: object
    cocycles: list = field(default_factory=list)
    tasks: list = field(default_factory=lambda: list(TASKS))
    targets: list = field(default_factory=list)
    fault: str = None
    raw: dict = field(default_factory=dict)


def _scalar(value, path):
    if isinstance(value, bool) or isinstance(value, float):
        raise ConfigError(path, f"{value!r} is not exact; write rationals as \"p/q\" strings")
    try:
        return to_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(path, f"cannot read {value!r} as a rational: {exc}") from None


def _int(value, path, low=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if low is not None and value < low:
        raise ConfigError(path, f"must be at least {low}")
    return value


def _function(value, path):
    if value is None:
        return ZERO_FUNCTION
    if isinstance(value, float) or isinstance(value, bool):
        raise ConfigError(path, f"{value!r} is not exact")
    try:
        return parse_rational_function(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(path, str(exc)) from None


def _point(value, path):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return "inf"
    return _scalar(value, path)


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError("", f"cannot read config {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ConfigError("", f"invalid YAML in {path}: {exc}") from None
    return parse_config(data if data is not None else {})


def parse_config(data, window=None):
    if not isinstance(data, dict):
        raise ConfigError("", "the config must be a mapping")
    known = {"surface", "lie", "lambdas", "window", "connections", "cocycles", "tasks", "targets", "fault"}
    for key in data:
        if key not in known:
            raise ConfigError(key, "unknown key")

    surf = data.get("surface", {"in": [0], "out": ["inf"]})
    if not isinstance(surf, dict):
        raise ConfigError("surface", "expected a mapping with 'in' and 'out'")
    pts = {}
    for key in ("in", "out"):
        seq = surf.get(key)
        if not isinstance(seq, list):
            raise ConfigError(f"surface.{key}", "expected a list of points")
        pts[key] = [_point(v, f"surface.{key}[{i}]") for i, v in enumerate(seq)]
    try:
        surface = make_surface(pts["in"], pts["out"])
    except SurfaceError as exc:
        raise ConfigError("surface", str(exc)) from None

    lie = _lie(data.get("lie"), "lie")

    lambdas = data.get("lambdas", [-1, 0, 1, 2])
    if not isinstance(lambdas, list):
        raise ConfigError("lambdas", "expected a list of integers")
    lambdas = [_int(v, f"lambdas[{i}]") for i, v in enumerate(lambdas)]

    W = window if window is not None else _int(data.get("window", 4), "window", low=1)

    conn = data.get("connections", {}) or {}
    if not isinstance(conn, dict):
        raise ConfigError("connections", "expected a mapping with R and T")
    R = _function(conn.get("R"), "connections.R")
    T = _function(conn.get("T"), "connections.T")
    for name, f in (("R", R), ("T", T)):
        if not surface.admits(f):
            raise ConfigError(f"connections.{name}", f"{f} has poles off the marked points")

    fault = data.get("fault")
    if fault not in (None, "vector_sign"):
        raise ConfigError("fault", f"unknown fault {fault!r}; the only one is 'vector_sign'")

    cfg = RunConfig(surface, lie, lambdas, W, R, T, fault=fault, raw=data)

    tasks = data.get("tasks", list(TASKS))
    if not isinstance(tasks, list):
        raise ConfigError("tasks", "expected a list")
    for i, t in enumerate(tasks):
        if t not in TASKS:
            raise ConfigError(f"tasks[{i}]", f"unknown task {t!r}; choose from {', '.join(TASKS)}")
    cfg.tasks = tasks

    targets = data.get("targets", [])
    if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
        raise ConfigError("targets", "expected a list of strings")
    cfg.targets = [parse_target(t, f"targets[{i}]") for i, t in enumerate(targets)]

    entries = data.get("cocycles", []) or []
    if not isinstance(entries, list):
        raise ConfigError("cocycles", "expected a list")
    cfg.cocycles = [_cocycle(e, f"cocycles[{i}]", cfg) for i, e in enumerate(entries)]
    return cfg


@dataclass
class Target:
    text: str
    kind: str
    lie: object = None


def parse_target(text, path="target"):
    """'D1', 'L', or '<lie>-current' / '<lie>-D1' with a named Lie algebra."""
    t = text.strip()
    if t in ("D1", "L"):
        return Target(t, t)
    name, _, kind = t.rpartition("-")
    if kind not in ("current", "D1") or not name:
        raise ConfigError(path, f"unknown target {text!r}; use D1, L, <lie>-current or <lie>-D1")
    lie = _lie(name, path)
    return Target(t, "current" if kind == "current" else "D1g", lie)


def _lie(value, path):
    if value is None:
        return None
    try:
        if isinstance(value, str):
            return build_named(value)
        if isinstance(value, dict):
            labels = value.get("labels")
            if not isinstance(labels, list) or not labels:
                raise ConfigError(f"{path}.labels", "expected a non-empty list of labels")
            brackets = {}
            for i, b in enumerate(value.get("brackets", []) or []):
                bp = f"{path}.brackets[{i}]"
                if not isinstance(b, dict) or "x" not in b or "y" not in b:
                    raise ConfigError(bp, "expected {x: label, y: label, result: {label: coeff}}")
                res = b.get("result", {}) or {}
                brackets[(str(b["x"]), str(b["y"]))] = {
                    str(k): _scalar(v, f"{bp}.result.{k}") for k, v in res.items()
                }
            return from_table([str(x) for x in labels], brackets, name=value.get("name", "user"))
    except LieAlgebraError as exc:
        raise ConfigError(path, str(exc)) from None
    raise ConfigError(path, "expected a name such as 'sl(2)' or a structure-constant table")


def _cycle(value, path, surface):
    if value in (None, "S", "separating"):
        return SEPARATING
    k = _int(value, path, low=1)
    if k > surface.K:
        raise ConfigError(path, f"cycle index {k} exceeds the {surface.K} in-points")
    return Cycle.around(k)


def _form(value, path, lie):
    if lie is None:
        raise ConfigError(path, "a Lie algebra is needed for this cocycle")
    try:
        if value in (None, "trace"):
            return trace_form(lie)
        if value == "trace_outer":
            return trace_outer_form(lie)
        if value == "killing":
            return killing_form(lie)
    except LieAlgebraError as exc:
        raise ConfigError(path, str(exc)) from None
    if isinstance(value, list):
        rows = [[_scalar(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(value)]
        if len(rows) != lie.dim or any(len(r) != lie.dim for r in rows):
            raise ConfigError(path, f"expected a {lie.dim}x{lie.dim} matrix")
        try:
            return BilinearForm(rows, "user")
        except ValueError as exc:
            raise ConfigError(path, str(exc)) from None
    raise ConfigError(path, f"unknown form {value!r}")


def _linear(value, path, lie):
    if lie is None:
        raise ConfigError(path, "a Lie algebra is needed for this cocycle")
    if value in (None, "trace"):
        try:
            return trace_linear_form(lie)
        except LieAlgebraError as exc:
            raise ConfigError(path, str(exc)) from None
    if isinstance(value, list):
        if len(value) != lie.dim:
            raise ConfigError(path, f"expected {lie.dim} coefficients")
        return LinearForm([_scalar(v, f"{path}[{i}]") for i, v in enumerate(value)], "user")
    raise ConfigError(path, f"unknown linear form {value!r}")


def _cocycle(entry, path, cfg):
    if not isinstance(entry, dict):
        raise ConfigError(path, "expected a mapping")
    kind = entry.get("type")
    if kind not in COCYCLE_TYPES:
        raise ConfigError(f"{path}.type", f"unknown type {kind!r}; choose from {', '.join(COCYCLE_TYPES)}")
    name = str(entry.get("name", kind))
    cycle = _cycle(entry.get("cycle"), f"{path}.cycle", cfg.surface)
    flip = cfg.fault == "vector_sign"
    if kind == "function":
        return CocycleEntry(name, kind, function_cocycle(cycle), "A")
    if kind == "vector":
        return CocycleEntry(name, kind, VectorField(cfg.R, cycle, name=name, flip=flip), "L")
    if kind == "mixing":
        return CocycleEntry(name, kind, mixing_cocycle(cfg.T, cycle), "D1")
    if kind == "D1":
        coeffs = entry.get("coefficients")
        if not isinstance(coeffs, list) or len(coeffs) != 3:
            raise ConfigError(f"{path}.coefficients", "expected three rationals r1, r2, r3")
        r = [_scalar(v, f"{path}.coefficients[{i}]") for i, v in enumerate(coeffs)]
        return CocycleEntry(name, kind, cocycle_D1(*r, R=cfg.R, T=cfg.T, cycle=cycle), "D1")
    if kind == "lambda":
        lam = _scalar(entry.get("lambda", 0), f"{path}.lambda")
        return CocycleEntry(name, kind, cocycle_lambda(lam, R=cfg.R, T=cfg.T, cycle=cycle), "D1")
    if kind == "affine":
        form = _form(entry.get("form"), f"{path}.form", cfg.lie)
        return CocycleEntry(name, kind, Affine(form, cycle, name=name), "current")
    phi = _linear(entry.get("phi"), f"{path}.phi", cfg.lie)
    return CocycleEntry(name, kind, Mixing(phi, cfg.T, cycle, name=name), "D1g")
