"""Text formats: histograms, graphs, model specs and JSON reports.

* histogram: one ``x log_c`` pair per line;
* graph: header ``n m`` then ``m`` lines ``u v`` (0-indexed);
* spec: ``key=value`` lines, e.g. ``model=two_spin``, ``gamma1=0.2``,
  ``lambda=1``; indexed keys such as ``lambda.2=0.3`` or ``gamma.0=2``
  override a single vertex or edge.

``#`` starts a comment in every text format.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .core import GrossGibbsModel
from .errors import InvalidParameter
from .models.graph import Graph
from .models.instance import ModelInstance, make_instance
from .models.ising import IsingSpec
from .models.two_spin import TwoSpinSpec
from .schedules import parse_beta


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_histogram(text: str) -> GrossGibbsModel:
    xs, cs = [], []
    for no, line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise InvalidParameter(f"histogram line {no}: expected 'x log_c'")
        xs.append(float(parts[0]))
        cs.append(parse_beta(parts[1]))
    if not xs:
        raise InvalidParameter("histogram is empty")
    return GrossGibbsModel.from_points(xs, cs)


def format_histogram(model: GrossGibbsModel) -> str:
    rows = ["# x log_c"] + [f"{x:.17g} {c:.17g}" for x, c in zip(model.x, model.log_c)]
    return "\n".join(rows) + "\n"


def parse_graph(text: str) -> Graph:
    rows = list(_lines(text))
    if not rows:
        raise InvalidParameter("graph file is empty")
    try:
        n, m = (int(t) for t in rows[0][1].split())
        edges = [tuple(int(t) for t in line.split()) for _, line in rows[1:]]
    except ValueError as exc:
        raise InvalidParameter(f"graph file: {exc}") from None
    if any(len(e) != 2 for e in edges):
        raise InvalidParameter("graph file: every edge line needs exactly two vertices")
    if len(edges) != m:
        raise InvalidParameter(f"graph header promises {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def format_graph(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def parse_spec(text: str) -> dict:
    """Flat ``key=value`` mapping; values stay strings except indexed keys, kept as dicts."""
    out: dict = {}
    for no, line in _lines(text):
        if "=" not in line:
            raise InvalidParameter(f"spec line {no}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if "." in key:
            base, idx = key.split(".", 1)
            try:
                out.setdefault(base + ".", {})[int(idx)] = value
            except ValueError:
                raise InvalidParameter(f"spec line {no}: index must be an integer") from None
        else:
            out[key] = value
    return out


def _num(spec: dict, key: str, default=None) -> float:
    if key not in spec:
        if default is None:
            raise InvalidParameter(f"spec is missing '{key}'")
        return default
    try:
        return float(spec[key])
    except ValueError:
        raise InvalidParameter(f"spec value for '{key}' is not a number") from None


def _per_item(spec: dict, key: str, size: int, default: float | None) -> np.ndarray:
    base = _num(spec, key, default)
    arr = np.full(size, base)
    for idx, value in spec.get(key + ".", {}).items():
        if not 0 <= idx < size:
            raise InvalidParameter(f"override {key}.{idx} is out of range")
        arr[idx] = float(value)
    return arr


def instance_from_spec(name: str, g: Graph, spec: dict) -> ModelInstance:
    kind = spec.get("model", "two_spin")
    if kind in ("two_spin", "flipped"):
        ts = TwoSpinSpec(_num(spec, "gamma1"), _num(spec, "gamma2"), _num(spec, "lambda"))
        return make_instance(name, g, ts, kind)
    if kind == "hardcore":
        return make_instance(name, g, TwoSpinSpec.hardcore(_num(spec, "lambda")), "two_spin")
    if kind == "matchings":
        return make_instance(name, g, _num(spec, "lambda"), "matchings")
    if kind == "ising":
        delta = _num(spec, "delta")
        gamma = _per_item(spec, "gamma", g.m, 1.0 + delta)
        lam = _per_item(spec, "lambda", g.n, 1.0 - delta)
        return make_instance(name, g, IsingSpec(gamma, lam, delta), "ising")
    raise InvalidParameter(f"unknown model '{kind}' in spec")


def read_text(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidParameter(f"cannot read {path}: {exc.strerror}") from None


def _num_text(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 2**53:
        return f"{int(x)}.0"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and infinities as strings."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_str(str(k))}: {to_json(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(to_json(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num_text(float(obj))
    return _str(str(obj))


def _str(s: str) -> str:
    return json.dumps(s)
