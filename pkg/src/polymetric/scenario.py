"""JSON scenario files.

A scenario is one JSON object with a top-level ``"kind"`` and the fields
that kind needs. Nested objects (metrics, regions, map rules, sequences)
are tagged records with a ``"type"`` key. See README.md for the schema.

Every error raised while loading is a ``ScenarioError`` naming the JSON
path of the offending field (or the line and column for syntax errors).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ConfigurationError
from .maps import (
    FORMS,
    Affine,
    ContractionMap,
    Coordinatewise,
    Piecewise,
)
from .metrics import (
    BoundedTransform,
    Chebyshev,
    Combined,
    Discrete,
    Euclidean,
    Manhattan,
    Max,
    Sum,
    WeightedEuclidean,
    WeightedSum,
    as_point,
)
from .sequences import Explicit, Iterated
from .space import Ball, Box, DiskSpec, MultiMetricSpace, Whole

KINDS = ("axioms", "sequence", "cauchy", "solve", "banach", "ellipse", "nested-disks")


class ScenarioError(ConfigurationError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass
class Scenario:
    kind: str
    space: MultiMetricSpace | None
    params: dict[str, Any] = field(default_factory=dict)


def _get(obj, key, path, default=...):
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    if key not in obj:
        if default is ...:
            raise ScenarioError(f"{path}.{key}" if path else key, "missing required field")
        return default
    return obj[key]


def _sub(path, key):
    return f"{path}.{key}" if path else key


def _number(value, path, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if positive and not value > 0:
        raise ScenarioError(path, f"must be > 0, got {value!r}")
    return int(value) if integer else float(value)


def _numbers(value, path):
    if not isinstance(value, list):
        raise ScenarioError(path, f"expected a list of numbers, got {value!r}")
    return tuple(_number(v, f"{path}[{i}]") for i, v in enumerate(value))


def _wrap(path, build, *args, **kwargs):
    try:
        return build(*args, **kwargs)
    except ScenarioError:
        raise
    except (ConfigurationError, TypeError, ValueError) as exc:
        raise ScenarioError(path, str(exc)) from exc


def _point(value, path, dimension=None):
    return _wrap(path, as_point, value, dimension)


_SIMPLE_METRICS = {
    "euclidean": Euclidean,
    "manhattan": Manhattan,
    "chebyshev": Chebyshev,
    "discrete": Discrete,
}


def parse_metric(obj, path="metric"):
    kind = _get(obj, "type", path)
    if kind in _SIMPLE_METRICS:
        return _SIMPLE_METRICS[kind]()
    if kind == "weighted_euclidean":
        return _wrap(path, WeightedEuclidean, _numbers(_get(obj, "weights", path), _sub(path, "weights")))
    if kind == "bounded":
        return BoundedTransform(parse_metric(_get(obj, "inner", path), _sub(path, "inner")))
    if kind == "combined":
        comb = parse_combinator(_get(obj, "combinator", path), _sub(path, "combinator"))
        raw_parts = _get(obj, "parts", path)
        if not isinstance(raw_parts, list):
            raise ScenarioError(_sub(path, "parts"), "expected a list")
        parts = [parse_metric(p, f"{path}.parts[{i}]") for i, p in enumerate(raw_parts)]
        return _wrap(path, Combined, comb, tuple(parts))
    raise ScenarioError(_sub(path, "type"), f"unknown metric type {kind!r}")


def parse_combinator(obj, path="combinator"):
    kind = _get(obj, "type", path)
    if kind == "sum":
        return Sum()
    if kind == "max":
        return Max()
    if kind == "weighted_sum":
        return _wrap(path, WeightedSum, _numbers(_get(obj, "weights", path), _sub(path, "weights")))
    raise ScenarioError(_sub(path, "type"), f"unknown combinator type {kind!r}")


def parse_region(obj, path, dimension):
    kind = _get(obj, "type", path)
    if kind == "box":
        lo = _point(_get(obj, "lower", path), _sub(path, "lower"), dimension)
        hi = _point(_get(obj, "upper", path), _sub(path, "upper"), dimension)
        return _wrap(path, Box, lo, hi)
    if kind == "ball":
        center = _point(_get(obj, "center", path), _sub(path, "center"), dimension)
        radius = _number(_get(obj, "radius", path), _sub(path, "radius"), positive=True)
        metric = parse_metric(_get(obj, "metric", path), _sub(path, "metric"))
        return _wrap(path, Ball, center, radius, metric)
    if kind == "whole":
        return Whole()
    raise ScenarioError(_sub(path, "type"), f"unknown region type {kind!r}")


def parse_space(obj, path="space"):
    dim = _number(_get(obj, "dimension", path), _sub(path, "dimension"), positive=True, integer=True)
    raw = _get(obj, "components", path)
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(_sub(path, "components"), "expected a nonempty list")
    parts = []
    for i, c in enumerate(raw):
        cpath = f"{path}.components[{i}]"
        region = parse_region(_get(c, "region", cpath), _sub(cpath, "region"), dim)
        metric = parse_metric(_get(c, "metric", cpath), _sub(cpath, "metric"))
        parts.append((region, metric))
    return _wrap(path, MultiMetricSpace.build, dim, parts)


def parse_form(obj, path):
    name = _get(obj, "form", path)
    if name not in FORMS:
        raise ScenarioError(_sub(path, "form"), f"unknown form {name!r}; expected one of {sorted(FORMS)}")
    params = {k: _number(v, _sub(path, k)) for k, v in obj.items() if k != "form"}
    return _wrap(path, FORMS[name], **params)


def parse_rule(obj, path="rule"):
    kind = _get(obj, "type", path)
    if kind == "affine":
        return _wrap(path, Affine, _get(obj, "matrix", path), _get(obj, "offset", path))
    if kind == "coordinatewise":
        forms = _get(obj, "forms", path)
        if not isinstance(forms, list):
            raise ScenarioError(_sub(path, "forms"), "expected a list")
        return _wrap(path, Coordinatewise, tuple(parse_form(f, f"{path}.forms[{i}]") for i, f in enumerate(forms)))
    if kind == "piecewise":
        raw = _get(obj, "pieces", path)
        if not isinstance(raw, list):
            raise ScenarioError(_sub(path, "pieces"), "expected a list")
        pieces = []
        for i, p in enumerate(raw):
            ppath = f"{path}.pieces[{i}]"
            guard = _number(_get(p, "guard", ppath), _sub(ppath, "guard"), positive=True, integer=True)
            pieces.append((guard, parse_rule(_get(p, "rule", ppath), _sub(ppath, "rule"))))
        return _wrap(path, Piecewise, tuple(pieces))
    raise ScenarioError(_sub(path, "type"), f"unknown rule type {kind!r}")


def parse_map(obj, path="map"):
    rule = parse_rule(_get(obj, "rule", path), _sub(path, "rule"))
    alpha = _get(obj, "claimed_alpha", path, None)
    if alpha is not None:
        alpha = _number(alpha, _sub(path, "claimed_alpha"))
    return _wrap(path, ContractionMap, rule, alpha)


def _check_guards(rule, space, path):
    if isinstance(rule, Piecewise):
        for i, (k, sub) in enumerate(rule.pieces):
            if not 1 <= k <= space.m:
                raise ScenarioError(f"{path}.pieces[{i}].guard", f"no component {k} (space has {space.m})")
            _check_guards(sub, space, f"{path}.pieces[{i}].rule")
    elif rule.dimension is not None and rule.dimension != space.dimension:
        raise ScenarioError(path, f"rule has dimension {rule.dimension}, space has {space.dimension}")


def parse_sequence(obj, space, path="sequence"):
    kind = _get(obj, "type", path)
    if kind == "explicit":
        raw = _get(obj, "points", path)
        if not isinstance(raw, list) or len(raw) < 2:
            raise ScenarioError(_sub(path, "points"), "expected a list of at least two points")
        pts = [_point(p, f"{path}.points[{i}]", space.dimension) for i, p in enumerate(raw)]
        return Explicit(pts)
    if kind == "iterated":
        m = parse_map(_get(obj, "map", path), _sub(path, "map"))
        _check_guards(m.rule, space, _sub(path, "map.rule"))
        start = _point(_get(obj, "start", path), _sub(path, "start"), space.dimension)
        length = _number(_get(obj, "length", path), _sub(path, "length"), integer=True)
        if length < 2:
            raise ScenarioError(_sub(path, "length"), "must be at least 2")
        return Iterated(m, start, length)
    raise ScenarioError(_sub(path, "type"), f"unknown sequence type {kind!r}")


def _opt(obj, key, default, **kw):
    return _number(_get(obj, key, "", default), key, **kw)


def parse_scenario(obj: dict) -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError("", "scenario must be a JSON object")
    kind = _get(obj, "kind", "")
    if kind not in KINDS:
        raise ScenarioError("kind", f"unknown kind {kind!r}; expected one of {list(KINDS)}")
    space = parse_space(obj["space"]) if "space" in obj else None
    needs_space = kind not in ("axioms", "ellipse")
    if needs_space and space is None:
        raise ScenarioError("space", "missing required field")
    p: dict[str, Any] = {}

    if kind == "axioms":
        p["metric"] = parse_metric(_get(obj, "metric", ""))
        default_dim = space.dimension if space is not None else ...
        p["dimension"] = _number(_get(obj, "dimension", "", default_dim), "dimension", positive=True, integer=True)
        p["samples"] = _opt(obj, "samples", 10_000, positive=True, integer=True)
        p["seed"] = _opt(obj, "seed", 20060101, integer=True)
        p["tolerance"] = _opt(obj, "tolerance", 1e-9, positive=True)
    elif kind in ("sequence", "cauchy"):
        p["sequence"] = parse_sequence(_get(obj, "sequence", ""), space)
        p["tail_window"] = _opt(obj, "tail_window", 10, integer=True)
        if p["tail_window"] < 2:
            raise ScenarioError("tail_window", "must be at least 2")
        p["tolerance"] = _opt(obj, "tolerance", 1e-9, positive=True)
    elif kind in ("solve", "banach"):
        if kind == "banach" and space.m != 1:
            raise ScenarioError("space.components", f"banach needs exactly one component, got {space.m}")
        p["map"] = parse_map(_get(obj, "map", ""))
        _check_guards(p["map"].rule, space, "map.rule")
        p["tolerance"] = _opt(obj, "tolerance", 1e-10, positive=True)
        p["max_iterations"] = _opt(obj, "max_iterations", 10_000, positive=True, integer=True)
        p["dedup_tolerance"] = _opt(obj, "dedup_tolerance", 1e-6, positive=True)
        p["samples_per_component"] = _opt(obj, "samples_per_component", 64, integer=True)
        if p["samples_per_component"] < 2:
            raise ScenarioError("samples_per_component", "must be at least 2")
        p["seed"] = _opt(obj, "seed", 20060101, integer=True)
    elif kind == "ellipse":
        p["a"] = _number(_get(obj, "a", ""), "a", positive=True)
        p["b"] = _number(_get(obj, "b", ""), "b", positive=True)
        p["samples"] = _opt(obj, "samples", 360, integer=True)
        if p["samples"] < 4:
            raise ScenarioError("samples", "must be at least 4")
        p["r"] = _opt(obj, "r", 1.0, positive=True)
    elif kind == "nested-disks":
        raw = _get(obj, "disks", "")
        if not isinstance(raw, list) or len(raw) < 2:
            raise ScenarioError("disks", "expected a list of at least two disks")
        disks = []
        for i, d in enumerate(raw):
            dpath = f"disks[{i}]"
            center = _point(_get(d, "center", dpath), _sub(dpath, "center"), space.dimension)
            radius = _number(_get(d, "radius", dpath), _sub(dpath, "radius"), positive=True)
            disks.append(DiskSpec(center, radius))
        p["disks"] = disks
    return Scenario(kind, space, p)


def load_scenario(path) -> Scenario:
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    return parse_scenario(obj)
