"""Closed-form self-maps T of a multi-metric space.

Rules come from a small fixed catalog so that maps are pure, serializable
and cheap to evaluate:

* ``Affine``: x -> A x + b
* ``Coordinatewise``: one 1-d form per coordinate (affine, cosine,
  scaled sine, rational)
* ``Piecewise``: pick a sub-rule by the component the point lies in
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError, MapUndefinedError
from .metrics import as_point


class Form:
    """A scalar function R -> R from the catalog."""

    def __call__(self, t: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class AffineForm(Form):
    a: float = 1.0
    b: float = 0.0

    def __call__(self, t):
        return self.a * t + self.b


@dataclass(frozen=True)
class CosineForm(Form):
    """a * cos(t) + b"""

    a: float = 1.0
    b: float = 0.0

    def __call__(self, t):
        return self.a * math.cos(t) + self.b


@dataclass(frozen=True)
class SineForm(Form):
    """a * sin(t) + b"""

    a: float = 1.0
    b: float = 0.0

    def __call__(self, t):
        return self.a * math.sin(t) + self.b


@dataclass(frozen=True)
class RationalForm(Form):
    """(a t + b) / (c t + d)"""

    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0

    def __post_init__(self):
        if self.c == 0 and self.d == 0:
            raise ConfigurationError("rational form has identically zero denominator")

    def __call__(self, t):
        den = self.c * t + self.d
        if den == 0:
            raise MapUndefinedError([t])
        return (self.a * t + self.b) / den


FORMS = {
    "affine": AffineForm,
    "cosine": CosineForm,
    "scaled_sine": SineForm,
    "rational": RationalForm,
}


class Rule:
    dimension: int | None = None

    def apply(self, x: np.ndarray, space) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Affine(Rule):
    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.array(self.matrix, dtype=float))
        b = as_point(self.offset)
        if A.shape != (b.size, b.size):
            raise ConfigurationError(f"affine matrix shape {A.shape} does not match offset length {b.size}")
        if not np.all(np.isfinite(A)):
            raise ConfigurationError("affine matrix has non-finite entries")
        A.flags.writeable = False
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "offset", b)

    @classmethod
    def scalar(cls, a: float, b: float) -> "Affine":
        return cls([[a]], [b])

    @property
    def dimension(self):
        return self.offset.size

    def apply(self, x, space):
        return self.matrix @ x + self.offset


@dataclass(frozen=True)
class Coordinatewise(Rule):
    """Apply ``forms[i]`` to coordinate i; a single form is broadcast."""

    forms: tuple[Form, ...]

    def __post_init__(self):
        forms = tuple(self.forms)
        if not forms:
            raise ConfigurationError("coordinatewise rule needs at least one form")
        object.__setattr__(self, "forms", forms)

    @property
    def dimension(self):
        return None if len(self.forms) == 1 else len(self.forms)

    def apply(self, x, space):
        forms = self.forms * x.size if len(self.forms) == 1 else self.forms
        if len(forms) != x.size:
            raise DimensionError(len(forms), x.size)
        return np.array([f(float(t)) for f, t in zip(forms, x)])


@dataclass(frozen=True)
class Piecewise(Rule):
    """Sub-rules guarded by component id; ties go to the lowest guard id."""

    pieces: tuple[tuple[int, Rule], ...]

    def __post_init__(self):
        pieces = tuple(sorted(((int(k), r) for k, r in self.pieces), key=lambda p: p[0]))
        if not pieces:
            raise ConfigurationError("piecewise rule needs at least one piece")
        ids = [k for k, _ in pieces]
        if len(set(ids)) != len(ids):
            raise ConfigurationError(f"duplicate piecewise guards: {ids}")
        object.__setattr__(self, "pieces", pieces)

    def apply(self, x, space):
        if space is None:
            raise ConfigurationError("a piecewise rule needs the space to resolve its guards")
        for k, rule in self.pieces:
            if space.component(k).contains(x):
                return rule.apply(x, space)
        raise MapUndefinedError(x)


@dataclass(frozen=True)
class ContractionMap:
    rule: Rule
    claimed_alpha: float | None = None

    def __post_init__(self):
        a = self.claimed_alpha
        if a is not None and not 0 < a < 1:
            raise ConfigurationError(f"claimed_alpha must lie strictly inside (0, 1), got {a}")


def apply_map(map: ContractionMap, x, space=None) -> np.ndarray:
    """Image of ``x`` under ``map``.

    ``space`` is needed only for piecewise rules, whose guards are component
    ids of that space.
    """
    dim = space.dimension if space is not None else None
    x = as_point(x, dim)
    y = np.asarray(map.rule.apply(x, space), dtype=float).reshape(-1)
    if y.size != x.size:
        raise DimensionError(x.size, y.size, what="map image")
    if not np.all(np.isfinite(y)):
        raise MapUndefinedError(x)
    y.flags.writeable = False
    return y


def iterate(map: ContractionMap, start, length: int, space=None) -> np.ndarray:
    """The orbit start, T(start), ..., as a ``(length, d)`` array."""
    x = as_point(start)
    out = np.empty((length, x.size))
    for n in range(length):
        out[n] = x
        if n + 1 < length:
            x = apply_map(map, x, space)
    return out
