"""Metric descriptors, combinators and randomized axiom checks.

A descriptor is an immutable recipe for a distance function on R^d.
Every descriptor evaluates on batches of row-vectors (``batch(X, Y)``),
which keeps the sampling-based checks fast; ``eval_metric`` is the
single-pair entry point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import AxiomViolationError, ConfigurationError, DimensionError

DEFAULT_SEED = 20060101
SAMPLE_BOX = (-10.0, 10.0)

_BELOW_ONE = np.nextafter(1.0, 0.0)


def as_point(x, dimension: int | None = None) -> np.ndarray:
    """Coerce ``x`` to a read-only finite float vector.

    Scalars become 1-vectors.
    """
    arr = np.array(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigurationError(f"a point must be a nonempty flat list of numbers, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"point has non-finite coordinates: {arr.tolist()}")
    if dimension is not None and arr.size != dimension:
        raise DimensionError(dimension, arr.size)
    arr.flags.writeable = False
    return arr


class Metric:
    """Base class for metric descriptors.

    Subclasses implement ``_batch`` on two ``(n, d)`` arrays and return
    ``n`` distances. Subclassing is also how tests inject deliberately
    broken "metrics" as negative controls.
    """

    @property
    def dimension(self) -> int | None:
        """Required ambient dimension, or None if any dimension works."""
        return None

    def _batch(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def batch(self, X, Y) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        if X.shape != Y.shape:
            raise DimensionError(X.shape[1], Y.shape[1])
        dim = self.dimension
        if dim is not None and X.shape[1] != dim:
            raise DimensionError(dim, X.shape[1])
        return self._batch(X, Y)

    def __call__(self, x, y) -> float:
        return eval_metric(self, x, y)


def _norm2(D: np.ndarray) -> np.ndarray:
    # scale by the largest entry so squares cannot overflow
    m = np.max(np.abs(D), axis=1)
    safe = np.where(m > 0, m, 1.0)
    return m * np.sqrt(np.sum((D / safe[:, None]) ** 2, axis=1))


@dataclass(frozen=True)
class Euclidean(Metric):
    def _batch(self, X, Y):
        return _norm2(X - Y)


@dataclass(frozen=True)
class Manhattan(Metric):
    def _batch(self, X, Y):
        return np.sum(np.abs(X - Y), axis=1)


@dataclass(frozen=True)
class Chebyshev(Metric):
    def _batch(self, X, Y):
        return np.max(np.abs(X - Y), axis=1)


@dataclass(frozen=True)
class Discrete(Metric):
    def _batch(self, X, Y):
        return np.any(X != Y, axis=1).astype(float)


@dataclass(frozen=True)
class WeightedEuclidean(Metric):
    """sqrt(sum_i (w_i * (x_i - y_i))^2); rescales each axis by its weight."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not w:
            raise ConfigurationError("WeightedEuclidean needs at least one weight")
        if not all(np.isfinite(v) and v > 0 for v in w):
            raise ConfigurationError(f"WeightedEuclidean weights must be positive and finite, got {list(w)}")
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self):
        return len(self.weights)

    def _batch(self, X, Y):
        return _norm2(np.asarray(self.weights) * (X - Y))


@dataclass(frozen=True)
class BoundedTransform(Metric):
    """rho / (1 + rho), a metric with values in [0, 1)."""

    inner: Metric

    @property
    def dimension(self):
        return self.inner.dimension

    def _batch(self, X, Y):
        r = self.inner._batch(X, Y)
        with np.errstate(invalid="ignore"):
            out = r / (1.0 + r)
        # r/(1+r) rounds to 1.0 once r exceeds ~2**53, and is nan for r = inf
        return np.where(np.isinf(r), _BELOW_ONE, np.minimum(out, _BELOW_ONE))


class Combinator:
    """A function F of m nonnegative arguments used to merge m metrics.

    ``apply`` receives an ``(m, n)`` array (one row per part) and returns
    ``n`` values. The shipped variants are monotone, vanish only at the
    zero tuple and are subadditive, so F(rho_1, ..., rho_m) is a metric.
    """

    def apply(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def check_arity(self, arity: int) -> None:
        if arity < 1:
            raise ConfigurationError("a combinator needs at least one part")


@dataclass(frozen=True)
class Sum(Combinator):
    def apply(self, values):
        return np.sum(values, axis=0)


@dataclass(frozen=True)
class Max(Combinator):
    def apply(self, values):
        return np.max(values, axis=0)


@dataclass(frozen=True)
class WeightedSum(Combinator):
    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not all(np.isfinite(v) and v > 0 for v in w):
            raise ConfigurationError(f"WeightedSum weights must be positive and finite, got {list(w)}")
        object.__setattr__(self, "weights", w)

    def check_arity(self, arity):
        super().check_arity(arity)
        if arity != len(self.weights):
            raise ConfigurationError(
                f"WeightedSum has {len(self.weights)} weights but {arity} parts"
            )

    def apply(self, values):
        return np.asarray(self.weights) @ values


@dataclass(frozen=True)
class Combined(Metric):
    combinator: Combinator
    parts: tuple[Metric, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        self.combinator.check_arity(len(parts))
        dims = {p.dimension for p in parts} - {None}
        if len(dims) > 1:
            raise ConfigurationError(f"combined parts disagree on dimension: {sorted(dims)}")
        object.__setattr__(self, "parts", parts)

    @property
    def dimension(self):
        for p in self.parts:
            if p.dimension is not None:
                return p.dimension
        return None

    def _batch(self, X, Y):
        values = np.stack([p._batch(X, Y) for p in self.parts])
        return self.combinator.apply(values)


def eval_metric(desc: Metric, x, y) -> float:
    """Distance between two points under ``desc``."""
    x = as_point(x)
    y = as_point(y)
    if x.size != y.size:
        raise DimensionError(x.size, y.size)
    return float(desc.batch(x[None, :], y[None, :])[0])


def combine(comb: Combinator, parts: Sequence[Metric]) -> Combined:
    """Build F(rho_1, ..., rho_m) from a combinator and its parts."""
    return Combined(comb, tuple(parts))


@dataclass(frozen=True)
class AxiomReport:
    samples_tested: int
    definiteness_failures: int
    symmetry_failures: int
    triangle_failures: int
    worst_triangle_slack: float

    @property
    def passed(self) -> bool:
        return not (self.definiteness_failures or self.symmetry_failures or self.triangle_failures)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def raise_for_failure(self) -> None:
        if not self.passed:
            raise AxiomViolationError(self)


@dataclass(frozen=True)
class AxiomSamples:
    """Raw per-triple quantities behind an ``AxiomReport``."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    d_xy: np.ndarray
    d_yx: np.ndarray
    d_yz: np.ndarray
    d_xz: np.ndarray
    d_xx: np.ndarray

    @property
    def triangle_slack(self) -> np.ndarray:
        """rho(x,z) - rho(x,y) - rho(y,z); positive means a violation."""
        return self.d_xz - self.d_xy - self.d_yz


def sample_axioms(desc: Metric, dimension: int, sample_count: int, seed: int = DEFAULT_SEED) -> AxiomSamples:
    if sample_count < 1:
        raise ConfigurationError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    lo, hi = SAMPLE_BOX
    x, y, z = (rng.uniform(lo, hi, size=(sample_count, dimension)) for _ in range(3))
    return AxiomSamples(
        x=x, y=y, z=z,
        d_xy=desc.batch(x, y),
        d_yx=desc.batch(y, x),
        d_yz=desc.batch(y, z),
        d_xz=desc.batch(x, z),
        d_xx=desc.batch(x, x),
    )


def check_metric_axioms(
    desc: Metric,
    dimension: int,
    sample_count: int = 10_000,
    seed: int = DEFAULT_SEED,
    tolerance: float = 1e-9,
) -> AxiomReport:
    """Test definiteness, symmetry and the triangle inequality on random triples.

    Triples are drawn uniformly from [-10, 10]^d. Definiteness cannot be
    decided exactly in floating point, so a pair only counts as a failure
    when its distance is within ``tolerance`` of zero while some coordinate
    gap exceeds ``1000 * tolerance``.
    """
    if tolerance <= 0:
        raise ConfigurationError("tolerance must be positive")
    s = sample_axioms(desc, dimension, sample_count, seed)
    gap = np.max(np.abs(s.x - s.y), axis=1)
    definiteness = int(np.count_nonzero(s.d_xx > tolerance)) + int(
        np.count_nonzero((s.d_xy <= tolerance) & (gap > 1000 * tolerance))
    )
    symmetry = int(np.count_nonzero(np.abs(s.d_xy - s.d_yx) > tolerance))
    slack = s.triangle_slack
    triangle = int(np.count_nonzero(slack > tolerance * (1.0 + s.d_xz)))
    return AxiomReport(
        samples_tested=sample_count,
        definiteness_failures=definiteness,
        symmetry_failures=symmetry,
        triangle_failures=triangle,
        worst_triangle_slack=float(np.max(slack)),
    )


@dataclass(frozen=True)
class ConditionReport:
    samples_tested: int
    monotonicity_failures: int
    zero_failures: int
    subadditivity_failures: int
    failing_examples: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return not (self.monotonicity_failures or self.zero_failures or self.subadditivity_failures)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def _probe_tuples(arity: int) -> np.ndarray:
    # zero tuple, unit axes, and the all-ones tuple
    probes = [np.zeros(arity), np.ones(arity)]
    probes.extend(np.eye(arity))
    return np.array(probes)


def check_combinator_conditions(
    comb: Combinator,
    arity: int,
    sample_count: int = 10_000,
    seed: int = DEFAULT_SEED,
    tolerance: float = 1e-9,
) -> ConditionReport:
    """Check that ``comb`` is monotone, zero only at zero, and subadditive.

    Tuples are drawn from [0, 10]^m with each coordinate independently
    zeroed with probability 1/2, so boundary tuples such as (0, 1) are
    exercised; the zero tuple and the unit axes are always included.
    """
    if arity < 1:
        raise ConfigurationError("arity must be at least 1")
    rng = np.random.default_rng(seed)

    def draw(n):
        t = rng.uniform(0.0, 10.0, size=(n, arity))
        t[rng.random((n, arity)) < 0.5] = 0.0
        return t

    a = np.vstack([_probe_tuples(arity), draw(sample_count)])
    b = draw(len(a))
    F = lambda t: np.asarray(comb.apply(t.T), dtype=float)  # noqa: E731

    # monotonicity: a dominates c := a - (random nonnegative shrink)
    c = a * rng.random(a.shape)
    fa, fb, fc = F(a), F(b), F(c)
    mono = fc > fa + tolerance * (1.0 + np.abs(fa))

    big = np.max(a, axis=1) > 1000 * tolerance
    zero = (big & (fa <= tolerance)) | (~np.any(a > 0, axis=1) & (np.abs(fa) > tolerance))

    fab = F(a + b)
    sub = fab > fa + fb + tolerance * (1.0 + np.abs(fab))

    examples = {}
    for name, mask in (("monotonicity", mono), ("zero", zero), ("subadditivity", sub)):
        idx = np.flatnonzero(mask)
        if idx.size:
            examples[name] = tuple(a[idx[0]].tolist())
    return ConditionReport(
        samples_tested=len(a),
        monotonicity_failures=int(np.count_nonzero(mono)),
        zero_failures=int(np.count_nonzero(zero)),
        subadditivity_failures=int(np.count_nonzero(sub)),
        failing_examples=examples,
    )


BASE_METRICS: tuple[Metric, ...] = (
    Euclidean(),
    Manhattan(),
    Chebyshev(),
    Discrete(),
    BoundedTransform(Euclidean()),
)
