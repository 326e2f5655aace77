"""Multi-metric spaces: unions of regions, each carrying its own metric.

All components live in one shared ambient R^d. Distances are only defined
between points that share a component; otherwise they are ``Incomparable``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConfigurationError, DimensionError
from .metrics import SAMPLE_BOX, Metric, as_point, eval_metric


class Region:
    """A closed subset of R^d."""

    dimension: int | None = None

    def contains(self, x: np.ndarray) -> bool:
        raise NotImplementedError

    def center(self, dimension: int) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int, dimension: int) -> np.ndarray:
        """``n`` points of the region (not necessarily uniform)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Box(Region):
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo, hi = as_point(self.lower), as_point(self.upper)
        if lo.size != hi.size:
            raise ConfigurationError(f"box bounds differ in dimension: {lo.size} vs {hi.size}")
        if np.any(lo > hi):
            raise ConfigurationError(f"box lower {lo.tolist()} exceeds upper {hi.tolist()}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Box":
        return cls([lo], [hi])

    @property
    def dimension(self):
        return self.lower.size

    def contains(self, x):
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def center(self, dimension):
        return as_point((self.lower + self.upper) / 2)

    def sample(self, rng, n, dimension):
        pts = rng.uniform(self.lower, self.upper, size=(n, self.dimension))
        # corners and midpoint are where escapes tend to show up first
        fixed = np.array([self.lower, self.upper, (self.lower + self.upper) / 2])
        return np.vstack([fixed, pts])[: max(n, 3)]

    def __eq__(self, other):
        return (
            isinstance(other, Box)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )

    def __hash__(self):
        return hash((tuple(self.lower), tuple(self.upper)))


@dataclass(frozen=True, eq=False)
class Ball(Region):
    """Closed ball {x : metric(x, center) <= radius}."""

    center_point: np.ndarray
    radius: float
    metric: Metric

    def __post_init__(self):
        object.__setattr__(self, "center_point", as_point(self.center_point))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ConfigurationError(f"ball radius must be positive, got {self.radius}")

    @property
    def dimension(self):
        return self.center_point.size

    def contains(self, x):
        return eval_metric(self.metric, x, self.center_point) <= self.radius

    def center(self, dimension):
        return self.center_point

    def sample(self, rng, n, dimension):
        # rejection from a shrinking cube around the centre; the centre
        # itself is always a member, so this terminates
        out = [np.asarray(self.center_point)]
        scale = self.radius
        while len(out) < n and scale > 1e-300:
            cand = self.center_point + rng.uniform(-scale, scale, size=(4 * n, self.dimension))
            d = self.metric.batch(cand, np.broadcast_to(self.center_point, cand.shape))
            out.extend(cand[d <= self.radius][: n - len(out)])
            scale /= 2
        while len(out) < n:
            out.append(np.asarray(self.center_point))
        return np.array(out)


@dataclass(frozen=True)
class Whole(Region):
    def contains(self, x):
        return True

    def center(self, dimension):
        return as_point(np.zeros(dimension))

    def sample(self, rng, n, dimension):
        return rng.uniform(*SAMPLE_BOX, size=(n, dimension))


@dataclass(frozen=True)
class ComponentSpace:
    id: int
    region: Region
    metric: Metric

    def contains(self, x) -> bool:
        return self.region.contains(x)

    def distance(self, x, y) -> float:
        return eval_metric(self.metric, x, y)


@dataclass(frozen=True)
class Comparable:
    value: float
    via_component: int


@dataclass(frozen=True)
class Incomparable:
    pass


INCOMPARABLE = Incomparable()
PartialDistance = Union[Comparable, Incomparable]


@dataclass(frozen=True, eq=False)
class DiskSpec:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ConfigurationError(f"disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class MultiMetricSpace:
    dimension: int
    components: tuple[ComponentSpace, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if self.dimension < 1:
            raise ConfigurationError("dimension must be at least 1")
        if not comps:
            raise ConfigurationError("a multi-metric space needs at least one component")
        for pos, c in enumerate(comps, start=1):
            if c.id != pos:
                raise ConfigurationError(f"component at position {pos} has id {c.id}")
            for what, dim in (("region", c.region.dimension), ("metric", c.metric.dimension)):
                if dim is not None and dim != self.dimension:
                    raise DimensionError(self.dimension, dim, what=f"component {pos} {what}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def build(cls, dimension: int, parts: Iterable[tuple[Region, Metric]]) -> "MultiMetricSpace":
        """Assemble a space from (region, metric) pairs, numbering them 1..m."""
        comps = tuple(ComponentSpace(i, r, m) for i, (r, m) in enumerate(parts, start=1))
        return cls(dimension, comps)

    @property
    def m(self) -> int:
        return len(self.components)

    def component(self, k: int) -> ComponentSpace:
        if not 1 <= k <= self.m:
            raise ConfigurationError(f"no component {k}; valid ids are 1..{self.m}")
        return self.components[k - 1]

    def point(self, x) -> np.ndarray:
        return as_point(x, self.dimension)


def components_of(space: MultiMetricSpace, x) -> frozenset[int]:
    """Ids of every component whose (closed) region contains ``x``."""
    x = space.point(x)
    return frozenset(c.id for c in space.components if c.contains(x))


def distance(space: MultiMetricSpace, x, y) -> PartialDistance:
    """Smallest rho_k(x, y) over components k holding both points.

    Ties go to the lowest id; no shared component gives ``INCOMPARABLE``.
    """
    x, y = space.point(x), space.point(y)
    best = None
    for c in space.components:
        if c.contains(x) and c.contains(y):
            d = c.distance(x, y)
            if best is None or d < best.value:
                best = Comparable(d, c.id)
    return INCOMPARABLE if best is None else best


def in_disk(space: MultiMetricSpace, disk: DiskSpec, y) -> bool:
    """Membership in the R-disk: some component k holds both the centre and
    ``y`` with rho_k(y, centre) strictly below the radius."""
    y = space.point(y)
    center = space.point(disk.center)
    return any(
        c.contains(center) and c.contains(y) and c.distance(y, center) < disk.radius
        for c in space.components
    )


def validate_disk(space: MultiMetricSpace, disk: DiskSpec) -> None:
    if not components_of(space, disk.center):
        raise ConfigurationError(f"disk centre {disk.center.tolist()} lies in no component")


def bounding_disk(space: MultiMetricSpace, points: Sequence) -> DiskSpec | None:
    """A disk around ``points[0]`` containing every point, or None.

    Only components holding all the points qualify; among those, the one
    with the smallest maximal distance from the first point sets the radius
    (that maximum plus one).
    """
    pts = [space.point(p) for p in points]
    if not pts:
        raise ConfigurationError("bounding_disk needs at least one point")
    first = pts[0]
    best = None
    for c in space.components:
        if not all(c.contains(p) for p in pts):
            continue
        reach = max(c.distance(p, first) for p in pts)
        if best is None or reach < best:
            best = reach
    if best is None:
        return None
    return DiskSpec(first, 1.0 + best)
