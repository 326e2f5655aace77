"""Convergence and Cauchy detection on finite sequence prefixes.

Every verdict here is a detection over the supplied prefix at a stated
tail window and tolerance. A finite prefix can never prove convergence;
``Convergent`` means "indistinguishable from convergent at this scale".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, NestingError, PreconditionError
from .maps import ContractionMap, iterate
from .metrics import as_point
from .space import DiskSpec, MultiMetricSpace, components_of, in_disk, validate_disk

DEFAULT_WINDOW = 10
DEFAULT_TOLERANCE = 1e-9


class Verdict(str, enum.Enum):
    CONVERGENT = "Convergent"
    CAUCHY = "Cauchy"
    NOT_DETECTED = "NotDetected"

    def __str__(self):
        return self.value


class SequenceSample:
    def materialize(self, space: MultiMetricSpace) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Explicit(SequenceSample):
    points: Sequence

    def materialize(self, space):
        pts = np.array([space.point(p) for p in self.points])
        if len(pts) < 2:
            raise ConfigurationError("a sequence needs at least two points")
        return pts


@dataclass(frozen=True, eq=False)
class Iterated(SequenceSample):
    """start, T(start), T(T(start)), ... truncated to ``length`` points."""

    map: ContractionMap
    start: Sequence
    length: int

    def materialize(self, space):
        if self.length < 2:
            raise ConfigurationError("a sequence needs at least two points")
        return iterate(self.map, space.point(self.start), self.length, space)


def _points(space, seq) -> np.ndarray:
    if isinstance(seq, SequenceSample):
        return seq.materialize(space)
    return Explicit(seq).materialize(space)


def _witness(space: MultiMetricSpace, pts: np.ndarray) -> tuple[int, int] | None:
    members = [components_of(space, p) for p in pts]
    n = len(pts)
    best = None
    for k in sorted(members[-1]):
        N = n - 1
        while N > 0 and k in members[N - 1]:
            N -= 1
        if best is None or N < best[1]:
            best = (k, N)
    # a one-point tail is not evidence of stabilization
    if best is None or best[1] > n - 2:
        return None
    return best


def eventual_component(space: MultiMetricSpace, seq) -> tuple[int, int] | None:
    """The (k, N) pair such that M_k holds every x_n with n >= N.

    N is the smallest such index and k the lowest id achieving it. Returns
    None when the last point lies in no component or the last two points
    share none.
    """
    return _witness(space, _points(space, seq))


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    verdict: Verdict
    limit_estimate: np.ndarray | None = None
    eventual_component: int | None = None
    stabilization_index: int | None = None
    final_residual: float | None = None

    @property
    def convergent(self) -> bool:
        return self.verdict is Verdict.CONVERGENT


@dataclass(frozen=True)
class CauchyReport:
    verdict: Verdict
    witness_component: int | None
    stabilization_index: int | None
    max_tail_gap: float

    @property
    def cauchy(self) -> bool:
        return self.verdict is Verdict.CAUCHY


def _check_params(tail_window, tolerance):
    if tail_window < 2:
        raise ConfigurationError("tail_window must be at least 2")
    if not tolerance > 0:
        raise ConfigurationError("tolerance must be positive")


def classify_convergence(
    space: MultiMetricSpace,
    seq,
    tail_window: int = DEFAULT_WINDOW,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ConvergenceReport:
    """Detect convergence in the eventual component.

    The last ``tail_window`` points must all lie in the eventual component
    M_k and within ``tolerance`` (under rho_k) of the final point, which is
    then reported as the limit estimate. ``stabilization_index`` is the
    first index from which every later point is within tolerance.
    """
    _check_params(tail_window, tolerance)
    pts = _points(space, seq)
    n = len(pts)
    w = _witness(space, pts)
    if w is None:
        return ConvergenceReport(Verdict.NOT_DETECTED)
    k, N = w
    window = min(tail_window, n)
    metric = space.component(k).metric
    last = pts[-1]
    tail = metric.batch(pts[N:], np.broadcast_to(last, pts[N:].shape))
    residual = float(np.max(tail[-window:])) if N <= n - window else None
    if residual is None or residual > tolerance:
        return ConvergenceReport(Verdict.NOT_DETECTED, eventual_component=k, final_residual=residual)
    far = np.flatnonzero(tail > tolerance)
    stab = N + (int(far[-1]) + 1 if far.size else 0)
    return ConvergenceReport(
        Verdict.CONVERGENT,
        limit_estimate=as_point(last),
        eventual_component=k,
        stabilization_index=stab,
        final_residual=residual,
    )


def _max_pairwise(metric, pts: np.ndarray) -> float:
    i, j = np.triu_indices(len(pts), k=1)
    if i.size == 0:
        return 0.0
    return float(np.max(metric.batch(pts[i], pts[j])))


def is_cauchy(
    space: MultiMetricSpace,
    seq,
    tail_window: int = DEFAULT_WINDOW,
    tolerance: float = DEFAULT_TOLERANCE,
) -> CauchyReport:
    """Detect the Cauchy property in the eventual component M_s.

    ``max_tail_gap`` is the largest rho_s(x_m, x_n) over all pairs in the
    last ``tail_window`` points (infinite when no component witness exists).
    """
    _check_params(tail_window, tolerance)
    pts = _points(space, seq)
    n = len(pts)
    w = _witness(space, pts)
    if w is None:
        return CauchyReport(Verdict.NOT_DETECTED, None, None, float("inf"))
    s, N = w
    window = min(tail_window, n)
    metric = space.component(s).metric
    gap = _max_pairwise(metric, pts[n - window:])
    if N > n - window or gap > tolerance:
        return CauchyReport(Verdict.NOT_DETECTED, s, None, gap)

    # suffix diameters: diam(i) = max(diam(i+1), max_j>i rho(x_i, x_j))
    stab = n - window
    diam = gap
    for i in range(n - window - 1, N - 1, -1):
        later = pts[i + 1:]
        diam = max(diam, float(np.max(metric.batch(np.broadcast_to(pts[i], later.shape), later))))
        if diam > tolerance:
            break
        stab = i
    return CauchyReport(Verdict.CAUCHY, s, stab, gap)


def limit_metric_consistency(
    space: MultiMetricSpace,
    seq_x,
    seq_y,
    p: int,
    tail_window: int = DEFAULT_WINDOW,
    tolerance: float = DEFAULT_TOLERANCE,
    index: int | None = None,
) -> float:
    """|rho_p(x_n, y_n) - rho_p(x0, y0)| for the detected limits x0, y0.

    The limits are the final points of each prefix, so the comparison is
    made at ``index`` (default: the second-to-last common index). For
    convergent sequences the value shrinks as the prefix grows.
    """
    comp = space.component(p)
    xs, ys = _points(space, seq_x), _points(space, seq_y)
    limits = []
    for name, pts in (("seq_x", xs), ("seq_y", ys)):
        rep = classify_convergence(space, pts, tail_window, tolerance)
        if not rep.convergent:
            raise PreconditionError(f"{name} is not detected as convergent", name)
        if not comp.contains(rep.limit_estimate):
            raise PreconditionError(f"{name} has its limit outside component {p}", name)
        limits.append(rep.limit_estimate)
    n = min(len(xs), len(ys))
    if index is None:
        index = n - 2
    if not 0 <= index < n:
        raise ConfigurationError(f"index {index} outside 0..{n - 1}")
    at_n = comp.distance(xs[index], ys[index])
    at_limit = comp.distance(*limits)
    return abs(at_n - at_limit)


def nested_disk_intersection(space: MultiMetricSpace, disks: Sequence[DiskSpec]) -> np.ndarray:
    """Estimate the single point common to a nested, shrinking disk chain.

    Radii must strictly decrease and each centre must lie in the previous
    disk. The estimate is the last centre; it is verified to lie in every
    supplied disk.
    """
    disks = list(disks)
    if len(disks) < 2:
        raise ConfigurationError("need at least two disks")
    for d in disks:
        validate_disk(space, d)
    for j in range(len(disks) - 1):
        if not disks[j + 1].radius < disks[j].radius:
            raise NestingError(
                f"radii do not strictly decrease at disks {j} -> {j + 1} "
                f"({disks[j].radius} -> {disks[j + 1].radius})",
                j,
            )
        if not in_disk(space, disks[j], disks[j + 1].center):
            raise NestingError(f"disk {j + 1} is not nested in disk {j}: its centre lies outside", j)
    estimate = space.point(disks[-1].center)
    for j, d in enumerate(disks):
        if not in_disk(space, d, estimate):
            raise NestingError(f"intersection estimate lies outside disk {j}", j)
    return estimate
