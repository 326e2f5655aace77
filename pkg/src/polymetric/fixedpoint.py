"""Multi-seed Banach iteration on a multi-metric space.

One orbit is seeded in every component. For a contraction each orbit
settles in some component and converges to a fixed point there; distinct
limits are the fixed points of T, so there are between 1 and m of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    MapUndefinedError,
    MathematicalError,
    NoConvergenceError,
    NotAContractionError,
    ResidualIncomparableError,
)
from .maps import ContractionMap, apply_map
from .metrics import DEFAULT_SEED, Metric
from .space import Comparable, MultiMetricSpace, Region, components_of, distance

MIN_PAIR_DISTANCE = 1e-12
ALPHA_FLOOR = 1e-6


@dataclass(frozen=True)
class RoutingTable:
    entries: Mapping[int, int]

    def __getitem__(self, i):
        return self.entries[i]

    def __contains__(self, i):
        return i in self.entries


@dataclass(frozen=True)
class ContractionEstimate:
    alpha_hat: float
    routing: RoutingTable
    samples_per_component: int
    violations: int

    @property
    def accepted(self) -> bool:
        return self.alpha_hat < 1 and self.violations == 0


@dataclass(frozen=True, eq=False)
class FixedPoint:
    component: int
    point: np.ndarray
    residual: float
    iterations: int
    seed_component: int


@dataclass(frozen=True)
class SeedDiagnostic:
    seed_component: int
    iterations: int
    last_step: float
    converged: bool


@dataclass(frozen=True, eq=False)
class FixedPointReport:
    points: tuple[FixedPoint, ...]
    estimate: ContractionEstimate
    m: int
    diagnostics: tuple[SeedDiagnostic, ...] = field(default=())
    orbits: Mapping[int, np.ndarray] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def count_within_bounds(self) -> bool:
        return 1 <= self.count <= self.m


def estimate_contraction(
    space: MultiMetricSpace,
    map: ContractionMap,
    samples_per_component: int = 64,
    seed: int = DEFAULT_SEED,
) -> ContractionEstimate:
    """Sample each component, find where its image lands, and measure the
    worst ratio rho_j(Tx, Ty) / rho_i(x, y) over all sampled pairs.

    The target j of component i is the component holding the most images
    (lowest id on ties); every image outside M_j, including images that
    leave all regions or points where T is undefined, is a violation.
    """
    if samples_per_component < 2:
        raise ValueError("samples_per_component must be at least 2")
    rng = np.random.default_rng(seed)
    alpha = 0.0
    routing = {}
    violations = 0
    for comp in space.components:
        xs = comp.region.sample(rng, samples_per_component, space.dimension)
        images = []
        for x in xs:
            try:
                images.append(apply_map(map, x, space))
            except MapUndefinedError:
                images.append(None)
        votes = {}
        for img in images:
            for j in components_of(space, img) if img is not None else ():
                votes[j] = votes.get(j, 0) + 1
        if not votes:
            violations += len(xs)
            continue
        j = min(votes, key=lambda k: (-votes[k], k))
        routing[comp.id] = j
        target = space.component(j)
        ok = [img is not None and target.contains(img) for img in images]
        violations += ok.count(False)

        keep = np.flatnonzero(ok)
        if keep.size < 2:
            continue
        X, TX = xs[keep], np.array([images[i] for i in keep])
        a, b = np.triu_indices(len(keep), k=1)
        d_src = comp.metric.batch(X[a], X[b])
        d_img = target.metric.batch(TX[a], TX[b])
        mask = d_src > MIN_PAIR_DISTANCE
        if np.any(mask):
            alpha = max(alpha, float(np.max(d_img[mask] / d_src[mask])))
    return ContractionEstimate(alpha, RoutingTable(routing), samples_per_component, violations)


def verify_fixed_point(space: MultiMetricSpace, map: ContractionMap, x) -> float:
    """rho(x, T(x)) in the best shared component."""
    x = space.point(x)
    tx = apply_map(map, x, space)
    d = distance(space, x, tx)
    if not isinstance(d, Comparable):
        raise ResidualIncomparableError(x, tx)
    return d.value


def stopping_step(tolerance: float, alpha: float) -> float:
    """Step size below which the geometric tail bound alpha/(1-alpha)*step
    guarantees the iterate is within ``tolerance`` of the limit."""
    return tolerance * (1.0 - alpha) / max(alpha, ALPHA_FLOOR)


def _run_orbit(space, map, start, threshold, max_iterations, keep_orbit):
    x = start
    orbit = [x] if keep_orbit else None
    step = float("inf")
    for it in range(1, max_iterations + 1):
        x_next = apply_map(map, x, space)
        if keep_orbit:
            orbit.append(x_next)
        d = distance(space, x, x_next)
        step = d.value if isinstance(d, Comparable) else float("inf")
        x = x_next
        if step <= threshold:
            return x, it, step, True, orbit
    return x, max_iterations, step, False, orbit


def solve(
    space: MultiMetricSpace,
    map: ContractionMap,
    tolerance: float = 1e-10,
    max_iterations: int = 10_000,
    dedup_tolerance: float = 1e-6,
    *,
    samples_per_component: int = 64,
    seed: int = DEFAULT_SEED,
    seeds: Mapping[int, object] | None = None,
    keep_orbits: bool = False,
) -> FixedPointReport:
    """Find the fixed points of a contraction, one orbit per component.

    Orbits start at each region's centre unless ``seeds`` overrides them by
    component id. An orbit stops once its step is at most
    ``tolerance * (1 - alpha) / alpha``; limits closer than
    ``dedup_tolerance`` are merged, keeping the smaller residual.

    Raises NotAContractionError if sampling finds alpha_hat >= 1 or any
    routing violation, and NoConvergenceError if no orbit converges.
    """
    if not (tolerance > 0 and dedup_tolerance > 0):
        raise ValueError("tolerance and dedup_tolerance must be positive")
    est = estimate_contraction(space, map, samples_per_component, seed)
    if not est.accepted:
        raise NotAContractionError(est)
    alpha = est.alpha_hat
    if map.claimed_alpha is not None:
        alpha = max(alpha, map.claimed_alpha)
    threshold = stopping_step(tolerance, alpha)

    seeds = dict(seeds or {})
    found: list[FixedPoint] = []
    diagnostics = []
    orbits = {}
    for comp in space.components:
        start = space.point(seeds.get(comp.id, comp.region.center(space.dimension)))
        x, its, step, converged, orbit = _run_orbit(space, map, start, threshold, max_iterations, keep_orbits)
        if keep_orbits:
            orbits[comp.id] = np.array(orbit)
        residual = None
        if converged:
            try:
                residual = verify_fixed_point(space, map, x)
            except MathematicalError:
                converged = False
        if converged and residual > tolerance:
            converged = False
        diagnostics.append(SeedDiagnostic(comp.id, its, step, converged))
        if converged:
            via = distance(space, x, apply_map(map, x, space)).via_component
            found.append(FixedPoint(via, x, residual, its, comp.id))

    if not found:
        raise NoConvergenceError(diagnostics)

    kept: list[FixedPoint] = []
    for fp in found:
        for i, other in enumerate(kept):
            d = distance(space, fp.point, other.point)
            if isinstance(d, Comparable) and d.value <= dedup_tolerance:
                if fp.residual < other.residual:
                    kept[i] = fp
                break
        else:
            kept.append(fp)
    kept.sort(key=lambda fp: fp.seed_component)

    report = FixedPointReport(tuple(kept), est, space.m, tuple(diagnostics), orbits)
    assert report.count_within_bounds, report.count
    return report


def banach_solve(
    region: Region,
    metric: Metric,
    map: ContractionMap,
    tolerance: float = 1e-10,
    max_iterations: int = 10_000,
    **kwargs,
) -> tuple[np.ndarray, float]:
    """Unique fixed point of a contraction on a single metric space."""
    dim = region.dimension or metric.dimension or getattr(map.rule, "dimension", None) or 1
    space = MultiMetricSpace.build(dim, [(region, metric)])
    report = solve(space, map, tolerance, max_iterations, **kwargs)
    (fp,) = report.points
    return fp.point, fp.residual
