"""Command-line front end.

    polymetric run <scenario.json> --out <dir> [--seed N] [--tol X]
    polymetric ellipse --a A --b B --samples N --out <dir> [--r R]

Exit codes: 0 success, 1 scenario validation failure, 2 mathematical
failure (axiom violation, not a contraction, no convergence, ...).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, MathematicalError
from .fixedpoint import banach_solve, solve
from .metrics import WeightedEuclidean, Euclidean, check_metric_axioms, sample_axioms
from .scenario import Scenario, ScenarioError, load_scenario
from .sequences import classify_convergence, is_cauchy, nested_disk_intersection
from .space import components_of, in_disk

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MATH = 2


def fmt(value) -> str:
    """17 significant digits: enough to round-trip any double."""
    if value is None:
        return ""
    return format(float(value), ".17g")


def param(value) -> str:
    """Shortest round-trip form, for echoing inputs."""
    return repr(float(value))


def fmt_point(x) -> str:
    return "(" + ", ".join(fmt(v) for v in np.asarray(x).reshape(-1)) + ")"


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


@dataclass
class EllipseDemoResult:
    a: float
    b: float
    r: float
    sample_count: int
    max_deviation: float
    csv_rows: list

    header = ("angle", "x", "y", "euclidean_distance", "weighted_distance")


def ellipse_demo(a: float, b: float, sample_count: int = 360, r: float = 1.0) -> EllipseDemoResult:
    """Rescale the axes so the ellipse x^2/a^2 + y^2/b^2 = 1 becomes a circle.

    Points (a cos t, b sin t) are measured from the origin under both the
    Euclidean metric and the weighted metric with weights (r/a, r/b); the
    latter is identically r.
    """
    if not (a > 0 and b > 0 and r > 0):
        raise ConfigurationError(f"semi-axes and radius must be positive, got a={a}, b={b}, r={r}")
    if sample_count < 4:
        raise ConfigurationError("sample_count must be at least 4")
    theta = 2 * np.pi * np.arange(sample_count) / sample_count
    pts = np.column_stack([a * np.cos(theta), b * np.sin(theta)])
    origin = np.zeros_like(pts)
    plain = Euclidean().batch(pts, origin)
    weighted = WeightedEuclidean((r / a, r / b)).batch(pts, origin)
    rows = [
        (fmt(t), fmt(x), fmt(y), fmt(e), fmt(w))
        for t, (x, y), e, w in zip(theta, pts, plain, weighted)
    ]
    return EllipseDemoResult(a, b, r, sample_count, float(np.max(np.abs(weighted - r))), rows)


def _ellipse_outputs(res: EllipseDemoResult, out: Path) -> list[str]:
    write_csv(out / "ellipse.csv", res.header, res.csv_rows)
    eu = [float(row[3]) for row in res.csv_rows]
    return [
        f"ellipse: a = {param(res.a)}, b = {param(res.b)}, samples = {res.sample_count}",
        f"rescaled metric: weighted euclidean, weights ({fmt(res.r / res.a)}, {fmt(res.r / res.b)})",
        f"euclidean distance range: [{fmt(min(eu))}, {fmt(max(eu))}]",
        f"target circle radius: {param(res.r)}",
        f"max_deviation: {fmt(res.max_deviation)}",
    ]


def _run_axioms(sc: Scenario, out: Path) -> list[str]:
    p = sc.params
    rep = check_metric_axioms(p["metric"], p["dimension"], p["samples"], p["seed"], p["tolerance"])
    s = sample_axioms(p["metric"], p["dimension"], p["samples"], p["seed"])
    rows = (
        (i, fmt(a), fmt(b), fmt(c), fmt(d), fmt(e))
        for i, (a, b, c, d, e) in enumerate(zip(s.d_xy, s.d_yx, s.d_yz, s.d_xz, s.triangle_slack))
    )
    write_csv(out / "axioms.csv", ("sample", "d_xy", "d_yx", "d_yz", "d_xz", "triangle_slack"), rows)
    lines = [
        f"axiom check: dimension {p['dimension']}, seed {p['seed']}, tolerance {param(p['tolerance'])}",
        f"samples_tested: {rep.samples_tested}",
        f"definiteness_failures: {rep.definiteness_failures}",
        f"symmetry_failures: {rep.symmetry_failures}",
        f"triangle_failures: {rep.triangle_failures}",
        f"worst_triangle_slack: {fmt(rep.worst_triangle_slack)}",
        f"verdict: {rep.verdict}",
    ]
    _write_report(out, ["kind: axioms", *lines])
    rep.raise_for_failure()
    return lines


def _sequence_csv(sc: Scenario, pts: np.ndarray, out: Path, name: str) -> None:
    d = sc.space.dimension
    header = ["index"] + [f"x{i}" for i in range(d)] + ["components"]
    rows = []
    for n, x in enumerate(pts):
        comps = " ".join(str(k) for k in sorted(components_of(sc.space, x)))
        rows.append([n, *(fmt(v) for v in x), comps])
    write_csv(out / name, header, rows)


def _run_sequence(sc: Scenario, out: Path) -> list[str]:
    p = sc.params
    pts = p["sequence"].materialize(sc.space)
    _sequence_csv(sc, pts, out, "sequence.csv")
    if sc.kind == "sequence":
        rep = classify_convergence(sc.space, pts, p["tail_window"], p["tolerance"])
        lines = [
            f"convergence: length {len(pts)}, tail_window {p['tail_window']}, tolerance {param(p['tolerance'])}",
            f"verdict: {rep.verdict}",
            f"eventual_component: {rep.eventual_component}",
            f"stabilization_index: {rep.stabilization_index}",
            f"limit_estimate: {fmt_point(rep.limit_estimate) if rep.limit_estimate is not None else None}",
            f"final_residual: {fmt(rep.final_residual) if rep.final_residual is not None else None}",
        ]
    else:
        rep = is_cauchy(sc.space, pts, p["tail_window"], p["tolerance"])
        lines = [
            f"cauchy: length {len(pts)}, tail_window {p['tail_window']}, tolerance {param(p['tolerance'])}",
            f"verdict: {rep.verdict}",
            f"witness_component: {rep.witness_component}",
            f"stabilization_index: {rep.stabilization_index}",
            f"max_tail_gap: {fmt(rep.max_tail_gap)}",
        ]
    lines.append("note: verdicts are detections on a finite prefix, not proofs")
    return lines


def _run_solve(sc: Scenario, out: Path) -> list[str]:
    p = sc.params
    rep = solve(
        sc.space,
        p["map"],
        p["tolerance"],
        p["max_iterations"],
        p["dedup_tolerance"],
        samples_per_component=p["samples_per_component"],
        seed=p["seed"],
        keep_orbits=True,
    )
    d = sc.space.dimension
    coords = [f"x{i}" for i in range(d)]
    write_csv(
        out / "fixed_points.csv",
        ["seed_component", "component", *coords, "residual", "iterations"],
        [[fp.seed_component, fp.component, *(fmt(v) for v in fp.point), fmt(fp.residual), fp.iterations]
         for fp in rep.points],
    )
    rows = []
    for k, orbit in sorted(rep.orbits.items()):
        for n, x in enumerate(orbit):
            rows.append([k, n, *(fmt(v) for v in x)])
    write_csv(out / "orbits.csv", ["seed_component", "iteration", *coords], rows)

    est = rep.estimate
    routing = ", ".join(f"{i}->{j}" for i, j in sorted(est.routing.entries.items()))
    lines = [
        f"{sc.kind}: m = {sc.space.m}, tolerance {param(p['tolerance'])}, dedup_tolerance {param(p['dedup_tolerance'])}",
        f"alpha_hat: {fmt(est.alpha_hat)}",
        f"routing: {routing}",
        f"violations: {est.violations}",
        f"fixed points: {rep.count}",
    ]
    for fp in rep.points:
        lines.append(
            f"  component {fp.component} (seed {fp.seed_component}): point {fmt_point(fp.point)}, "
            f"residual {fmt(fp.residual)}, iterations {fp.iterations}"
        )
    for diag in rep.diagnostics:
        if not diag.converged:
            lines.append(f"  seed {diag.seed_component} did not converge (last step {fmt(diag.last_step)})")
    lines.append(f"1 ≤ count ≤ m: {'OK' if rep.count_within_bounds else 'FAILED'}")
    return lines


def _run_banach(sc: Scenario, out: Path) -> list[str]:
    # banach_solve is solve() on a one-component space; reuse its reporting
    comp = sc.space.components[0]
    p = sc.params
    point, residual = banach_solve(
        comp.region, comp.metric, p["map"], p["tolerance"], p["max_iterations"],
        samples_per_component=p["samples_per_component"], seed=p["seed"],
    )
    lines = _run_solve(sc, out)
    lines.insert(0, f"unique fixed point: {fmt_point(point)}, residual {fmt(residual)}")
    return lines


def _run_nested(sc: Scenario, out: Path) -> list[str]:
    disks = sc.params["disks"]
    est = nested_disk_intersection(sc.space, disks)
    d = sc.space.dimension
    rows = [
        [j, *(fmt(v) for v in disk.center), fmt(disk.radius), int(in_disk(sc.space, disk, est))]
        for j, disk in enumerate(disks)
    ]
    write_csv(out / "disks.csv", ["disk", *(f"c{i}" for i in range(d)), "radius", "contains_estimate"], rows)
    return [
        f"nested disks: {len(disks)}",
        f"intersection estimate: {fmt_point(est)}",
        f"estimate in every disk: {all(r[-1] for r in rows)}",
    ]


_RUNNERS = {
    "axioms": _run_axioms,
    "sequence": _run_sequence,
    "cauchy": _run_sequence,
    "solve": _run_solve,
    "banach": _run_banach,
    "nested-disks": _run_nested,
    "ellipse": lambda sc, out: _ellipse_outputs(
        ellipse_demo(sc.params["a"], sc.params["b"], sc.params["samples"], sc.params["r"]), out
    ),
}


def _write_report(out: Path, lines) -> None:
    (out / "report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def run(scenario_path, output_dir, seed: int | None = None, tol: float | None = None) -> int:
    """Execute a scenario file, writing report.txt and CSVs to ``output_dir``."""
    out = Path(output_dir)
    try:
        sc = load_scenario(scenario_path)
        if seed is not None and "seed" in sc.params:
            sc.params["seed"] = seed
        if tol is not None:
            if not tol > 0:
                raise ScenarioError("--tol", "must be > 0")
            if "tolerance" in sc.params:
                sc.params["tolerance"] = tol
        out.mkdir(parents=True, exist_ok=True)
    except (ConfigurationError, OSError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        lines = _RUNNERS[sc.kind](sc, out)
    except MathematicalError as exc:
        print(f"mathematical failure: {exc}", file=sys.stderr)
        report = out / "report.txt"
        prior = report.read_text(encoding="utf-8").splitlines() if report.exists() else [f"kind: {sc.kind}"]
        _write_report(out, [*prior, f"error: {exc}"])
        return EXIT_MATH
    _write_report(out, [f"kind: {sc.kind}", *lines])
    return EXIT_OK


def _positive(value: str) -> float:
    v = float(value)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polymetric", description="Multi-metric space toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a JSON scenario file")
    r.add_argument("scenario", type=Path)
    r.add_argument("--out", type=Path, required=True, help="output directory")
    r.add_argument("--seed", type=int, default=None, help="override the scenario's seed")
    r.add_argument("--tol", type=float, default=None, help="override the scenario's tolerance")

    e = sub.add_parser("ellipse", help="ellipse-to-circle metric rescaling demo")
    e.add_argument("--a", type=_positive, required=True, help="semi-axis along x")
    e.add_argument("--b", type=_positive, required=True, help="semi-axis along y")
    e.add_argument("--samples", type=int, default=360)
    e.add_argument("--r", type=_positive, default=1.0, help="target circle radius")
    e.add_argument("--out", type=Path, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run(args.scenario, args.out, args.seed, args.tol)
    try:
        res = ellipse_demo(args.a, args.b, args.samples, args.r)
        args.out.mkdir(parents=True, exist_ok=True)
    except (ConfigurationError, OSError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _write_report(args.out, ["kind: ellipse", *_ellipse_outputs(res, args.out)])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
