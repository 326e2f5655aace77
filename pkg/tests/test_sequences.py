import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polymetric import (
    Affine,
    ConfigurationError,
    ContractionMap,
    DiskSpec,
    Explicit,
    Iterated,
    NestingError,
    Piecewise,
    PreconditionError,
    Verdict,
    bounding_disk,
    classify_convergence,
    components_of,
    distance,
    eventual_component,
    in_disk,
    is_cauchy,
    limit_metric_consistency,
    nested_disk_intersection,
    solve,
)

from conftest import interval_space, scalar_map


def brute_eventual(space, pts):
    """Oracle: try every (N, k) in order and accept the first that holds."""
    n = len(pts)
    members = [components_of(space, p) for p in pts]
    for N in range(n - 1):
        for k in sorted(set().union(*members)):
            if all(k in members[i] for i in range(N, n)):
                return k, N
    return None


def test_eventual_component_settles_late():
    s = interval_space((0, 1), (2, 3))
    pts = [0.5, 2.5, 0.5, 2.5, 0.5] + [2.5 + 0.1 / (i + 1) for i in range(10)]
    assert brute_eventual(s, pts) == (2, 5)
    assert eventual_component(s, Explicit(pts)) == (2, 5)


def test_eventual_component_trivial_cases():
    s = interval_space((0, 1), (2, 3))
    assert eventual_component(s, Explicit([0.1, 0.2, 0.3])) == (1, 0)
    assert eventual_component(s, Explicit([0.5, 2.5] * 6)) is None
    assert eventual_component(s, Explicit([0.5, 0.6, 1.5])) is None


def test_eventual_component_lowest_id_on_ties():
    s = interval_space((0, 2), (1, 3))
    assert eventual_component(s, Explicit([1.2, 1.5, 1.7])) == (1, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([0.5, 1.5, 2.5, 4.0]), min_size=2, max_size=25))
def test_eventual_component_matches_brute_force(values):
    s = interval_space((0, 2), (1, 3))
    assert eventual_component(s, Explicit(values)) == brute_eventual(s, values)


def test_classify_geometric_decay():
    s = interval_space((0, 1))
    rep = classify_convergence(s, Iterated(scalar_map(0.5, 0.0), [1.0], 60), 10, 1e-9)
    assert rep.verdict is Verdict.CONVERGENT
    assert rep.eventual_component == 1
    # oracle: x_n = 2^-n, so the last point is 2^-59
    assert rep.limit_estimate[0] == 2.0**-59
    assert abs(rep.limit_estimate[0]) <= 1e-9
    # first n with 2^-n - 2^-59 <= 1e-9
    expect = next(n for n in range(60) if 2.0**-n - 2.0**-59 <= 1e-9)
    assert rep.stabilization_index == expect


def test_classify_constant_and_oscillating():
    s = interval_space((0, 1))
    rep = classify_convergence(s, Explicit([0.5] * 12))
    assert rep.convergent and rep.limit_estimate[0] == 0.5 and rep.final_residual == 0.0
    assert classify_convergence(s, Explicit([0.0, 1.0] * 10)).verdict is Verdict.NOT_DETECTED


def test_classify_requires_window_inside_component():
    s = interval_space((0, 1), (2, 3))
    pts = [2.5] * 5 + [0.5] * 5
    assert classify_convergence(s, Explicit(pts), tail_window=5).convergent
    assert not classify_convergence(s, Explicit(pts), tail_window=6).convergent


def test_classify_parameter_checks():
    s = interval_space((0, 1))
    with pytest.raises(ConfigurationError):
        classify_convergence(s, Explicit([0.5, 0.5]), tail_window=1)
    with pytest.raises(ConfigurationError):
        classify_convergence(s, Explicit([0.5, 0.5]), tolerance=0)
    with pytest.raises(ConfigurationError):
        classify_convergence(s, Explicit([0.5]))


def test_cauchy_contraction():
    s = interval_space((0, 1))
    rep = is_cauchy(s, Iterated(scalar_map(0.5, 0.1), [1.0], 60))
    assert rep.cauchy and rep.witness_component == 1
    # oracle: x_n = 0.2 + 0.8 * 2^-n; tail pairs differ by at most 0.8 * 2^-50
    assert rep.max_tail_gap <= 0.8 * 2.0**-50 + 1e-16


def test_cauchy_harmonic_not_detected():
    s = interval_space((0, 10))
    partial = np.cumsum(1.0 / np.arange(1, 31))
    tail = partial[-10:]
    gap_table = np.abs(tail[:, None] - tail[None, :])
    rep = is_cauchy(s, Explicit(partial), 10, 1e-6)
    assert rep.verdict is Verdict.NOT_DETECTED
    assert rep.max_tail_gap == pytest.approx(gap_table.max(), rel=1e-12)
    assert rep.max_tail_gap > 1e-6


def test_cauchy_constant():
    rep = is_cauchy(interval_space((0, 1)), Explicit([0.3] * 15))
    assert rep.cauchy and rep.max_tail_gap == 0 and rep.stabilization_index == 0


def test_cauchy_no_component():
    rep = is_cauchy(interval_space((0, 1)), Explicit([5.0, 6.0, 7.0]))
    assert rep.verdict is Verdict.NOT_DETECTED and rep.witness_component is None


def test_limit_metric_consistency_examples():
    s = interval_space((0, 1))
    assert limit_metric_consistency(s, Explicit([0.2] * 12), Explicit([0.7] * 12), 1) == 0.0
    n = np.arange(50)
    xs, ys = 2.0**-n, 1 - 2.0**-n
    assert limit_metric_consistency(s, Explicit(xs), Explicit(ys), 1) <= 1e-12


def test_limit_metric_consistency_errors():
    s = interval_space((0, 1), (2, 3))
    good = Explicit([0.5] * 12)
    with pytest.raises(PreconditionError) as exc:
        limit_metric_consistency(s, Explicit([0.0, 1.0] * 6), good, 1)
    assert exc.value.which == "seq_x"
    with pytest.raises(PreconditionError) as exc:
        limit_metric_consistency(s, good, Explicit([2.5] * 12), 1)
    assert exc.value.which == "seq_y"


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=0.05, max_value=0.95),
    st.integers(min_value=20, max_value=40),
)
def test_limit_consistency_shrinks_with_prefix(a, b, length):
    # x_n = a * 2^-n, y_n = 1 - b * 2^-n; oracle tail bound (a + b) * 2^-n
    s = interval_space((0, 1))

    def residual(L):
        n = np.arange(L)
        return limit_metric_consistency(s, Explicit(a * 2.0**-n), Explicit(1 - b * 2.0**-n), 1, tolerance=1e-2)

    short, long = residual(length), residual(2 * length)
    assert long <= 2 * short + 1e-15
    assert short <= (a + b) * 2.0 ** -(length - 2) + 1e-15


def test_nested_disks_geometric():
    s = interval_space((0, 1))
    disks = [DiskSpec([2.0**-n], 2.0 ** (-n + 1)) for n in range(1, 41)]
    est = nested_disk_intersection(s, disks)
    assert abs(est[0]) <= 1e-9
    assert all(in_disk(s, d, est) for d in disks)


def test_nested_disks_concentric():
    s = interval_space((0, 1))
    est = nested_disk_intersection(s, [DiskSpec([0.4], 1.0), DiskSpec([0.4], 0.5)])
    assert est.tolist() == [0.4]


def test_nested_disks_errors():
    s = interval_space((0, 1))
    with pytest.raises(NestingError) as exc:
        nested_disk_intersection(s, [DiskSpec([0.1], 0.5), DiskSpec([0.1], 0.3), DiskSpec([0.9], 0.2)])
    assert exc.value.index == 1
    with pytest.raises(NestingError):
        nested_disk_intersection(s, [DiskSpec([0.1], 0.5), DiskSpec([0.1], 0.5)])
    with pytest.raises(ConfigurationError):
        nested_disk_intersection(s, [DiskSpec([0.1], 0.5)])
    with pytest.raises(ConfigurationError):
        nested_disk_intersection(s, [DiskSpec([0.1], 0.5), DiskSpec([4.0], 0.1)])


def test_nested_disks_around_contraction_orbit(cos_map):
    s = interval_space((0, 1))
    report = solve(s, cos_map, tolerance=1e-10, keep_orbits=True)
    fixed = report.points[0].point[0]
    orbit = report.orbits[1][:, 0]
    alpha = 0.85  # >= sin(1), a valid Lipschitz bound of cos on [0, 1]
    step0 = abs(orbit[1] - orbit[0])
    n = np.arange(60)
    radii = 2 * alpha**n * step0 / (1 - alpha)
    disks = [DiskSpec([orbit[i]], radii[i]) for i in n]
    est = nested_disk_intersection(s, disks)
    assert abs(est[0] - fixed) <= 1e-10


# --- properties over contraction-generated sequences -----------------------------

TWO = interval_space((0, 1), (2, 3))


def orbit_family():
    slope = st.floats(min_value=-0.8, max_value=0.8).filter(lambda a: abs(a) > 1e-3)
    shift = st.floats(min_value=0.1, max_value=0.9)
    return st.tuples(slope, shift, st.sampled_from([1, 2]), st.floats(min_value=0, max_value=1))


def _orbit(a, c, k, u, length=200):
    # contract [lo, lo+1] around lo + c, staying inside the interval
    lo = 0.0 if k == 1 else 2.0
    a = a * min(c, 1 - c) / max(c, 1 - c)
    rule = Affine.scalar(a, lo + c - a * (lo + c))
    m = ContractionMap(Piecewise(((k, rule),)))
    return Iterated(m, [lo + u], length)


@settings(max_examples=100, deadline=None)
@given(orbit_family())
def test_uniqueness_of_limit_across_windows(params):
    seq = _orbit(*params)
    r10 = classify_convergence(TWO, seq, 10, 1e-9)
    r20 = classify_convergence(TWO, seq, 20, 1e-9)
    assert r10.convergent and r20.convergent
    assert distance(TWO, r10.limit_estimate, r20.limit_estimate).value <= 2e-9


@settings(max_examples=100, deadline=None)
@given(orbit_family())
def test_convergent_implies_cauchy_and_bounded(params):
    seq = _orbit(*params)
    conv = classify_convergence(TWO, seq, 10, 1e-9)
    assert conv.convergent
    assert is_cauchy(TWO, seq, 10, 2e-9).cauchy
    assert bounding_disk(TWO, seq.materialize(TWO)) is not None


def test_bounded_tail_for_cross_component_sequence(routed_map):
    seq = Iterated(routed_map, [2.5], 80)
    pts = seq.materialize(TWO)
    assert classify_convergence(TWO, seq).convergent
    k, N = eventual_component(TWO, seq)
    assert bounding_disk(TWO, pts) is None  # prefix straddles both intervals
    assert bounding_disk(TWO, pts[N:]) is not None


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=8), st.integers(min_value=2, max_value=10), st.integers(1, 10))
def test_eventual_component_prefix_monotone(lead, tail, extra):
    pts = [2.5 if i % 2 else 0.5 for i in range(lead)] + [0.2] * tail
    before = eventual_component(TWO, Explicit(pts))
    after = eventual_component(TWO, Explicit(pts + [0.9] * extra))
    assert before == after
