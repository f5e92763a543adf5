"""Randomized invariant checks across the whole pipeline."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_multipeakon
from hsalpha.eulerian import EnergyMeasure, PiecewiseLinear
from hsalpha.evolution import evolve, total_energy
from hsalpha.lagrangian import breaking_time, to_lagrangian
from hsalpha.metrics import l2_diff, linf_diff, w1
from hsalpha.numerics import exact_cumsum
from hsalpha.projection import ProjectionConfig, project
from hsalpha.pushforward import to_eulerian

_EPS = float(np.finfo(np.float64).eps)


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.floats(-1e8, 1e8), min_size=1, max_size=60))
def test_exact_cumsum_tracks_exact_prefixes(xs):
    arr = np.array(xs)
    got = exact_cumsum(arr)
    cum_abs = np.cumsum(np.abs(arr))
    n = arr.size
    for i in range(n):
        want = math.fsum(xs[: i + 1])
        # one final rounding plus the (second-order) cost of summing the
        # recovered per-step corrections naively
        tol = 4.0 * _EPS * abs(want) + 16.0 * n * n * _EPS * _EPS * cum_abs[i] + 1e-290
        assert abs(got[i] - want) <= tol


@settings(max_examples=1000, deadline=None)
@given(d_y=st.floats(1e-8, 1e3), d_U=st.floats(-1e3, -1e-8))
def test_breaking_time_is_the_cell_quadratic_root(d_y, d_U):
    tau = breaking_time(d_y, d_U)
    assert 0.0 < tau < np.inf
    # on-manifold cell: d_V fixed by the algebraic relation
    d_V = d_U * d_U / d_y
    scale = d_y + abs(d_U) + d_V
    assert abs(d_y + tau * d_U + 0.25 * tau * tau * d_V) <= 1e-12 * scale
    assert abs(d_U + 0.5 * tau * d_V) <= 1e-12 * scale
    # strictly before tau the cell is still open (value is d_y / 4 there)
    assert d_y + 0.5 * tau * d_U + 0.0625 * tau * tau * d_V > 0.0


@settings(max_examples=1000, deadline=None)
@given(d_y=st.floats(0.0, 1e3), d_U=st.floats(0.0, 1e3))
def test_breaking_time_nonnegative_slopes_never_break(d_y, d_U):
    if d_y == 0.0 and d_U == 0.0:
        assert breaking_time(d_y, d_U) == 0.0
    else:
        assert breaking_time(d_y, d_U) == np.inf


@settings(max_examples=150, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    alpha=st.floats(0.0, 1.0),
    t=st.floats(0.0, 8.0),
)
def test_flow_preserves_cell_structure(seed, alpha, t):
    rng = np.random.default_rng(seed)
    d = random_multipeakon(rng)
    s0 = to_lagrangian(project(d, ProjectionConfig(dx=0.125)), alpha=alpha)
    s = evolve(s0, t)

    # the per-cell relation d_y d_V = d_U^2 is transported by the flow and
    # restored exactly by every dissipation event; the derivatives are
    # difference quotients of O(|V|) nodal values, so cancellation leaves
    # residue ~ eps * mag^2 / width on nearly rigid cells
    lhs = s.d_y * s.d_V
    rhs = s.d_U * s.d_U
    mag = max(1.0, *(float(np.max(np.abs(getattr(s, f)))) for f in ("xi", "y", "U", "V")))
    cancel = 4.0 * _EPS * mag * mag / np.diff(s.xi)
    assert np.all(np.abs(lhs - rhs) <= 1e-11 * (np.abs(lhs) + rhs) + cancel)

    # energy density only ever shrinks, and never below zero
    assert np.all(s.d_V >= 0.0)
    assert np.all(s.d_V <= s0.d_V * (1.0 + 1e-15))
    assert np.all(np.diff(s.y) >= -1e-12)
    assert np.all(np.diff(s.V) >= -1e-12)
    assert s.V_inf <= s0.V_inf * (1.0 + 1e-13)
    assert total_energy(s) <= total_energy(s0) * (1.0 + 1e-13)

    sol = to_eulerian(s)
    assert abs(sol.mu.total_mass() - s.V_inf) <= 1e-12 * max(1.0, s.V_inf)
    assert np.all(np.diff(sol.u.nodes) > 0.0)
    assert np.all(np.diff(sol.mu.F_ac.values) >= -1e-13)


@settings(max_examples=100, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    alpha=st.floats(0.0, 1.0),
    t1=st.floats(0.0, 4.0),
    t2=st.floats(0.0, 4.0),
)
def test_two_leg_evolution_matches_direct(seed, alpha, t1, t2):
    t_mid, t_end = sorted((t1, t2))
    rng = np.random.default_rng(seed)
    d = random_multipeakon(rng)
    s0 = to_lagrangian(project(d, ProjectionConfig(dx=0.125)), alpha=alpha)

    mid = evolve(s0, t_mid)
    via = evolve(mid, t_end)
    direct = evolve(s0, t_end)

    assert total_energy(s0) * (1.0 + 1e-13) >= total_energy(mid)
    assert total_energy(mid) * (1.0 + 1e-13) >= total_energy(via)

    scale = max(1.0, float(np.max(np.abs(direct.y))))
    for name in ("y", "U", "V", "d_y", "d_U", "d_V"):
        a = getattr(via, name)
        b = getattr(direct, name)
        np.testing.assert_allclose(a, b, rtol=0.0, atol=5e-13 * scale, err_msg=name)
    assert via.V_inf == pytest.approx(direct.V_inf, rel=0, abs=1e-13)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(1, 3))
def test_projection_interpolates_and_conserves(seed, k):
    rng = np.random.default_rng(seed)
    d = random_multipeakon(rng)
    p = project(d, ProjectionConfig(dx=2.0**-k))

    # even gridpoints reproduce the datum values bit for bit
    xe = p.u.nodes[::2]
    np.testing.assert_array_equal(p.u.values[::2], np.asarray(d.u(xe)))

    # total energy is conserved by the projection
    want = float(d.F_ac(p.window[1]))
    assert abs(p.mu.total_mass() - want) <= 1e-12 * max(1.0, want)

    # the projected cumulative rises exactly like the squared wave slope
    w = np.diff(p.u.nodes)
    s = np.diff(p.u.values) / w
    got = np.diff(p.mu.F_ac.values)
    np.testing.assert_allclose(got, s * s * w, rtol=0.0, atol=1e-12 * max(1.0, want))


def _random_measure(rng):
    lo = float(rng.uniform(-3.0, 0.0))
    inner = np.sort(rng.uniform(lo, lo + 3.0, 4))
    nodes = np.concatenate(([lo - 0.1], inner, [lo + 3.1]))
    ac_mass = float(rng.uniform(0.2, 0.8))
    vals = np.concatenate(([0.0, 0.0], np.cumsum(rng.uniform(0.1, 1.0, 3)), [0.0]))
    vals[2:] *= ac_mass / vals[-2]
    vals[-1] = vals[-2]
    atom = (float(rng.uniform(lo, lo + 3.0)), 1.0 - ac_mass)
    return EnergyMeasure(PiecewiseLinear(nodes, vals), atoms=[atom])


def _shift_measure(m, h):
    moved = PiecewiseLinear(m.F_ac.nodes + h, m.F_ac.values)
    return EnergyMeasure(moved, atoms=[(p + h, w) for p, w in m.atoms])


@settings(max_examples=250, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), shift=st.floats(-5.0, 5.0))
def test_w1_metric_axioms(seed, shift):
    rng = np.random.default_rng(seed)
    m1, m2, m3 = (_random_measure(rng) for _ in range(3))
    d12 = w1(m1, m2)
    assert d12 >= 0.0
    assert w1(m1, m1) <= 1e-15
    assert w1(m2, m1) == pytest.approx(d12, rel=0, abs=1e-13)
    assert w1(m1, m3) <= d12 + w1(m2, m3) + 1e-12
    assert w1(_shift_measure(m1, shift), _shift_measure(m2, shift)) == pytest.approx(
        d12, rel=1e-9, abs=1e-10
    )


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_profile_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    nodes = np.sort(rng.uniform(-2.0, 2.0, 7))
    while np.any(np.diff(nodes) <= 0.0):
        nodes = np.sort(rng.uniform(-2.0, 2.0, 7))

    def compact_pl():
        vals = rng.uniform(-1.0, 1.0, nodes.size)
        vals[0] = vals[-1] = 0.0
        return PiecewiseLinear(nodes, vals)

    a, b, c = compact_pl(), compact_pl(), compact_pl()
    for dist in (linf_diff, l2_diff):
        assert dist(a, a) == 0.0
        assert dist(a, b) == pytest.approx(dist(b, a), rel=0, abs=1e-14)
        assert dist(a, c) <= dist(a, b) + dist(b, c) + 1e-12
