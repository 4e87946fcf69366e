import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rwl import (RadialGrid, build_free_profile, eval_linear,
                 exterior_surrogate, generalized_energy, make_params,
                 profile_mass)
from rwl.dalembert import FreeWaveProfile, surrogate_mass_at
from rwl.errors import (BadInterval, CausalWindowExceeded, DomainTooSmall,
                        NegativeRadius)
from rwl.families import SplitMix64, random_bump_data
from rwl.grid import state_from_arrays, trapz


@pytest.fixture
def p7():
    return make_params(7.0, +1)


def make_state(params, grid, w0_fn, w1_fn):
    r = grid.nodes
    return state_from_arrays(params, grid, w0_fn(r), w1_fn(r))


def test_profile_rejects_small_domain(p7):
    g = RadialGrid(8.0, 256)
    st_ = make_state(p7, g, lambda r: np.exp(-r**2), lambda r: 0 * r)
    with pytest.raises(DomainTooSmall):
        build_free_profile(st_, 4.0)


def test_zero_position_gives_odd_fdot(p7):
    g = RadialGrid(8.0, 512)
    st_ = make_state(p7, g, lambda r: 0 * r,
                     lambda r: np.exp(-((r - 2) ** 2)))
    prof = build_free_profile(st_, 10.0)
    k = prof.k
    left = prof.fdot[:k][::-1]
    right = prof.fdot[k + 1:]
    assert np.max(np.abs(left + right)) < 1e-13
    # fdot(r) = r w1(r) / 2 on the data range
    r = g.nodes
    expected = 0.5 * r * st_.wt.values
    assert np.max(np.abs(prof.fdot[k:k + g.n + 1] - expected)) < 1e-13


def test_zero_velocity_gives_even_fdot(p7):
    g = RadialGrid(8.0, 512)
    st_ = make_state(p7, g, lambda r: np.exp(-((r - 2) ** 2)),
                     lambda r: 0 * r)
    prof = build_free_profile(st_, 10.0)
    k = prof.k
    assert np.max(np.abs(prof.fdot[:k][::-1] - prof.fdot[k + 1:])) < 1e-13


def test_gaussian_fdot_matches_symbolic_oracle(p7):
    # w0 = exp(-r^2), w1 = 0: fdot(r) = (1 - 2 r^2) exp(-r^2) / 2
    g = RadialGrid(6.0, 16384)
    st_ = make_state(p7, g, lambda r: np.exp(-r ** 2), lambda r: 0 * r)
    prof = build_free_profile(st_, 8.0)
    r = g.nodes
    oracle = 0.5 * (1.0 - 2.0 * r ** 2) * np.exp(-r ** 2)
    got = prof.fdot[prof.k: prof.k + g.n + 1]
    assert np.max(np.abs(got - oracle)) < 1e-6


def test_eval_roundtrip_at_t0(p7):
    g = RadialGrid(8.0, 1024)
    st_ = make_state(p7, g, lambda r: np.exp(-r ** 2),
                     lambda r: np.exp(-((r - 1) ** 2)))
    prof = build_free_profile(st_, 12.0)
    back = eval_linear(prof, 0.0)
    assert np.max(np.abs(back.w.values - st_.w.values)) <= 10 * g.h ** 2
    assert np.max(np.abs(back.wt.values - st_.wt.values)) <= 10 * g.h ** 2


def test_zero_profile_stays_zero(p7):
    g = RadialGrid(4.0, 128)
    st_ = make_state(p7, g, lambda r: 0 * r, lambda r: 0 * r)
    prof = build_free_profile(st_, 10.0)
    for t in (0.0, 1.5, 5.0):
        snap = eval_linear(prof, t)
        assert np.max(np.abs(snap.w.values)) == 0.0
        assert np.max(np.abs(snap.wt.values)) == 0.0


def test_causal_window_guard(p7):
    g = RadialGrid(4.0, 128)
    st_ = make_state(p7, g, lambda r: 0 * r, lambda r: 0 * r)
    prof = build_free_profile(st_, 6.0)
    with pytest.raises(CausalWindowExceeded):
        eval_linear(prof, 3.0)


def test_strong_huygens_interior_vanishes(p7):
    """Compact data: the state at t is identically zero inside the cone."""
    g = RadialGrid(20.0, 2000)
    rng = SplitMix64(99)
    st_ = random_bump_data(p7, g, rng)       # support inside r <= 7.5
    prof = build_free_profile(st_, 35.0)
    t = 12.0
    snap = eval_linear(prof, t)
    inside = g.nodes <= t - 7.5 - 0.1
    assert np.max(np.abs(snap.w.values[inside])) < 1e-14
    assert np.max(np.abs(snap.wt.values[inside])) < 1e-14
    outside = g.nodes >= t + 7.5 + 0.1
    assert np.max(np.abs(snap.w.values[outside])) < 1e-14


def test_profile_mass_basics(p7):
    g = RadialGrid(4.0, 2048)
    zero = make_state(p7, g, lambda r: 0 * r, lambda r: 0 * r)
    prof = build_free_profile(zero, 6.0)
    assert profile_mass(prof, 3.0, -6.0, 6.0) == 0.0

    # unit fdot on [0, 1]: mass = 1 up to the two smeared edge cells
    k = prof.k
    fdot = np.zeros(2 * k + 1)
    s = prof.s_nodes
    fdot[(s >= 0.0) & (s <= 1.0)] = 1.0
    box = FreeWaveProfile(params=p7, grid=g, k=k, fdot=fdot,
                          f=np.zeros_like(fdot))
    assert profile_mass(box, 3.0, -box.L, box.L) == pytest.approx(
        1.0, abs=2 * g.h)
    with pytest.raises(BadInterval):
        profile_mass(box, 3.0, -100.0, 0.0)


def test_left_right_split_equals_t0_surrogate(p7):
    g = RadialGrid(10.0, 1024)
    st_ = make_state(p7, g, lambda r: np.exp(-((r - 3) ** 2) * 2),
                     lambda r: r * np.exp(-r ** 2))
    prof = build_free_profile(st_, 14.0)
    m = p7.m
    R = 0.75
    split = (profile_mass(prof, m, -prof.L, -R)
             + profile_mass(prof, m, R, prof.L))
    assert exterior_surrogate(prof, m, R, 0.0) == pytest.approx(
        split, rel=1e-12)


def test_surrogate_branches_agree_at_t0(p7):
    g = RadialGrid(10.0, 512)
    st_ = make_state(p7, g, lambda r: np.exp(-((r - 2) ** 2)),
                     lambda r: 0 * r)
    prof = build_free_profile(st_, 15.0)
    down = exterior_surrogate(prof, p7.m, 1.0, -0.0)
    up = exterior_surrogate(prof, p7.m, 1.0, 0.0)
    assert down == pytest.approx(up, rel=1e-14)
    with pytest.raises(NegativeRadius):
        exterior_surrogate(prof, p7.m, -1.0, 0.0)


def test_surrogate_one_sided_support(p7):
    """fdot supported in [-2, -1]: for t >= 0 only the left mass remains."""
    g = RadialGrid(4.0, 512)
    zero = make_state(p7, g, lambda r: 0 * r, lambda r: 0 * r)
    prof = build_free_profile(zero, 6.0)
    s = prof.s_nodes
    fdot = np.where((s >= -2.0) & (s <= -1.0), 1.0, 0.0)
    box = FreeWaveProfile(params=p7, grid=g, k=prof.k, fdot=fdot,
                          f=np.zeros_like(fdot))
    m = 3.0
    full_left = profile_mass(box, m, -box.L, -0.5)
    val = exterior_surrogate(box, m, 0.5, 10.0)
    assert val == pytest.approx(full_left, rel=1e-12)


def test_surrogate_monotone_decay_in_t(p7):
    g = RadialGrid(10.0, 1024)
    st_ = make_state(p7, g, lambda r: np.exp(-((r - 2) ** 2)),
                     lambda r: np.exp(-((r - 4) ** 2)))
    prof = build_free_profile(st_, 20.0)
    vals = [exterior_surrogate(prof, p7.m, 0.5, t)
            for t in np.linspace(0.0, 8.0, 17)]
    diffs = np.diff(vals)
    assert np.all(diffs <= 1e-12)


def test_full_line_mass_time_independent(p7):
    g = RadialGrid(16.0, 2048)
    st_ = make_state(p7, g, lambda r: np.exp(-r ** 2),
                     lambda r: r * np.exp(-((r - 1) ** 2)))
    prof = build_free_profile(st_, 28.0)
    base = surrogate_mass_at(prof, p7.m, 0.0)
    for t in range(1, 11):
        drift = abs(surrogate_mass_at(prof, p7.m, float(t)) - base) / base
        assert drift <= 1e-6


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_channel_dichotomy_property(seed):
    """Certified-direction surrogate never falls below half its start."""
    params = make_params(7.0, +1)
    g = RadialGrid(20.0, 1024)
    rng = SplitMix64(seed)
    data = random_bump_data(params, g, rng)
    prof = build_free_profile(data, 30.0)
    m = params.m
    R = 0.5
    base = exterior_surrogate(prof, m, R, 0.0)
    if base == 0.0:
        return
    left = profile_mass(prof, m, -prof.L, -R)
    right = profile_mass(prof, m, R, prof.L)
    sign = 1.0 if left >= right else -1.0
    for t in np.linspace(0.0, 10.0, 11) * sign:
        assert exterior_surrogate(prof, m, R, float(t)) >= 0.5 * base - 1e-12


def test_even_profile_certifies_both_directions(p7):
    g = RadialGrid(10.0, 1024)
    st_ = make_state(p7, g, lambda r: np.exp(-((r - 2) ** 2)),
                     lambda r: 0 * r)   # w1 = 0 makes fdot even
    prof = build_free_profile(st_, 25.0)
    m, R = p7.m, 0.5
    base = exterior_surrogate(prof, m, R, 0.0)
    for t in np.linspace(-10.0, 10.0, 21):
        assert exterior_surrogate(prof, m, R, float(t)) >= 0.5 * base - 1e-12


def test_grid_energy_agrees_with_profile_expression(p7):
    g = RadialGrid(16.0, 4096)
    st_ = make_state(p7, g, lambda r: np.exp(-r ** 2),
                     lambda r: np.exp(-((r - 1) ** 2)))
    prof = build_free_profile(st_, 24.0)
    m = p7.m
    for t in (0.0, 2.0, 5.0):
        snap = eval_linear(prof, t)
        e_grid = generalized_energy(snap)
        s = prof.s_nodes
        r = g.nodes
        fp = np.interp(t + r, s, prof.fdot)
        fm = np.interp(t - r, s, prof.fdot)
        e_f = float(trapz(np.abs(fp + fm) ** m + np.abs(fp - fm) ** m,
                          dx=g.h))
        assert e_grid == pytest.approx(e_f, rel=5e-3)
