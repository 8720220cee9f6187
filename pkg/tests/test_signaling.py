import numpy as np
import pytest

from eprsignal import (
    PureState,
    Scenario,
    build_entangled,
    channel_capacity,
    exact_gap,
    monte_carlo_report,
    quadratic,
    random_scenario,
    sample_sequence,
)
from eprsignal.signaling import binary_entropy, per_sample_values
from eprsignal.states import ray_equal

from helpers import (
    E0,
    E1,
    MINUS,
    PLUS,
    bell_power_scenario,
    bell_quadratic_scenario,
    bell_state,
    random_hermitian,
)


def test_scenario_rejects_wrong_span():
    # A-side span is {e0, e1} inside a 3-dim A space; the second basis
    # reaches into e2 and must be refused
    f0 = np.array([1, 0, 0], dtype=complex)
    f1 = np.array([0, 1, 0], dtype=complex)
    f2 = np.array([0, 0, 1], dtype=complex)
    s = 1 / np.sqrt(2)
    state = build_entangled([s, s], [f0, f1], [E0, E1])
    with pytest.raises(ValueError):
        Scenario(
            state=state,
            basis_a=(PureState(f0), PureState(f1)),
            basis_a_prime=(PureState(f0), PureState(f2)),
            observable=quadratic(np.eye(2, dtype=complex)),
        )


def test_scenario_rejects_dim_mismatch():
    with pytest.raises(ValueError):
        Scenario(
            state=bell_state(),
            basis_a=(PureState(E0), PureState(E1)),
            basis_a_prime=(PureState(PLUS), PureState(MINUS)),
            observable=quadratic(np.eye(3, dtype=complex)),
        )


def test_exact_gap_bell_power_hand_values():
    report = exact_gap(bell_power_scenario())
    assert report.exact_fb == pytest.approx(0.5, abs=1e-12)
    assert report.exact_fbprime == pytest.approx(0.25, abs=1e-12)
    assert report.gap == pytest.approx(0.25, abs=1e-12)


def test_exact_gap_same_basis_is_exactly_zero():
    sc = bell_power_scenario()
    same = Scenario(sc.state, sc.basis_a, sc.basis_a, sc.observable)
    assert exact_gap(same).gap == 0.0


def test_exact_gap_quadratic_random_scenarios():
    rng = np.random.default_rng(30)
    for _ in range(100):
        da = int(rng.integers(2, 6))
        db = int(rng.integers(2, 6))
        n = int(rng.integers(1, da + 1))
        sc = random_scenario(quadratic(random_hermitian(db, rng)), da, n, rng)
        assert abs(exact_gap(sc).gap) < 1e-10


def test_sample_sequence_frequencies():
    sc = bell_power_scenario()
    states = sample_sequence(sc, 0, 100000, np.random.default_rng(31))
    freq = np.mean([ray_equal(s, PureState(E0)) for s in states])
    assert freq == pytest.approx(0.5, abs=0.01)


def test_sample_sequence_small_and_deterministic():
    sc = bell_power_scenario()
    one = sample_sequence(sc, 1, 1, np.random.default_rng(32))
    assert len(one) == 1
    a = sample_sequence(sc, 0, 50, np.random.default_rng(33))
    b = sample_sequence(sc, 0, 50, np.random.default_rng(33))
    assert all(np.array_equal(x.vec, y.vec) for x, y in zip(a, b))


def test_monte_carlo_detects_bell_power_signal():
    report = monte_carlo_report(bell_power_scenario(), 100000, seed=7)
    assert report.z > 5.0
    assert report.mc_fb - report.mc_fbprime == pytest.approx(0.25, abs=0.01)
    assert report.gap == pytest.approx(0.25, abs=1e-12)


def test_monte_carlo_quadratic_stays_quiet():
    for seed in (0, 1, 2, 3):
        report = monte_carlo_report(bell_quadratic_scenario(), 100000, seed=seed)
        assert report.z < 4.0


def test_monte_carlo_minimum_samples():
    report = monte_carlo_report(bell_power_scenario(), 2, seed=0)
    assert report.n_samples == 2
    assert report.stderr_b >= 0.0


def test_monte_carlo_consistency_with_exact():
    # mc means concentrate on the exact means: 6-sigma band over seeded runs
    sc = bell_power_scenario()
    misses = 0
    for seed in range(100):
        r = monte_carlo_report(sc, 10000, seed=seed)
        pooled = np.hypot(r.stderr_b, r.stderr_bprime)
        gap_mc = r.mc_fb - r.mc_fbprime
        if abs(gap_mc - r.gap) > 6.0 * pooled:
            misses += 1
    assert misses <= 1


def test_monte_carlo_workers_bit_identical():
    sc = bell_power_scenario()
    a = monte_carlo_report(sc, 30000, seed=5, workers=1)
    b = monte_carlo_report(sc, 30000, seed=5, workers=4)
    assert a == b


def test_per_sample_values_match_report_mean():
    sc = bell_power_scenario()
    report = monte_carlo_report(sc, 20000, seed=9)
    vals = per_sample_values(sc, 0, 20000, seed=9)
    assert vals.shape == (20000,)
    assert vals.mean() == pytest.approx(report.mc_fb, abs=1e-12)


def test_convergence_series_shape():
    report = monte_carlo_report(bell_power_scenario(), 20000, seed=4,
                                track_convergence=True)
    ns = [row[0] for row in report.convergence]
    assert ns[-1] == 20000
    assert ns == sorted(ns)


def test_channel_bell_power_decodes_cleanly():
    ch = channel_capacity(bell_power_scenario(), 1000, 200, seed=11)
    assert ch.bit_error_rate < 0.01
    assert ch.estimated_capacity_bits_per_block > 0.9
    assert ch.decision_threshold == pytest.approx(0.375, abs=1e-12)


def test_channel_quadratic_is_chance_level():
    ch = channel_capacity(bell_quadratic_scenario(), 1000, 1000, seed=12)
    assert 0.4 < ch.bit_error_rate < 0.6
    assert ch.estimated_capacity_bits_per_block < 0.02


def test_channel_exact_zero_gap_pins_capacity():
    sc = bell_power_scenario()
    same = Scenario(sc.state, sc.basis_a, sc.basis_a, sc.observable)
    ch = channel_capacity(same, 100, 300, seed=13)
    assert ch.estimated_capacity_bits_per_block == 0.0
    assert 0.35 < ch.bit_error_rate < 0.65


def test_channel_single_sample_constant_observable():
    sc = bell_power_scenario()
    const = Scenario(
        sc.state, sc.basis_a, sc.basis_a_prime,
        quadratic(np.eye(2, dtype=complex)),
    )
    ch = channel_capacity(const, 1, 1000, seed=14)
    assert 0.45 < ch.bit_error_rate < 0.55


def test_channel_error_rate_monotone_in_block_length():
    # statistically non-increasing, 2-sigma slack on each difference
    sc = bell_power_scenario()
    bers = [
        channel_capacity(sc, n, 1000, seed=15).bit_error_rate
        for n in (10, 100, 1000)
    ]
    slack = 2.0 * np.sqrt(2.0 * 0.25 / 1000)
    assert bers[1] <= bers[0] + slack
    assert bers[2] <= bers[1] + slack


def test_channel_workers_bit_identical():
    sc = bell_power_scenario()
    a = channel_capacity(sc, 200, 300, seed=16, workers=1)
    b = channel_capacity(sc, 200, 300, seed=16, workers=4)
    assert a == b


def test_binary_entropy_edges():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        binary_entropy(1.5)
