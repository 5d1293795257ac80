import numpy as np
import pytest

from qgrade import (
    InputError,
    RingConfig,
    lindblad_trotter_trace,
    trajectory_shot_counts,
    trajectory_trace,
    trotter_trace,
)


def test_noiseless_trajectories_collapse_to_one_path():
    cfg = RingConfig(L=6, gamma=0.0)
    traj = trajectory_trace(cfg, 21.0, 8, False, n_traj=5, seed=0)
    exact = trotter_trace(cfg, 21.0, 8, False)
    np.testing.assert_allclose(traj.occupations, exact.occupations, atol=1e-12)
    # Variance is a difference of near-equal sums; only fp dust remains.
    np.testing.assert_allclose(traj.stderr, 0.0, atol=1e-7)


def test_fixed_seed_is_bit_identical():
    cfg = RingConfig(L=4, gamma=0.01)
    a = trajectory_trace(cfg, 16.0, 6, True, n_traj=20, seed=7)
    b = trajectory_trace(cfg, 16.0, 6, True, n_traj=20, seed=7)
    assert np.array_equal(a.occupations, b.occupations)
    assert np.array_equal(a.stderr, b.stderr)
    c = trajectory_trace(cfg, 16.0, 6, True, n_traj=20, seed=8)
    assert not np.array_equal(a.occupations, c.occupations)


def test_needs_at_least_one_trajectory():
    with pytest.raises(InputError):
        trajectory_trace(RingConfig(L=4), 16.0, 6, True, n_traj=0, seed=0)


def test_estimator_is_unbiased_against_density_matrix():
    # Stochastic Pauli insertion averages to the depolarizing channel;
    # with 10^4 trajectories every occupation entry should sit within a
    # few standard errors of the deterministic solver.
    cfg = RingConfig(L=4, gamma=0.01)
    traj = trajectory_trace(cfg, 16.0, 6, False, n_traj=10_000, seed=5)
    dm = lindblad_trotter_trace(cfg, 16.0, 6, False)
    stderr = np.maximum(traj.stderr, 1e-12)
    pulls = np.abs(traj.occupations[1:] - dm.occupations[1:]) / stderr[1:]
    assert np.max(pulls) < 4.0


def test_shot_counts_shape_and_determinism():
    cfg = RingConfig(L=6, gamma=0.005)
    counts = trajectory_shot_counts(cfg, 21.0, 8, False, shots=300, seed=2)
    assert sum(counts.values()) == 300
    assert all(len(k) == 6 for k in counts)
    assert counts == trajectory_shot_counts(cfg, 21.0, 8, False, shots=300, seed=2)
