import numpy as np
import pytest

from qgrade import (
    CapacityError,
    RingConfig,
    depolarize_qubit,
    depolarizing_strength,
    exact_evolve,
    final_density_matrix,
    fine_lindblad_trace,
    ghz_state,
    lindblad_trotter_trace,
    shot_counts_noisy,
    spinon_expectations,
    trotter_trace,
)
from qgrade.density import validate_density_matrix


def test_depolarizing_strength_limits():
    assert depolarizing_strength(0.0, 2.0) == 0.0
    assert depolarizing_strength(0.01, 0.0) == 0.0
    lam = depolarizing_strength(0.01, 2.0)
    assert lam == pytest.approx(1.0 - np.exp(-0.08))
    assert 0.0 <= lam < 1.0


def test_depolarize_identity_at_zero_strength():
    rho = np.outer(ghz_state(4, False), ghz_state(4, False))
    np.testing.assert_allclose(depolarize_qubit(rho, 2, 0.0), rho, atol=1e-15)


def test_full_depolarization_gives_maximally_mixed_qubit():
    rho = np.array([[1.0, 0.0], [0.0, 0.0]])
    np.testing.assert_allclose(depolarize_qubit(rho, 0, 1.0), np.eye(2) / 2, atol=1e-15)


def test_bloch_vector_contraction():
    # One channel application scales the Bloch vector by exactly (1-lam),
    # the integrated form of decay rate 4*gamma.
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    rho = np.outer(plus, plus)
    lam = depolarizing_strength(0.02, 3.0)
    out = depolarize_qubit(rho, 0, lam)
    X = np.array([[0, 1], [1, 0]])
    assert np.real(np.trace(out @ X)) == pytest.approx(
        (1 - lam) * np.real(np.trace(rho @ X))
    )
    assert (1 - lam) == pytest.approx(np.exp(-4 * 0.02 * 3.0))


def test_noiseless_reduction_to_statevector():
    cfg = RingConfig(L=6, gamma=0.0)
    dm = lindblad_trotter_trace(cfg, 21.0, 8, True)
    sv = trotter_trace(cfg, 21.0, 8, True)
    np.testing.assert_allclose(dm.occupations, sv.occupations, atol=1e-10)
    np.testing.assert_allclose(dm.vison, sv.vison, atol=1e-10)


def test_cptp_invariants_hold_along_the_run():
    cfg = RingConfig(L=4, gamma=0.01)
    trace = lindblad_trotter_trace(cfg, 16.0, 6, True, validate=True)
    assert np.all(trace.occupations >= -1e-10)
    rho = final_density_matrix(cfg, 16.0, 6, True)
    validate_density_matrix(rho, full=True)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)


def test_vison_contrast_survives_weak_noise():
    cfg = RingConfig(L=6, gamma=0.002)
    n_v = lindblad_trotter_trace(cfg, 21.0, 8, True).final_occupation(3)
    n_nov = lindblad_trotter_trace(cfg, 21.0, 8, False).final_occupation(3)
    assert n_nov - n_v > 0.2


def test_strong_noise_drives_half_filling():
    # The fully mixed sector average: 3 spinons on six sites.
    cfg = RingConfig(L=6, gamma=0.05)
    trace = lindblad_trotter_trace(cfg, 200.0, 100, False)
    assert trace.total[-1] == pytest.approx(3.0, abs=0.05)


def test_fine_trace_reduces_to_exact_evolution_without_noise():
    cfg = RingConfig(L=4, gamma=0.0)
    trace = fine_lindblad_trace(cfg, 10.0, 0.5, False)
    psi = exact_evolve(cfg, ghz_state(4, False), 10.0)
    np.testing.assert_allclose(
        trace.occupations[-1], spinon_expectations(psi), atol=1e-8
    )


def test_two_body_correlator_decay_law():
    # On the two-site ring <Z0 Z1> decays exactly as exp(-8*gamma*t):
    # the Hamiltonian only mixes it with other weight-2 Paulis.
    cfg = RingConfig(L=2, gamma=0.004)
    trace = fine_lindblad_trace(cfg, 25.0, 0.5, True)
    # n_0 + (twist sign) bookkeeping: <ZZ> = 1 - 2*n_1 on the plain bond.
    zz = 1.0 - 2.0 * trace.occupations[:, 1]
    np.testing.assert_allclose(zz, np.exp(-8 * 0.004 * trace.times), atol=1e-10)


def test_fine_trace_validates_step_size():
    cfg = RingConfig(L=4, gamma=0.001)
    with pytest.raises(Exception):
        fine_lindblad_trace(cfg, 10.0, 2.0, False)  # dt > 0.1/Gamma


def test_capacity_error_suggests_trajectories():
    cfg = RingConfig(L=14, gamma=0.001)
    with pytest.raises(CapacityError) as err:
        lindblad_trotter_trace(cfg, 40.0, 16, False)
    assert "trajectory" in str(err.value)


def test_noisy_counts_sum_and_determinism():
    cfg = RingConfig(L=6, gamma=0.005)
    counts = shot_counts_noisy(cfg, 21.0, 8, False, shots=500, seed=9)
    assert sum(counts.values()) == 500
    assert counts == shot_counts_noisy(cfg, 21.0, 8, False, shots=500, seed=9)


def test_noiseless_counts_match_circuit_statistics():
    cfg = RingConfig(L=6, gamma=0.0)
    counts = shot_counts_noisy(cfg, 21.0, 8, False, shots=2000, seed=3)
    from qgrade import spinon_occupations

    occ3 = sum(
        v * spinon_occupations([int(ch) for ch in k])[3] for k, v in counts.items()
    ) / 2000
    ideal = trotter_trace(cfg, 21.0, 8, False).final_occupation(3)
    assert abs(occ3 - ideal) < 5 * np.sqrt(ideal * (1 - ideal) / 2000)
