import numpy as np
import pytest

from qgrade import (
    RingConfig,
    build_full_circuit,
    build_ghz_prep,
    exact_evolve,
    ghz_state,
    run_circuit,
    sample_shots,
    spinon_expectations,
    trotter_trace,
    vison_expectation,
)
from qgrade.statevector import bitstring_to_index


def test_ghz_state_amplitudes():
    psi = ghz_state(4, with_vison=False)
    assert psi[0] == pytest.approx(1 / np.sqrt(2))
    assert psi[-1] == pytest.approx(1 / np.sqrt(2))
    assert np.count_nonzero(psi) == 2
    minus = ghz_state(4, with_vison=True)
    assert minus[-1] == pytest.approx(-1 / np.sqrt(2))


def test_prep_circuit_reproduces_ghz_state():
    for L in (4, 6):
        for vison in (True, False):
            psi = run_circuit(build_ghz_prep(L, vison))
            np.testing.assert_allclose(psi, ghz_state(L, vison), atol=1e-12)


def test_trotter_conserves_norm_and_flux():
    cfg = RingConfig(L=6)
    for vison, b in ((True, -1.0), (False, 1.0)):
        trace = trotter_trace(cfg, 21.0, 8, vison)
        np.testing.assert_allclose(trace.vison, b, atol=1e-12)
        np.testing.assert_allclose(trace.occupations.sum(axis=1), trace.total)
        assert trace.occupations.shape == (9, 6)
        assert np.all(trace.occupations >= -1e-12)
        assert np.all(trace.occupations <= 1 + 1e-12)


def test_trotter_converges_to_exact_evolution():
    # Fixed t, increasing step count: the site-resolved occupations
    # approach the eigensolver propagation.
    cfg = RingConfig(L=4)
    psi_exact = exact_evolve(cfg, ghz_state(4, False), 8.0)
    target = spinon_expectations(psi_exact)
    errs = []
    for N in (16, 64, 256):
        got = trotter_trace(cfg, 8.0, N, False).occupations[-1]
        errs.append(np.max(np.abs(got - target)))
    assert errs[2] < errs[0]
    assert errs[2] < 1e-4


def test_blockade_contrast_at_arrival_time():
    # Opposite-site occupation: near-zero with the vison (destructive
    # interference), dominant without it.  Frozen endpoint values were
    # cross-checked against an independent dense gate-by-gate build.
    cfg = RingConfig(L=6)
    n_v = trotter_trace(cfg, 21.0, 8, True).final_occupation(3)
    n_nov = trotter_trace(cfg, 21.0, 8, False).final_occupation(3)
    assert n_v == pytest.approx(0.0139338814588386, abs=1e-9)
    assert n_nov == pytest.approx(0.7962184432255511, abs=1e-9)


def test_exact_evolution_frozen_value():
    cfg = RingConfig(L=6)
    psi = exact_evolve(cfg, ghz_state(6, False), 21.0)
    assert spinon_expectations(psi)[3] == pytest.approx(0.7514981047712591, abs=1e-9)


def test_sampling_is_deterministic_and_normalized():
    psi = run_circuit(build_full_circuit(RingConfig(L=6), 21.0, 8, False))
    counts = sample_shots(psi, 1000, seed=42)
    assert sum(counts.values()) == 1000
    assert counts == sample_shots(psi, 1000, seed=42)
    assert all(len(k) == 6 and set(k) <= {"0", "1"} for k in counts)


def test_sampling_matches_born_statistics():
    psi = ghz_state(6, with_vison=False)
    counts = sample_shots(psi, 4000, seed=1)
    # Only the two ferromagnetic strings can appear.
    assert set(counts) <= {"000000", "111111"}
    p = counts.get("000000", 0) / 4000
    assert abs(p - 0.5) < 5 * np.sqrt(0.25 / 4000)


def test_bitstring_key_order_is_qubit0_first():
    # Key character i addresses qubit i.
    assert bitstring_to_index("100000") == 1
    assert bitstring_to_index("010000") == 2
    psi = np.zeros(16)
    psi[1] = 1.0  # qubit 0 set
    counts = sample_shots(psi, 10, seed=0)
    assert counts == {"1000": 10}
