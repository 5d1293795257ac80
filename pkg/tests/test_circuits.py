import numpy as np
import pytest

from qgrade import (
    Circuit,
    Gate,
    InputError,
    RingConfig,
    build_full_circuit,
    build_ghz_prep,
    build_trotter_step,
    trotter_angles,
)


def test_gate_validation():
    with pytest.raises(InputError):
        Gate("cz", (0, 1))
    with pytest.raises(InputError):
        Gate("cx", (2, 2))
    with pytest.raises(InputError):
        Gate("rx", (0,))  # missing angle
    with pytest.raises(InputError):
        Gate("h", (0,), theta=0.3)
    with pytest.raises(InputError):
        Circuit(2, (Gate("h", (5,)),))


def test_ghz_prep_gate_counts():
    prep = build_ghz_prep(6, with_vison=False)
    assert prep.count("h") == 1
    assert prep.count("z") == 0
    assert prep.count("cx") == 5
    assert build_ghz_prep(6, with_vison=True).count("z") == 1


def test_vison_z_sits_between_hadamard_and_chain():
    prep = build_ghz_prep(4, with_vison=True)
    kinds = [g.kind for g in prep.gates]
    assert kinds[:3] == ["h", "z", "cx"]
    assert prep.gates[1].qubits == (0,)


def test_trotter_angles():
    cfg = RingConfig(L=6)
    theta_z, theta_x = trotter_angles(cfg, 21.0, 8)
    assert theta_z == pytest.approx(2 * 1.0 * 21 / 8)
    assert theta_x == pytest.approx(2 * 0.1 * 21 / 8)


def test_twisted_bond_angle_is_negated():
    cfg = RingConfig(L=6)
    step = build_trotter_step(cfg, 21.0, 8)
    theta_z, _ = trotter_angles(cfg, 21.0, 8)
    rz = [g for g in step.gates if g.kind == "rz"]
    assert len(rz) == 6  # one per bond
    # Bond 0 is the CNOT-RZ-CNOT block targeting qubit 1 in the even layer.
    assert rz[0].theta == pytest.approx(-theta_z)
    assert all(g.theta == pytest.approx(theta_z) for g in rz[1:])


def test_step_layer_structure():
    # Even bonds, then odd bonds, then one RX per qubit.
    step = build_trotter_step(RingConfig(L=4), 16.0, 6)
    kinds = [g.kind for g in step.gates]
    assert kinds == ["cx", "rz", "cx"] * 4 + ["rx"] * 4
    even_targets = [step.gates[0].qubits, step.gates[3].qubits]
    assert even_targets == [(0, 1), (2, 3)]


def test_full_circuit_cnot_count():
    # (L-1) chain CNOTs + 2 per bond per step = (L-1) + 2*L*N.
    circ = build_full_circuit(RingConfig(L=8), 27.0, 10, with_vison=True)
    assert circ.count("cx") == 7 + 2 * 8 * 10
    assert circ.count("rx") == 8 * 10
    assert circ.metadata["n_steps"] == 10
    assert circ.metadata["with_vison"] is True


def test_rejects_tiny_or_odd_rings():
    with pytest.raises(InputError):
        build_ghz_prep(2, with_vison=False)
    with pytest.raises(InputError):
        build_trotter_step(RingConfig(L=6), 21.0, 0)


def test_circuit_concatenation_checks_width():
    a = build_ghz_prep(4, False)
    b = build_ghz_prep(6, False)
    with pytest.raises(InputError):
        a + b
    assert (a + a).count("cx") == 6
