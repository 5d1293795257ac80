"""Noiseless pure-state simulation.

Amplitude layout: index bit i (least significant = qubit 0) is qubit i's
Z value, so a vector reshaped to (2,)*L puts qubit q on axis L-1-q.

Two execution paths exist for the benchmark circuit: the generic
gate-by-gate interpreter (`run_circuit`) and a fused per-step kernel
(`trotter_step_kernel`) that applies each ZZ layer as one diagonal
phase -- they agree to machine precision because CNOT-RZ-CNOT is
exactly exp(-i theta ZZ/2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuits import Circuit, Gate, build_ghz_prep, build_trotter_step, trotter_angles
from .config import RingConfig, TWIST_BOND
from .errors import CapacityError, InputError
from .model import (
    build_hamiltonian,
    occupation_table,
    spinon_expectations,
    vison_expectation,
)

STATEVECTOR_MAX_L = 24

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]])


def gate_matrix(gate: Gate) -> np.ndarray:
    """2x2 (or 4x4 for cx) unitary of a gate, qubit 0 = least significant."""
    if gate.kind == "h":
        return _H
    if gate.kind == "x":
        return _X
    if gate.kind == "z":
        return _Z
    if gate.kind == "rx":
        return _rx(gate.theta)
    if gate.kind == "rz":
        return _rz(gate.theta)
    # cx on (control, target) in the |target, control> ordering used by kron
    m = np.eye(4, dtype=complex)
    m[[1, 3]] = m[[3, 1]]
    return m


def zero_state(L: int) -> np.ndarray:
    psi = np.zeros(1 << L, dtype=complex)
    psi[0] = 1.0
    return psi


def ghz_state(L: int, with_vison: bool) -> np.ndarray:
    """(|0..0> -+ |1..1>)/sqrt(2) directly (works for any even L >= 2)."""
    psi = np.zeros(1 << L, dtype=complex)
    psi[0] = 1.0 / np.sqrt(2)
    psi[-1] = (-1.0 if with_vison else 1.0) / np.sqrt(2)
    return psi


def apply_1q(psi: np.ndarray, u: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Apply a 2x2 unitary to one qubit of an n-qubit vector (new array)."""
    x = psi.reshape(1 << (n - 1 - qubit), 2, -1)
    a, b = x[:, 0, :], x[:, 1, :]
    out = np.empty_like(x)
    out[:, 0, :] = u[0, 0] * a + u[0, 1] * b
    out[:, 1, :] = u[1, 0] * a + u[1, 1] * b
    return out.reshape(psi.shape)


def apply_cx(psi: np.ndarray, control: int, target: int, n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    perm = idx ^ (((idx >> control) & 1) << target)
    return psi[perm]


def apply_gate(psi: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply one gate; returns a new normalized-by-construction vector."""
    n = int(psi.shape[0]).bit_length() - 1
    if 1 << n != psi.shape[0]:
        raise InputError(f"state dimension {psi.shape[0]} is not a power of two")
    if any(q >= n for q in gate.qubits):
        raise InputError(f"gate {gate.kind} on {gate.qubits} out of range for n={n}")
    if gate.kind == "cx":
        return apply_cx(psi, gate.qubits[0], gate.qubits[1], n)
    return apply_1q(psi, gate_matrix(gate), gate.qubits[0], n)


def run_circuit(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Execute the gate list in order from |0..0> or a caller state."""
    psi = zero_state(circuit.n_qubits) if initial is None else np.asarray(initial, dtype=complex)
    if psi.shape != (1 << circuit.n_qubits,):
        raise InputError(
            f"initial state dimension {psi.shape} != (2^{circuit.n_qubits},)"
        )
    psi = psi.copy()
    for gate in circuit.gates:
        psi = apply_gate(psi, gate)
    return psi


def exact_evolve(config: RingConfig, state: np.ndarray, t: float) -> np.ndarray:
    """exp(-iHt)|psi> via eigendecomposition (dense sizes) or Krylov."""
    if t < 0:
        raise InputError(f"t must be >= 0, got {t}")
    return build_hamiltonian(config).evolve(np.asarray(state, dtype=complex), t)


# ---------------------------------------------------------------------------
# Fused Trotter stepping
# ---------------------------------------------------------------------------


def zz_step_phases(config: RingConfig, t_max: float, N: int) -> np.ndarray:
    """Diagonal of both ZZ layers of one step: exp(-i/2 sum_s theta_s z_s z_{s+1})."""
    L = config.L
    theta_z, _ = trotter_angles(config, t_max, N)
    thetas = np.full(L, theta_z)
    thetas[TWIST_BOND] = -theta_z
    zz = 1.0 - 2.0 * occupation_table(L).astype(float)  # = z_s z_{s+1} up to twist
    zz[:, TWIST_BOND] *= -1.0
    return np.exp(-0.5j * (zz @ thetas))


def trotter_step_kernel(psi: np.ndarray, phases: np.ndarray, rx: np.ndarray, L: int) -> np.ndarray:
    """One fused step: ZZ diagonal, then RX on every qubit."""
    psi = psi * phases
    for q in range(L):
        psi = apply_1q(psi, rx, q, L)
    return psi


@dataclass
class OccupationTrace:
    """Per-step record of occupations, total spinon number and <B>.

    times is the step grid k*t_max/N (units 1/J); occupations has shape
    (len(times), L); stderr is populated by the trajectory backend only.
    """

    times: np.ndarray
    occupations: np.ndarray
    total: np.ndarray
    vison: np.ndarray
    labels: dict = field(default_factory=dict)
    stderr: np.ndarray | None = None

    def site(self, s: int) -> np.ndarray:
        return self.occupations[:, s]

    def final_occupation(self, s: int) -> float:
        return float(self.occupations[-1, s])


def _record(psi_or_rho) -> tuple[np.ndarray, float]:
    occ = spinon_expectations(psi_or_rho)
    return occ, vison_expectation(psi_or_rho)


def trotter_trace(
    config: RingConfig, t_max: float, N: int, with_vison: bool
) -> OccupationTrace:
    """Noiseless benchmark run, recorded after every Trotter step."""
    L = config.L
    if L > STATEVECTOR_MAX_L:
        raise CapacityError(
            f"L={L} exceeds the statevector capacity L<={STATEVECTOR_MAX_L}",
            limit=STATEVECTOR_MAX_L,
        )
    psi = run_circuit(build_ghz_prep(L, with_vison))
    phases = zz_step_phases(config, t_max, N)
    _, theta_x = trotter_angles(config, t_max, N)
    rx = _rx(theta_x)
    occs, visons = [], []
    occ, vis = _record(psi)
    occs.append(occ)
    visons.append(vis)
    for _ in range(N):
        psi = trotter_step_kernel(psi, phases, rx, L)
        occ, vis = _record(psi)
        occs.append(occ)
        visons.append(vis)
    occs = np.array(occs)
    return OccupationTrace(
        times=np.arange(N + 1) * (t_max / N),
        occupations=occs,
        total=occs.sum(axis=1),
        vison=np.array(visons),
        labels={
            "with_vison": with_vison,
            "backend": "statevector",
            "L": L,
            "gamma": 0.0,
            "N": N,
            "t_max": t_max,
        },
    )


def sample_shots(state: np.ndarray, n_shots: int, seed: int) -> dict[str, int]:
    """Born-rule Z-basis counts with a seeded generator.

    Keys are q0-first bitstrings: character j is qubit j's value.
    """
    if n_shots < 1:
        raise InputError(f"n_shots must be >= 1, got {n_shots}")
    state = np.asarray(state)
    if state.ndim == 1:
        p = np.abs(state) ** 2
    else:
        p = np.real(np.diagonal(state)).copy()
    L = int(p.shape[0]).bit_length() - 1
    p = np.clip(p, 0.0, None)
    p /= p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(n_shots, p)
    hits = np.nonzero(draws)[0]
    return {format(b, f"0{L}b")[::-1]: int(draws[b]) for b in hits}


def bitstring_to_index(key: str) -> int:
    """q0-first bitstring -> basis index."""
    return int(key[::-1], 2)
