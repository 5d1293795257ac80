"""Open-system simulation: density matrix + per-step depolarizing channels.

The isotropic Lindblad bath integrates exactly between unitary segments:
over a time dt it is one depolarizing channel per qubit with

    lambda(dt) = 1 - exp(-4*gamma*dt),

since every nontrivial single-qubit Pauli expectation decays at rate
4*gamma.  The only splitting error left is Hamiltonian-vs-noise, first
order in dt.

rho is stored as a (2^L, 2^L) complex array; its flattened index places
column-qubit q at bit q and row-qubit q at bit q+L, so the statevector
single-qubit kernel is reused on the 2L-bit flat view.
"""

from __future__ import annotations

import numpy as np

from .config import RingConfig
from .errors import CapacityError, InputError, PositivityError
from .model import build_hamiltonian, spinon_expectations, vison_expectation
from .statevector import (
    OccupationTrace,
    apply_1q,
    ghz_state,
    sample_shots,
    zz_step_phases,
    _rx,
)
from .circuits import trotter_angles

DENSITY_MAX_L = 12

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
EIG_FLOOR = -1e-8

# Full Hermiticity/positivity validation is O(2^3L); keep it to small rings.
FULL_VALIDATE_MAX_L = 8


def depolarizing_strength(gamma: float, dt: float) -> float:
    """lambda(dt) = 1 - exp(-4*gamma*dt)."""
    return -np.expm1(-4.0 * gamma * dt)


def _check_square(rho: np.ndarray) -> int:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InputError(f"not a density matrix: shape {rho.shape}")
    L = int(rho.shape[0]).bit_length() - 1
    if 1 << L != rho.shape[0]:
        raise InputError(f"density matrix dimension {rho.shape[0]} is not 2^L")
    return L


def _depolarize_inplace(rho: np.ndarray, qubit: int, lam: float, L: int):
    # Row-qubit axis and column-qubit axis of the same qubit, exposed together.
    x = rho.reshape(1 << (L - 1 - qubit), 2, 1 << (L - 1), 2, 1 << qubit)
    tr = x[:, 0, :, 0, :] + x[:, 1, :, 1, :]
    x *= 1.0 - lam
    x[:, 0, :, 0, :] += 0.5 * lam * tr
    x[:, 1, :, 1, :] += 0.5 * lam * tr


def depolarize_qubit(rho: np.ndarray, qubit: int, lam: float) -> np.ndarray:
    """rho -> (1-lam) rho + lam * (I/2 tensor Tr_qubit rho)."""
    L = _check_square(rho)
    if not 0 <= qubit < L:
        raise InputError(f"qubit {qubit} out of range for L={L}")
    if not 0.0 <= lam <= 1.0:
        raise InputError(f"lambda must lie in [0,1], got {lam}")
    out = np.array(rho, dtype=complex, copy=True)
    _depolarize_inplace(out, qubit, lam, L)
    return out


def _unitary_1q_conjugate(rho: np.ndarray, u: np.ndarray, qubit: int, L: int) -> np.ndarray:
    flat = rho.reshape(-1)
    flat = apply_1q(flat, u, qubit + L, 2 * L)  # rows
    flat = apply_1q(flat, u.conj(), qubit, 2 * L)  # columns
    return flat.reshape(rho.shape)


def _step_unitary_conjugate(
    rho: np.ndarray, phases: np.ndarray, rx: np.ndarray, L: int
) -> np.ndarray:
    """rho -> U rho U+ for one fused Trotter step."""
    rho = (phases[:, None] * rho) * phases.conj()[None, :]
    for q in range(L):
        rho = _unitary_1q_conjugate(rho, rx, q, L)
    return rho


def validate_density_matrix(rho: np.ndarray, where: str = "", full: bool | None = None):
    """Trace check always; Hermiticity/positivity on small systems.

    Positivity is monitored, not projected: a violation raises rather
    than being clipped, so integrator bugs surface.
    """
    L = _check_square(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise PositivityError(f"trace drifted to {tr} {where}")
    if full is None:
        full = L <= FULL_VALIDATE_MAX_L
    if full:
        herm = np.max(np.abs(rho - rho.conj().T))
        if herm > HERM_TOL:
            raise PositivityError(f"Hermiticity violated by {herm} {where}")
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < EIG_FLOOR:
            raise PositivityError(f"minimum eigenvalue {lo} below floor {where}")


def _check_capacity(L: int):
    if L > DENSITY_MAX_L:
        raise CapacityError(
            f"L={L} exceeds the density-matrix capacity L<={DENSITY_MAX_L}; "
            "use the trajectory backend",
            limit=DENSITY_MAX_L,
        )


def _trace_from_rows(times, occs, visons, labels) -> OccupationTrace:
    occs = np.array(occs)
    return OccupationTrace(
        times=np.asarray(times, dtype=float),
        occupations=occs,
        total=occs.sum(axis=1),
        vison=np.array(visons),
        labels=labels,
    )


def _lindblad_run(
    config: RingConfig,
    t_max: float,
    N: int,
    with_vison: bool,
    validate: bool = False,
) -> tuple[OccupationTrace, np.ndarray]:
    L = config.L
    _check_capacity(L)
    psi = ghz_state(L, with_vison)
    rho = np.outer(psi, psi.conj())
    lam = depolarizing_strength(config.gamma, t_max / N)
    phases = zz_step_phases(config, t_max, N)
    rx = _rx(trotter_angles(config, t_max, N)[1])
    occs = [spinon_expectations(rho)]
    visons = [vison_expectation(rho)]
    for k in range(1, N + 1):
        rho = _step_unitary_conjugate(rho, phases, rx, L)
        for q in range(L):
            _depolarize_inplace(rho, q, lam, L)
        if validate:
            validate_density_matrix(rho, where=f"at step {k}")
        occs.append(spinon_expectations(rho))
        visons.append(vison_expectation(rho))
    labels = {
        "with_vison": with_vison,
        "backend": "density-matrix",
        "L": L,
        "gamma": config.gamma,
        "N": N,
        "t_max": t_max,
    }
    trace = _trace_from_rows(np.arange(N + 1) * (t_max / N), occs, visons, labels)
    return trace, rho


def lindblad_trotter_trace(
    config: RingConfig, t_max: float, N: int, with_vison: bool, validate: bool = False
) -> OccupationTrace:
    """Trotter steps interleaved with per-qubit depolarizing channels."""
    return _lindblad_run(config, t_max, N, with_vison, validate=validate)[0]


def fine_lindblad_trace(
    config: RingConfig, t_total: float, dt: float, with_vison: bool, validate: bool = False
) -> OccupationTrace:
    """Continuous-time reference: exact_evolve over dt, then lambda(dt) channels.

    First order in dt through the Hamiltonian-vs-noise splitting; the
    per-segment unitary and bath factors are each exact.
    """
    L = config.L
    _check_capacity(L)
    if dt <= 0 or dt > 0.1 / config.Gamma:
        raise InputError(f"dt must lie in (0, 0.1/Gamma], got {dt}")
    ham = build_hamiltonian(config)
    energies, vectors = ham.eig()
    u_dt = (vectors * np.exp(-1j * energies * dt)) @ vectors.T
    lam = depolarizing_strength(config.gamma, dt)
    psi = ghz_state(L, with_vison)
    rho = np.outer(psi, psi.conj())
    n_steps = int(round(t_total / dt))
    occs = [spinon_expectations(rho)]
    visons = [vison_expectation(rho)]
    for k in range(1, n_steps + 1):
        rho = u_dt @ rho @ u_dt.conj().T
        for q in range(L):
            _depolarize_inplace(rho, q, lam, L)
        if validate:
            validate_density_matrix(rho, where=f"at step {k}")
        occs.append(spinon_expectations(rho))
        visons.append(vison_expectation(rho))
    labels = {
        "with_vison": with_vison,
        "backend": "fine-lindblad",
        "L": L,
        "gamma": config.gamma,
        "dt": dt,
        "t_total": t_total,
    }
    return _trace_from_rows(np.arange(n_steps + 1) * dt, occs, visons, labels)


def final_density_matrix(
    config: RingConfig, t_max: float, N: int, with_vison: bool
) -> np.ndarray:
    """Density matrix after the full noisy benchmark circuit."""
    return _lindblad_run(config, t_max, N, with_vison)[1]


def shot_counts_noisy(
    config: RingConfig, t_max: float, N: int, with_vison: bool, shots: int, seed: int
) -> dict[str, int]:
    """Z-basis counts of the final noisy state.

    Density-matrix diagonal for L <= 12; one bitstring per stochastic
    trajectory above that.
    """
    if config.L <= DENSITY_MAX_L:
        rho = final_density_matrix(config, t_max, N, with_vison)
        return sample_shots(rho, shots, seed)
    from .trajectories import trajectory_shot_counts

    return trajectory_shot_counts(config, t_max, N, with_vison, shots, seed)
