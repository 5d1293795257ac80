"""Stochastic Pauli-trajectory unraveling of the depolarizing channel.

After each Trotter step every qubit independently suffers, with
probability 3*lambda/4, a uniformly chosen Pauli (X, Y or Z); averaging
trajectories reproduces (1-lambda) rho + lambda I/2 exactly:

    (1-lambda) rho + lambda I/2
        = (1 - 3 lambda/4) rho + (lambda/4)(X rho X + Y rho Y + Z rho Z).

Trajectory k uses generator seed [base_seed, k], so runs parallelize
reproducibly.  The jump-location uniforms are drawn for every
(step, qubit) regardless of outcome, which couples trajectories across
noise rates (larger gamma only adds jumps) -- useful for monotonicity
checks at large L.
"""

from __future__ import annotations

import numpy as np

from .circuits import build_ghz_prep, trotter_angles
from .config import RingConfig
from .errors import InputError
from .model import occupation_table, vison_expectation
from .statevector import (
    OccupationTrace,
    run_circuit,
    trotter_step_kernel,
    zz_step_phases,
    _rx,
)


def _apply_pauli_inplace(psi: np.ndarray, kind: int, qubit: int, L: int):
    """kind 0=X, 1=Y, 2=Z; Y applied as X*Z (global phase dropped)."""
    x = psi.reshape(1 << (L - 1 - qubit), 2, -1)
    if kind == 2:
        x[:, 1, :] *= -1.0
    else:
        if kind == 1:
            x[:, 1, :] *= -1.0
        tmp = x[:, 0, :].copy()
        x[:, 0, :] = x[:, 1, :]
        x[:, 1, :] = tmp


def _run_trajectory(
    psi0: np.ndarray,
    phases: np.ndarray,
    rx: np.ndarray,
    L: int,
    N: int,
    lam: float,
    rng: np.random.Generator,
    occ_table: np.ndarray,
):
    """One trajectory; yields (occupations, vison) after each step."""
    psi = psi0.copy()
    for _ in range(N):
        psi = trotter_step_kernel(psi, phases, rx, L)
        jumps = rng.random(L) < 0.75 * lam
        kinds = rng.integers(0, 3, size=L)
        for q in np.nonzero(jumps)[0]:
            _apply_pauli_inplace(psi, int(kinds[q]), int(q), L)
        p = np.abs(psi) ** 2
        yield p @ occ_table, vison_expectation(psi), psi


def trajectory_trace(
    config: RingConfig,
    t_max: float,
    N: int,
    with_vison: bool,
    n_traj: int,
    seed: int,
) -> OccupationTrace:
    """Mean occupations over trajectories, with per-time standard errors."""
    if n_traj < 1:
        raise InputError(f"n_traj must be >= 1, got {n_traj}")
    L = config.L
    from .density import depolarizing_strength

    lam = depolarizing_strength(config.gamma, t_max / N)
    psi0 = run_circuit(build_ghz_prep(L, with_vison))
    phases = zz_step_phases(config, t_max, N)
    rx = _rx(trotter_angles(config, t_max, N)[1])
    occ_table = occupation_table(L).astype(float)

    occ_sum = np.zeros((N, L))
    occ_sq = np.zeros((N, L))
    vis_sum = np.zeros(N)
    for k in range(n_traj):
        rng = np.random.default_rng([seed, k])
        for step, (occ, vis, _) in enumerate(
            _run_trajectory(psi0, phases, rx, L, N, lam, rng, occ_table)
        ):
            occ_sum[step] += occ
            occ_sq[step] += occ**2
            vis_sum[step] += vis

    mean = occ_sum / n_traj
    var = np.maximum(occ_sq / n_traj - mean**2, 0.0)
    stderr = np.sqrt(var / max(n_traj - 1, 1))

    occ0 = np.abs(psi0) ** 2 @ occ_table
    occs = np.vstack([occ0, mean])
    visons = np.concatenate([[vison_expectation(psi0)], vis_sum / n_traj])
    return OccupationTrace(
        times=np.arange(N + 1) * (t_max / N),
        occupations=occs,
        total=occs.sum(axis=1),
        vison=visons,
        labels={
            "with_vison": with_vison,
            "backend": "trajectory",
            "L": L,
            "gamma": config.gamma,
            "N": N,
            "t_max": t_max,
            "n_traj": n_traj,
            "seed": seed,
        },
        stderr=np.vstack([np.zeros(L), stderr]),
    )


def trajectory_shot_counts(
    config: RingConfig, t_max: float, N: int, with_vison: bool, shots: int, seed: int
) -> dict[str, int]:
    """One Z-basis bitstring per trajectory (shots = number of trajectories)."""
    L = config.L
    from .density import depolarizing_strength

    lam = depolarizing_strength(config.gamma, t_max / N)
    psi0 = run_circuit(build_ghz_prep(L, with_vison))
    phases = zz_step_phases(config, t_max, N)
    rx = _rx(trotter_angles(config, t_max, N)[1])
    occ_table = occupation_table(L).astype(float)
    counts: dict[str, int] = {}
    for k in range(shots):
        rng = np.random.default_rng([seed, k])
        for _, _, psi in _run_trajectory(psi0, phases, rx, L, N, lam, rng, occ_table):
            pass
        p = np.abs(psi) ** 2
        b = int(rng.choice(p.shape[0], p=p / p.sum()))
        key = format(b, f"0{L}b")[::-1]
        counts[key] = counts.get(key, 0) + 1
    return counts
