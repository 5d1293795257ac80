"""Closed-form references used as test oracles and for t_max prediction.

Two-qubit ring: under the isotropic bath the four populations in the
(spinon site, vison) eigenbasis evolve in closed form; the left/right
spinon occupations reduce to

    vison (blockaded):   n_L = 1/2 + e^{-8 gamma t}/2,
                         n_R = 1/2 - e^{-8 gamma t}/2
    no vison:            n_L = 1/2 + e^{-8 gamma t} cos(4 Gamma t)/2,
                         n_R = 1/2 - e^{-8 gamma t} cos(4 Gamma t)/2.

Tight-binding ring with flux phi: a particle launched at x=0 has
amplitude Psi_phi(x,t) = (1/L) sum_j exp(-i t 2 Gamma cos k_j + i k_j x)
with k_j = (2 pi / L)(j + phi/(2 pi)), j = -L/2 .. L/2-1.  At phi = pi
the k grid is symmetric, Psi is even in x, and antiperiodicity forces
Psi(L/2, t) = 0 identically: the blockade.  The first arrival peak of
the phi = 0 case sits near t = L / (4 Gamma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class TwoQubitSolution:
    """Analytic populations of the two-qubit ring, fixed initial spinon at s=0."""

    Gamma: float
    gamma: float
    with_vison: bool

    def populations(self, t) -> tuple:
        """(rho_00, rho_11, rho_0'0', rho_1'1') at time(s) t.

        Unprimed labels carry no vison, primed labels carry the vison;
        the blockaded (vison) branch is the non-oscillatory one.
        """
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise InputError("t must be >= 0")
        decay = np.exp(-8.0 * self.gamma * t)
        if self.with_vison:
            p00 = 0.25 - 0.25 * decay
            p11 = 0.25 - 0.25 * decay
            p0p = 0.25 + 0.75 * decay
            p1p = 0.25 - 0.25 * decay
        else:
            osc = decay * np.cos(4.0 * self.Gamma * t)
            p00 = 0.25 + 0.25 * decay + 0.5 * osc
            p11 = 0.25 + 0.25 * decay - 0.5 * osc
            p0p = 0.25 - 0.25 * decay
            p1p = 0.25 - 0.25 * decay
        return p00, p11, p0p, p1p

    def occupations(self, t) -> tuple:
        """(n_left, n_right): site-resolved spinon occupations."""
        p00, p11, p0p, p1p = self.populations(t)
        return p00 + p0p, p11 + p1p


def two_qubit_occupations(Gamma: float, gamma: float, t, with_vison: bool) -> tuple:
    """(n_left, n_right) of the two-qubit ring at time(s) t."""
    if gamma < 0:
        raise InputError("gamma must be >= 0")
    return TwoQubitSolution(Gamma, gamma, with_vison).occupations(t)


@dataclass(frozen=True)
class RingWavefunction:
    """Single particle on an L-site tight-binding ring threaded by flux phi."""

    L: int
    Gamma: float
    phi: float

    def __post_init__(self):
        if self.L < 2 or self.L % 2 != 0:
            raise InputError(f"L must be even and >= 2, got {self.L}")

    @property
    def momenta(self) -> np.ndarray:
        j = np.arange(-self.L // 2, self.L // 2)
        return (2.0 * np.pi / self.L) * (j + self.phi / (2.0 * np.pi))

    def amplitude(self, x: int, t) -> complex | np.ndarray:
        k = self.momenta
        t = np.asarray(t, dtype=float)
        phase = np.exp(
            -1j * np.multiply.outer(t, 2.0 * self.Gamma * np.cos(k)) + 1j * k * x
        )
        out = phase.sum(axis=-1) / self.L
        return complex(out) if out.ndim == 0 else out


def ring_wavefunction(L: int, Gamma: float, phi: float, x: int, t):
    """Psi_phi(x, t) for a particle launched from x=0."""
    if not 0 <= x < L:
        raise InputError(f"x must lie in [0, {L}), got {x}")
    return RingWavefunction(L, Gamma, phi).amplitude(x, t)


def arrival_probability(L: int, Gamma: float, phi: float, t):
    """|Psi_phi(L/2, t)|^2: probability of reaching the opposite site."""
    amp = RingWavefunction(L, Gamma, phi).amplitude(L // 2, t)
    return np.abs(amp) ** 2


def predict_tmax(L: int, Gamma: float) -> float:
    """Tight-binding bracket for the first arrival peak, t ~ L/(4*Gamma)."""
    if L < 2 or L % 2 != 0:
        raise InputError(f"L must be even and >= 2, got {L}")
    return L / (4.0 * Gamma)
