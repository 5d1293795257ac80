"""Benchmark configuration and the ring bond convention.

Geometry: L qubits on a ring, indexed 0..L-1.  Bond (= spinon site) s
couples qubits s and (s+1) mod L.  Every bond is ferromagnetic except
bond 0, which is antiferromagnetic ("twisted"); this forces an odd
number of domain walls.  The detection site sits diametrically opposite
the twist, at s = L/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InputError

# Bond convention constants (pure convention, shared by every module).
TWIST_BOND = 0

# Dense 2^L x 2^L Hamiltonians are allowed only up to this size.
DENSE_HAMILTONIAN_MAX_L = 12


def detection_site(L: int) -> int:
    """Spinon site diametrically opposite the twisted bond."""
    return L // 2


def bond_signs(L: int) -> np.ndarray:
    """J_s couplings: +1 everywhere except the twisted bond (-1)."""
    signs = np.ones(L)
    signs[TWIST_BOND] = -1.0
    return signs


def default_shots(L: int) -> int:
    """Shot budget convention: 1000 up to L=16, 2000 beyond."""
    return 1000 if L <= 16 else 2000


@dataclass(frozen=True)
class RingConfig:
    """Physical and protocol parameters of one benchmark instance.

    L      -- ring size (even, >= 2); qubits == bonds == L
    J      -- Ising coupling, the energy unit
    Gamma  -- transverse field (spinon hopping scale), 0 < Gamma
    gamma  -- isotropic bath rate, >= 0
    threshold -- Q-grade cutoff on the coherence ratio
    shots  -- samples per circuit
    """

    L: int
    J: float = 1.0
    Gamma: float = 0.1
    gamma: float = 0.0
    twist_site: int = TWIST_BOND
    threshold: float = 0.2
    shots: int = field(default=0)

    def __post_init__(self):
        if self.L < 2 or self.L % 2 != 0:
            raise InputError(f"L must be even and >= 2, got {self.L}")
        if self.J <= 0:
            raise InputError(f"J must be positive, got {self.J}")
        if self.Gamma <= 0:
            raise InputError(f"Gamma must be positive, got {self.Gamma}")
        if self.gamma < 0:
            raise InputError(f"gamma must be >= 0, got {self.gamma}")
        if self.twist_site != TWIST_BOND:
            raise InputError("the twisted bond is fixed at s=0")
        if not 0.0 < self.threshold < 1.0:
            raise InputError(f"threshold must lie in (0,1), got {self.threshold}")
        if self.shots == 0:
            object.__setattr__(self, "shots", default_shots(self.L))
        if self.shots < 1:
            raise InputError(f"shots must be positive, got {self.shots}")

    @property
    def detection_site(self) -> int:
        return detection_site(self.L)

    def with_gamma(self, gamma: float) -> "RingConfig":
        return replace(self, gamma=gamma)

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "J": self.J,
            "Gamma": self.Gamma,
            "gamma": self.gamma,
            "twist_site": self.twist_site,
            "threshold": self.threshold,
            "shots": self.shots,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RingConfig":
        return cls(**d)
