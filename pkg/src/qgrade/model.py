"""Twisted Ising ring: spinon/vison observables and the Hamiltonian.

H = J*A_0 - J*sum_{s!=0} A_s - Gamma*sum_i X_i,  A_s = Z_s Z_{(s+1) mod L}.

A bond is "excited" (hosts a spinon) when its interaction energy is not
minimised: n_s = (1 - J_s z_s z_{s+1}) / 2 with z = 1 - 2*bit.  The
single twisted bond forces sum_s n_s to be odd for every bitstring.

Basis convention: amplitude index bit i (least significant = qubit 0)
holds qubit i's Z-basis value.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .config import DENSE_HAMILTONIAN_MAX_L, RingConfig, bond_signs
from .errors import CapacityError, InputError

# Sparse / matrix-free Hamiltonians beyond the dense cap, up to this size.
SPARSE_HAMILTONIAN_MAX_L = 24


def spinon_occupations(bits) -> np.ndarray:
    """Per-bond spinon indicators {0,1} for one Z-basis bitstring."""
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1:
        raise InputError("bits must be a 1D array")
    L = bits.shape[0]
    if L < 2 or np.any((bits != 0) & (bits != 1)):
        raise InputError("bits must be a length-L {0,1} array with L >= 2")
    walls = bits ^ np.roll(bits, -1)  # domain wall across bond s
    occ = walls.copy()
    occ[0] ^= 1  # twisted bond: excited when *aligned*
    return occ


@lru_cache(maxsize=8)
def occupation_table(L: int) -> np.ndarray:
    """(2^L, L) uint8 table of n_s for every basis index."""
    idx = np.arange(1 << L, dtype=np.int64)
    table = np.empty((1 << L, L), dtype=np.uint8)
    for s in range(L):
        a = (idx >> s) & 1
        b = (idx >> ((s + 1) % L)) & 1
        table[:, s] = a ^ b
    table[:, 0] ^= 1
    return table


def _probabilities(state: np.ndarray) -> tuple[np.ndarray, int]:
    """Z-basis probabilities of a state vector or density matrix."""
    state = np.asarray(state)
    if state.ndim == 1:
        p = np.abs(state) ** 2
    elif state.ndim == 2 and state.shape[0] == state.shape[1]:
        p = np.real(np.diagonal(state))
    else:
        raise InputError(f"not a state vector or density matrix: shape {state.shape}")
    dim = p.shape[0]
    L = int(dim).bit_length() - 1
    if 1 << L != dim or L < 2:
        raise InputError(f"state dimension {dim} is not 2^L with L >= 2")
    return p, L


def spinon_expectations(state, config: RingConfig | None = None) -> np.ndarray:
    """<n_s> for every bond of a pure or mixed L-qubit state."""
    p, L = _probabilities(state)
    if config is not None and config.L != L:
        raise InputError(f"state has L={L} but config has L={config.L}")
    return p @ occupation_table(L)


def total_spinons(occupations) -> float:
    """Total spinon number, sum_s <n_s>."""
    occ = np.asarray(occupations, dtype=float)
    if np.any(occ < -1e-12) or np.any(occ > 1 + 1e-12):
        raise InputError("occupations must lie in [0,1]")
    return float(occ.sum())


def vison_expectation(state) -> float:
    """<B> with B = prod_i X_i (ring-flip / flux operator)."""
    state = np.asarray(state)
    if state.ndim == 1:
        # B sends basis index b to ~b, i.e. reverses the amplitude array.
        return float(np.real(np.vdot(state, state[::-1])))
    if state.ndim == 2 and state.shape[0] == state.shape[1]:
        return float(np.real(np.trace(state[::-1])))
    raise InputError(f"not a state vector or density matrix: shape {state.shape}")


def parity_expectation(state) -> float:
    """<prod_s (1 - 2 n_s)>; exactly -1 on the twisted ring."""
    p, L = _probabilities(state)
    signs = 1.0 - 2.0 * occupation_table(L).astype(float)
    return float(p @ np.prod(signs, axis=1))


def diagonal_energies(config: RingConfig) -> np.ndarray:
    """Bond part of H on the computational basis: -sum_s J_s z_s z_{s+1}."""
    L = config.L
    table = occupation_table(L).astype(float)
    # n_s = (1 - J_s z_s z_{s+1})/2  =>  J_s z_s z_{s+1} = 1 - 2 n_s
    jzz = 1.0 - 2.0 * table
    return -config.J * jzz.sum(axis=1)


class Hamiltonian:
    """H of the twisted ring; dense, sparse and matrix-free views.

    The matrix is real symmetric in the computational basis, which the
    eigendecomposition path exploits.
    """

    def __init__(self, config: RingConfig):
        L = config.L
        if L > SPARSE_HAMILTONIAN_MAX_L:
            raise CapacityError(
                f"L={L} exceeds the Hamiltonian capacity L<={SPARSE_HAMILTONIAN_MAX_L}",
                limit=SPARSE_HAMILTONIAN_MAX_L,
            )
        self.config = config
        self.L = L
        self.dim = 1 << L
        self._sparse = None
        self._eig = None

    def as_sparse(self) -> sp.csr_matrix:
        if self._sparse is None:
            L, dim = self.L, self.dim
            idx = np.arange(dim)
            rows = [idx]
            cols = [idx]
            vals = [diagonal_energies(self.config)]
            for q in range(L):
                rows.append(idx)
                cols.append(idx ^ (1 << q))
                vals.append(np.full(dim, -self.config.Gamma))
            self._sparse = sp.coo_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(dim, dim),
            ).tocsr()
        return self._sparse

    def as_dense(self) -> np.ndarray:
        if self.L > DENSE_HAMILTONIAN_MAX_L:
            raise CapacityError(
                f"dense Hamiltonians are limited to L<={DENSE_HAMILTONIAN_MAX_L}",
                limit=DENSE_HAMILTONIAN_MAX_L,
            )
        return self.as_sparse().toarray()

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.as_sparse() @ psi

    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached real-symmetric eigendecomposition (dense sizes only)."""
        if self._eig is None:
            energies, vectors = np.linalg.eigh(self.as_dense())
            self._eig = (energies, vectors)
        return self._eig

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        """exp(-iHt) |psi>."""
        if psi.shape != (self.dim,):
            raise InputError(f"state dimension {psi.shape} != ({self.dim},)")
        if t == 0.0:
            return psi.astype(complex, copy=True)
        if self.L <= DENSE_HAMILTONIAN_MAX_L:
            energies, vectors = self.eig()
            coeff = vectors.T @ psi
            return vectors @ (np.exp(-1j * energies * t) * coeff)
        return spla.expm_multiply(-1j * t * self.as_sparse().astype(complex), psi)


@lru_cache(maxsize=4)
def _cached_hamiltonian(L, J, Gamma) -> Hamiltonian:
    return Hamiltonian(RingConfig(L=L, J=J, Gamma=Gamma))


def build_hamiltonian(config: RingConfig) -> Hamiltonian:
    """Hamiltonian for ``config``; eigendecompositions are cached per (L,J,Gamma)."""
    return _cached_hamiltonian(config.L, config.J, config.Gamma)
