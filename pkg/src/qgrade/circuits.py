"""Gate-level IR and the benchmark circuit builder.

A benchmark circuit is GHZ preparation followed by N identical Trotter
steps.  Each step applies the ZZ bond terms in two nearest-neighbour
layers (even bonds, then odd bonds, which commute) as CNOT-RZ-CNOT
blocks -- CNOT(a,b) RZ(theta on b) CNOT(a,b) == exp(-i theta Z_a Z_b / 2)
-- followed by one RX layer for the transverse field.  The twisted bond
carries angle -theta_z, every other bond +theta_z, with

    theta_z = 2*J*t_max/N    and    theta_x = 2*Gamma*t_max/N.

The vison is injected with a Z on qubit 0 between the Hadamard and the
CNOT chain, flipping the GHZ sign: (|0..0> - |1..1>)/sqrt(2), <B> = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .config import TWIST_BOND, RingConfig
from .errors import InputError

ONE_QUBIT_KINDS = frozenset({"h", "x", "z", "rx", "rz"})
PARAM_KINDS = frozenset({"rx", "rz"})
GATE_KINDS = ONE_QUBIT_KINDS | {"cx"}


@dataclass(frozen=True)
class Gate:
    """One gate: kind in {h, x, z, rx, rz, cx}; theta in radians."""

    kind: str
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise InputError(f"unknown gate kind {self.kind!r}")
        if self.kind == "cx":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise InputError(f"cx needs two distinct qubits, got {self.qubits}")
        elif len(self.qubits) != 1:
            raise InputError(f"{self.kind} acts on one qubit, got {self.qubits}")
        if self.kind in PARAM_KINDS:
            if self.theta is None or not math.isfinite(self.theta):
                raise InputError(f"{self.kind} needs a finite angle")
        elif self.theta is not None:
            raise InputError(f"{self.kind} takes no angle")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits, plus builder metadata."""

    n_qubits: int
    gates: tuple[Gate, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise InputError(
                    f"gate {g.kind} on {g.qubits} out of range for {self.n_qubits} qubits"
                )

    def count(self, kind: str) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.n_qubits != other.n_qubits:
            raise InputError("cannot concatenate circuits of different width")
        return Circuit(self.n_qubits, self.gates + other.gates, {**self.metadata})


def trotter_angles(config: RingConfig, t_max: float, N: int) -> tuple[float, float]:
    """(theta_z, theta_x) per Trotter step."""
    return 2.0 * config.J * t_max / N, 2.0 * config.Gamma * t_max / N


def _check_ring_size(L: int):
    if L < 4 or L % 2 != 0:
        raise InputError(f"circuit construction needs even L >= 4, got {L}")


def build_ghz_prep(L: int, with_vison: bool) -> Circuit:
    """GHZ preparation: H(0), optional Z(0), then the CNOT chain."""
    _check_ring_size(L)
    gates = [Gate("h", (0,))]
    if with_vison:
        gates.append(Gate("z", (0,)))
    gates += [Gate("cx", (i, i + 1)) for i in range(L - 1)]
    return Circuit(L, tuple(gates), {"L": L, "with_vison": with_vison})


def build_trotter_step(config: RingConfig, t_max: float, N: int) -> Circuit:
    """One Trotter step: even-bond ZZ layer, odd-bond ZZ layer, RX layer."""
    L = config.L
    _check_ring_size(L)
    if N < 1:
        raise InputError(f"N must be >= 1, got {N}")
    theta_z, theta_x = trotter_angles(config, t_max, N)
    gates = []
    for parity in (0, 1):
        for s in range(parity, L, 2):
            a, b = s, (s + 1) % L
            theta = -theta_z if s == TWIST_BOND else theta_z
            gates += [Gate("cx", (a, b)), Gate("rz", (b,), theta), Gate("cx", (a, b))]
    gates += [Gate("rx", (q,), theta_x) for q in range(L)]
    return Circuit(L, tuple(gates))


def build_full_circuit(
    config: RingConfig, t_max: float, N: int, with_vison: bool
) -> Circuit:
    """GHZ prep + N Trotter steps, with populated metadata."""
    theta_z, theta_x = trotter_angles(config, t_max, N)
    circuit = build_ghz_prep(config.L, with_vison)
    step = build_trotter_step(config, t_max, N)
    gates = circuit.gates + step.gates * N
    metadata = {
        "L": config.L,
        "with_vison": with_vison,
        "t_max": t_max,
        "n_steps": N,
        "theta_z": theta_z,
        "theta_x": theta_x,
    }
    return Circuit(config.L, gates, metadata)
