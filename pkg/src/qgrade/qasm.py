"""OpenQASM 2/3 export and a minimal parser for round-trip checks.

The emitted grammar is deliberately small: h/x/z/rx/rz/cx on single
qubit indices of one register, terminal measurement of every qubit i
into classical bit i.  Angles are printed with repr (shortest exact
round-trip), never reduced mod 2*pi, so output is byte-stable.
"""

from __future__ import annotations

import re

from .circuits import Circuit, Gate, PARAM_KINDS
from .errors import InputError, QasmSyntaxError, QasmUnsupportedGateError


def export_qasm(circuit: Circuit, version: int = 3) -> str:
    n = circuit.n_qubits
    lines = []
    if version == 3:
        lines += ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{n}] q;", f"bit[{n}] c;"]
    elif version == 2:
        lines += ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{n}];", f"creg c[{n}];"]
    else:
        raise InputError(f"unsupported OpenQASM version {version}")
    for g in circuit.gates:
        if g.kind == "cx":
            lines.append(f"cx q[{g.qubits[0]}], q[{g.qubits[1]}];")
        elif g.kind in PARAM_KINDS:
            lines.append(f"{g.kind}({g.theta!r}) q[{g.qubits[0]}];")
        else:
            lines.append(f"{g.kind} q[{g.qubits[0]}];")
    for i in range(n):
        if version == 3:
            lines.append(f"c[{i}] = measure q[{i}];")
        else:
            lines.append(f"measure q[{i}] -> c[{i}];")
    return "\n".join(lines) + "\n"


_QUBIT = r"q\[(\d+)\]"
_FLOAT = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
_PATTERNS = {
    "plain": re.compile(rf"(h|x|z)\s+{_QUBIT};$"),
    "rot": re.compile(rf"(rx|rz)\({_FLOAT}\)\s+{_QUBIT};$"),
    "cx": re.compile(rf"cx\s+{_QUBIT},\s*{_QUBIT};$"),
    "meas2": re.compile(rf"measure\s+{_QUBIT}\s*->\s*c\[(\d+)\];$"),
    "meas3": re.compile(rf"c\[(\d+)\]\s*=\s*measure\s+{_QUBIT};$"),
    "qreg2": re.compile(r"qreg\s+q\[(\d+)\];$"),
    "qreg3": re.compile(r"qubit\[(\d+)\]\s+q;$"),
    "creg2": re.compile(r"creg\s+c\[(\d+)\];$"),
    "creg3": re.compile(r"bit\[(\d+)\]\s+c;$"),
}
_GATE_NAME = re.compile(r"^([a-zA-Z_][a-zA-Z0-9_]*)")


def parse_qasm(text: str) -> Circuit:
    """Parse text conforming to the export_qasm grammar back into a Circuit."""
    n_qubits = None
    gates = []
    version = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//")[0].strip()
        if not line:
            continue
        if line.startswith("OPENQASM"):
            m = re.match(r"OPENQASM\s+([23])(\.0)?;$", line)
            if not m:
                raise QasmSyntaxError(f"bad version statement {line!r}", lineno)
            version = int(m.group(1))
            continue
        if line.startswith("include"):
            continue
        m = _PATTERNS["qreg2"].match(line) or _PATTERNS["qreg3"].match(line)
        if m:
            n_qubits = int(m.group(1))
            continue
        if _PATTERNS["creg2"].match(line) or _PATTERNS["creg3"].match(line):
            continue
        if _PATTERNS["meas2"].match(line) or _PATTERNS["meas3"].match(line):
            continue
        if n_qubits is None:
            raise QasmSyntaxError("gate before qubit register declaration", lineno)
        m = _PATTERNS["plain"].match(line)
        if m:
            gates.append(Gate(m.group(1), (int(m.group(2)),)))
            continue
        m = _PATTERNS["rot"].match(line)
        if m:
            gates.append(Gate(m.group(1), (int(m.group(3)),), float(m.group(2))))
            continue
        m = _PATTERNS["cx"].match(line)
        if m:
            gates.append(Gate("cx", (int(m.group(1)), int(m.group(2)))))
            continue
        name = _GATE_NAME.match(line)
        if name and name.group(1) not in ("h", "x", "z", "rx", "rz", "cx", "measure"):
            raise QasmUnsupportedGateError(name.group(1), lineno)
        raise QasmSyntaxError(f"cannot parse {line!r}", lineno)
    if version is None:
        raise QasmSyntaxError("missing OPENQASM version statement", 1)
    if n_qubits is None:
        raise QasmSyntaxError("missing qubit register declaration", 1)
    return Circuit(n_qubits, tuple(gates), {"qasm_version": version})


def qasm_filename(L: int, N: int, with_vison: bool) -> str:
    """Canonical export name: qgrade_L{L}_N{N}_{vison|novison}.qasm."""
    return f"qgrade_L{L}_N{N}_{'vison' if with_vison else 'novison'}.qasm"
