"""Persistence layer: run records, counts interchange, calibration store.

All JSON is written with sorted keys and a trailing newline through an
atomic write-temp-then-rename, so identical inputs always produce
byte-identical files.  Timestamps are stored as ``null`` unless a caller
supplies one, keeping the determinism contract the default.

Hardware counts arrive as a mapping from bitstrings to shot counts.
Vendors disagree on endianness, so the file carries an explicit
``bit_order``: ``q0-first`` means character 0 of the key is qubit 0
(this package's native order); ``q0-last`` keys are reversed on ingest.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .config import RingConfig
from .errors import InputError, SchemaError
from .metrics import CalibrationRecord, QGradeReport
from .model import spinon_occupations
from .statevector import OccupationTrace

RUN_SCHEMA = "qgrade-run/1"
COUNTS_SCHEMA = "qgrade-counts/1"
CALIBRATION_SCHEMA = "qgrade-calibration/1"

BACKENDS = ("statevector", "density-matrix", "trajectory", "ingested")
BIT_ORDERS = ("q0-first", "q0-last")


# ---------------------------------------------------------------- files

def write_json_atomic(path: str, payload: dict) -> None:
    """Serialize deterministically and rename into place."""
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    write_text_atomic(path, text)


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


def _require_schema(d: dict, expected: str, path: str = "<dict>") -> None:
    tag = d.get("schema")
    if tag != expected:
        raise SchemaError(f"{path}: expected schema {expected!r}, found {tag!r}")


# ---------------------------------------------------------- trace codec

def trace_to_dict(trace: OccupationTrace) -> dict:
    out = {
        "times": trace.times.tolist(),
        "occupations": trace.occupations.tolist(),
        "total": trace.total.tolist(),
        "vison": trace.vison.tolist(),
        "labels": trace.labels,
    }
    out["stderr"] = None if trace.stderr is None else trace.stderr.tolist()
    return out


def trace_from_dict(d: dict) -> OccupationTrace:
    stderr = d.get("stderr")
    return OccupationTrace(
        times=np.asarray(d["times"], dtype=float),
        occupations=np.asarray(d["occupations"], dtype=float),
        total=np.asarray(d["total"], dtype=float),
        vison=np.asarray(d["vison"], dtype=float),
        labels=dict(d.get("labels", {})),
        stderr=None if stderr is None else np.asarray(stderr, dtype=float),
    )


# ----------------------------------------------------------- run record

@dataclass
class RunRecord:
    """One simulation run: both branches at calibrated (t_max, N_opt)."""

    config: RingConfig
    backend: str
    seed: int | None
    calibration: CalibrationRecord
    n_v: float
    n_nov: float
    traces: dict[str, OccupationTrace] = field(default_factory=dict)
    timestamp: str | None = None
    version: str = ""

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise InputError(
                f"backend must be one of {BACKENDS}, got {self.backend!r}"
            )

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "schema": RUN_SCHEMA,
            "config": self.config.to_dict(),
            "backend": self.backend,
            "seed": self.seed,
            "calibration": self.calibration.to_dict(),
            "occupations": {"vison": self.n_v, "no_vison": self.n_nov,
                            "site": self.config.detection_site},
            "traces": {k: trace_to_dict(t) for k, t in self.traces.items()},
            "timestamp": self.timestamp,
            "version": self.version or __version__,
        }

    @classmethod
    def from_dict(cls, d: dict, path: str = "<dict>") -> "RunRecord":
        _require_schema(d, RUN_SCHEMA, path)
        occ = d["occupations"]
        return cls(
            config=RingConfig.from_dict(d["config"]),
            backend=d["backend"],
            seed=d["seed"],
            calibration=CalibrationRecord.from_dict(d["calibration"]),
            n_v=occ["vison"],
            n_nov=occ["no_vison"],
            traces={k: trace_from_dict(t) for k, t in d.get("traces", {}).items()},
            timestamp=d.get("timestamp"),
            version=d.get("version", ""),
        )


# ----------------------------------------------------------- counts I/O

@dataclass
class CountsFile:
    """Measurement-counts interchange record for one circuit branch."""

    backend: str
    L: int
    with_vison: bool
    t_max: float
    n_steps: int
    shots: int
    bit_order: str
    counts: dict[str, int]

    def __post_init__(self):
        if self.bit_order not in BIT_ORDERS:
            raise SchemaError(
                f"bit_order must be one of {BIT_ORDERS}, got {self.bit_order!r}"
            )
        total = 0
        for key, value in self.counts.items():
            if len(key) != self.L or set(key) - {"0", "1"}:
                raise SchemaError(
                    f"counts key {key!r} is not a length-{self.L} bitstring"
                )
            if not isinstance(value, int) or value < 0:
                raise SchemaError(f"counts[{key!r}] = {value!r} is not a count")
            total += value
        if total != self.shots:
            raise SchemaError(
                f"counts sum to {total}, header says shots = {self.shots}"
            )

    def to_dict(self) -> dict:
        return {
            "schema": COUNTS_SCHEMA,
            "backend": self.backend,
            "L": self.L,
            "with_vison": self.with_vison,
            "t_max": self.t_max,
            "n_steps": self.n_steps,
            "shots": self.shots,
            "bit_order": self.bit_order,
            "counts": dict(sorted(self.counts.items())),
        }

    @classmethod
    def from_dict(cls, d: dict, path: str = "<dict>") -> "CountsFile":
        _require_schema(d, COUNTS_SCHEMA, path)
        try:
            return cls(
                backend=d["backend"], L=d["L"], with_vison=d["with_vison"],
                t_max=d["t_max"], n_steps=d["n_steps"], shots=d["shots"],
                bit_order=d["bit_order"], counts=d["counts"],
            )
        except KeyError as exc:
            raise SchemaError(f"{path}: missing counts field {exc}") from None

    def native_counts(self) -> dict[str, int]:
        """Counts re-keyed to q0-first order."""
        if self.bit_order == "q0-first":
            return dict(self.counts)
        return {key[::-1]: value for key, value in self.counts.items()}


def counts_occupations(files: Iterable[CountsFile]) -> np.ndarray:
    """Per-site spinon occupations from pooled measurement counts.

    Repeated files for the same branch (e.g. hardware randomizations) are
    pooled at the shot level before averaging, i.e. occupations are
    weighted by shots, not averaged per file.
    """
    files = list(files)
    if not files:
        raise InputError("counts_occupations needs at least one counts file")
    L = files[0].L
    for f in files[1:]:
        if (f.L, f.t_max, f.n_steps, f.with_vison) != (
            files[0].L, files[0].t_max, files[0].n_steps, files[0].with_vison
        ):
            raise InputError("pooled counts files must share L, t_max, N, branch")
    totals = np.zeros(L, dtype=float)
    shots = 0
    for f in files:
        for key, value in f.native_counts().items():
            bits = np.frombuffer(key.encode(), dtype=np.uint8) - ord("0")
            totals += value * spinon_occupations(bits)
            shots += value
    return totals / shots


# ----------------------------------------------------- calibration store

def calibrations_to_dict(records: Iterable[CalibrationRecord]) -> dict:
    return {
        "schema": CALIBRATION_SCHEMA,
        "records": {str(r.L): r.to_dict() for r in records},
    }


def calibrations_from_dict(d: dict, path: str = "<dict>") -> dict[int, CalibrationRecord]:
    _require_schema(d, CALIBRATION_SCHEMA, path)
    return {
        int(L): CalibrationRecord.from_dict(rec)
        for L, rec in d["records"].items()
    }


def load_calibrations(path: str) -> dict[int, CalibrationRecord]:
    return calibrations_from_dict(read_json(path), path)


# ------------------------------------------------------------ report CSV

def report_csv(report: QGradeReport) -> str:
    lines = ["L,R,dR"]
    for row in report.rows:
        lines.append(f"{row.L},{row.R!r},{row.dR!r}")
    return "\n".join(lines) + "\n"


def write_report(report: QGradeReport, json_path: str, csv_path: str) -> None:
    write_json_atomic(json_path, report.to_dict())
    write_text_atomic(csv_path, report_csv(report))
