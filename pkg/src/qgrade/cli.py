"""Command-line driver: calibrate, simulate, sweep, export-qasm, ingest, report.

Determinism contract: every artifact is a pure function of (config,
seed).  JSON is emitted with sorted keys, files are written atomically,
and timestamps are omitted, so repeated invocations with identical
inputs are byte-identical.

A flat key=value config file (``--config``) may set any RingConfig
field plus ``backend`` and ``seed``; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import os
import sys

from .config import DENSE_HAMILTONIAN_MAX_L, RingConfig, default_shots
from .circuits import build_full_circuit
from .density import lindblad_trotter_trace
from .errors import QGradeError, InputError
from .metrics import (
    CalibrationRecord,
    QGradeReport,
    QGradeReportRow,
    coherence_ratio,
    find_nopt,
    find_tmax,
    ratio_stderr,
)
from .qasm import export_qasm, qasm_filename
from .records import (
    CountsFile,
    RunRecord,
    calibrations_from_dict,
    calibrations_to_dict,
    counts_occupations,
    read_json,
    write_json_atomic,
    write_report,
    write_text_atomic,
)
from .statevector import trotter_trace
from .trajectories import trajectory_trace

CALIBRATION_FILENAME = "calibration.json"


# ------------------------------------------------------------- helpers

def _parse_l_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InputError(f"--L expects comma-separated integers, got {text!r}")
    if not values:
        raise InputError("--L list is empty")
    for L in values:
        if L < 4 or L % 2 != 0:
            raise InputError(f"ring sizes must be even and >= 4, got {L}")
    return values


def _read_config_file(path: str) -> dict:
    """Flat key=value lines; blank lines and # comments ignored."""
    out = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


_CONFIG_TYPES = {
    "L": int, "J": float, "Gamma": float, "gamma": float,
    "twist_site": int, "threshold": float, "shots": int, "seed": int,
    "backend": str,
}


def _merged_option(args, file_values: dict, key: str, default=None):
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        return flag
    if key in file_values:
        caster = _CONFIG_TYPES.get(key, str)
        try:
            return caster(file_values[key])
        except ValueError:
            raise InputError(f"config key {key}={file_values[key]!r} is not {caster.__name__}")
    return default


def _build_ring_config(args, file_values: dict, L: int) -> RingConfig:
    return RingConfig(
        L=L,
        J=_merged_option(args, file_values, "J", 1.0),
        Gamma=_merged_option(args, file_values, "Gamma", 0.1),
        gamma=_merged_option(args, file_values, "gamma", 0.0),
        threshold=_merged_option(args, file_values, "threshold", 0.2),
        shots=_merged_option(args, file_values, "shots", 0),
    )


def _branch_seed(seed: int | None, L: int, with_vison: bool) -> int | None:
    if seed is None:
        return None
    return (seed * 1000003 + 2 * L + int(with_vison)) % (2**63)


def _calibrate_one(config: RingConfig) -> CalibrationRecord:
    """t_max and N_opt for one ring size, plus the noiseless reference.

    Above the dense-diagonalization cap, N_opt follows the empirical
    N = L + 2 law instead of an exact-evolution error scan.
    """
    noiseless = config.with_gamma(0.0)
    t_max = find_tmax(noiseless)
    if config.L <= DENSE_HAMILTONIAN_MAX_L:
        n_opt = find_nopt(noiseless, t_max)
        from .metrics import _trotter_delta

        delta = _trotter_delta(noiseless, t_max, n_opt)
        reference = "ed-eig"
    else:
        n_opt = config.L + 2
        delta = None
        reference = "extrapolated"
    site = config.detection_site
    n_v_0 = trotter_trace(noiseless, t_max, n_opt, True).final_occupation(site)
    n_nov_0 = trotter_trace(noiseless, t_max, n_opt, False).final_occupation(site)
    return CalibrationRecord(
        L=config.L, t_max=t_max, N_opt=n_opt, delta=delta,
        reference=reference, n_v_0=n_v_0, n_nov_0=n_nov_0,
    )


def _load_or_compute_calibration(args, config: RingConfig) -> CalibrationRecord:
    path = getattr(args, "calibration", None)
    if path:
        table = calibrations_from_dict(read_json(path), path)
        if config.L in table:
            return table[config.L]
        raise InputError(
            f"{path} has no calibration for L={config.L}; run `qgrade calibrate` first"
        )
    return _calibrate_one(config)


def _run_branches(config: RingConfig, cal: CalibrationRecord, backend: str,
                  seed: int | None):
    traces = {}
    for with_vison in (True, False):
        if backend == "statevector":
            trace = trotter_trace(config, cal.t_max, cal.N_opt, with_vison)
        elif backend == "density-matrix":
            trace = lindblad_trotter_trace(config, cal.t_max, cal.N_opt, with_vison)
        elif backend == "trajectory":
            trace = trajectory_trace(
                config, cal.t_max, cal.N_opt, with_vison,
                n_traj=config.shots,
                seed=_branch_seed(seed, config.L, with_vison) or 0,
            )
        else:
            raise InputError(f"unknown backend {backend!r}")
        traces["vison" if with_vison else "no_vison"] = trace
    site = config.detection_site
    return (
        traces["vison"].final_occupation(site),
        traces["no_vison"].final_occupation(site),
        traces,
    )


def _record_to_row(record: RunRecord) -> QGradeReportRow:
    cal = record.calibration
    R = coherence_ratio(record.n_v, record.n_nov, cal.n_v_0, cal.n_nov_0)
    dR = ratio_stderr(
        min(max(record.n_v, 0.0), 1.0),
        min(max(record.n_nov, 0.0), 1.0),
        cal.n_v_0, cal.n_nov_0, record.config.shots,
    )
    return QGradeReportRow(
        L=record.config.L, R=R, dR=dR,
        n_v_g=record.n_v, n_nov_g=record.n_nov,
        n_v_0=cal.n_v_0, n_nov_0=cal.n_nov_0,
        shots=record.config.shots,
    )


def _emit_report(report: QGradeReport, out_dir: str, stem: str) -> None:
    json_path = os.path.join(out_dir, f"{stem}.json")
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    png_path = os.path.join(out_dir, f"{stem}.png")
    write_report(report, json_path, csv_path)
    from .plotting import plot_ratio_curve

    plot_ratio_curve(report, png_path)
    print(f"Q-grade ({report.label}, threshold {report.threshold:g}): {report.grade}")
    for path in (json_path, csv_path, png_path):
        print(f"wrote {path}")


def _gamma_tag(gamma: float) -> str:
    return f"{gamma:g}".replace("-", "m")


# ---------------------------------------------------------- subcommands

def cmd_calibrate(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    records = []
    for L in _parse_l_list(args.L):
        config = _build_ring_config(args, file_values, L)
        record = _calibrate_one(config)
        records.append(record)
        print(
            f"L={L}: t_max={record.t_max} N_opt={record.N_opt} "
            f"delta={'-' if record.delta is None else f'{record.delta:.4f}'} "
            f"({record.reference})"
        )
    path = os.path.join(args.out, CALIBRATION_FILENAME)
    write_json_atomic(path, calibrations_to_dict(records))
    print(f"wrote {path}")
    return 0


def _simulate_one(args, file_values: dict, L: int) -> RunRecord:
    config = _build_ring_config(args, file_values, L)
    backend = _merged_option(args, file_values, "backend", "statevector")
    seed = _merged_option(args, file_values, "seed")
    cal = _load_or_compute_calibration(args, config)
    n_v, n_nov, traces = _run_branches(config, cal, backend, seed)
    return RunRecord(
        config=config, backend=backend, seed=seed, calibration=cal,
        n_v=n_v, n_nov=n_nov, traces=traces if args.traces else {},
    )


def _run_filename(record: RunRecord) -> str:
    return (
        f"run_L{record.config.L}_gamma{_gamma_tag(record.config.gamma)}"
        f"_{record.backend}.json"
    )


def cmd_simulate(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    record = _simulate_one(args, file_values, int(args.L))
    path = os.path.join(args.out, _run_filename(record))
    write_json_atomic(path, record.to_dict())
    row = _record_to_row(record)
    print(
        f"L={record.config.L} gamma={record.config.gamma:g} "
        f"backend={record.backend}: n_v={record.n_v:.4f} "
        f"n_nov={record.n_nov:.4f} R={row.R:.4f} (dR={row.dR:.4f})"
    )
    print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    rows = []
    gamma = None
    for L in _parse_l_list(args.L):
        record = _simulate_one(args, file_values, L)
        gamma = record.config.gamma
        write_json_atomic(
            os.path.join(args.out, _run_filename(record)), record.to_dict()
        )
        row = _record_to_row(record)
        rows.append(row)
        print(f"L={L}: R={row.R:.4f} +- {row.dR:.4f}")
    threshold = _merged_option(args, file_values, "threshold", 0.2)
    backend = _merged_option(args, file_values, "backend", "statevector")
    report = QGradeReport(
        label=f"gamma={gamma:g} ({backend})",
        rows=rows, threshold=threshold, exhaustive=args.exhaustive,
        metadata={"backend": backend, "gamma": gamma},
    )
    _emit_report(report, args.out, f"report_gamma{_gamma_tag(gamma)}")
    return 0


def cmd_export_qasm(args) -> int:
    file_values = _read_config_file(args.config) if args.config else {}
    for L in _parse_l_list(args.L):
        config = _build_ring_config(args, file_values, L)
        cal = _load_or_compute_calibration(args, config)
        for with_vison in (True, False):
            circuit = build_full_circuit(config, cal.t_max, cal.N_opt, with_vison)
            text = export_qasm(circuit, version=args.qasm_version)
            path = os.path.join(args.out, qasm_filename(L, cal.N_opt, with_vison))
            write_text_atomic(path, text)
            print(f"wrote {path}")
    return 0


def cmd_ingest(args) -> int:
    table = calibrations_from_dict(read_json(args.calibration), args.calibration)
    groups: dict[tuple[int, bool], list[CountsFile]] = {}
    for path in args.counts:
        cf = CountsFile.from_dict(read_json(path), path)
        groups.setdefault((cf.L, cf.with_vison), []).append(cf)
    sizes = sorted({L for L, _ in groups})
    rows = []
    for L in sizes:
        if (L, True) not in groups or (L, False) not in groups:
            raise InputError(f"L={L}: need counts for both branches (vison and no-vison)")
        if L not in table:
            raise InputError(
                f"no calibration for L={L} in {args.calibration}; run `qgrade calibrate`"
            )
        cal = table[L]
        for cf in groups[(L, True)] + groups[(L, False)]:
            if (cf.t_max, cf.n_steps) != (cal.t_max, cal.N_opt):
                raise InputError(
                    f"{cf.backend} counts at L={L} ran (t_max={cf.t_max}, "
                    f"N={cf.n_steps}) but calibration says "
                    f"(t_max={cal.t_max}, N={cal.N_opt})"
                )
        site = L // 2
        n_v = float(counts_occupations(groups[(L, True)])[site])
        n_nov = float(counts_occupations(groups[(L, False)])[site])
        shots = sum(cf.shots for cf in groups[(L, True)])
        rows.append(QGradeReportRow(
            L=L,
            R=coherence_ratio(n_v, n_nov, cal.n_v_0, cal.n_nov_0),
            dR=ratio_stderr(n_v, n_nov, cal.n_v_0, cal.n_nov_0, shots),
            n_v_g=n_v, n_nov_g=n_nov,
            n_v_0=cal.n_v_0, n_nov_0=cal.n_nov_0, shots=shots,
        ))
    threshold = args.threshold if args.threshold is not None else 0.2
    report = QGradeReport(
        label="ingested", rows=rows, threshold=threshold,
        exhaustive=args.exhaustive,
        metadata={
            "backend": "ingested",
            # Pooled at the shot level; the alternative (mean of per-file
            # R values) weighs randomizations equally regardless of shots.
            "aggregation": "pooled-occupations",
        },
    )
    _emit_report(report, args.out, "report_ingested")
    return 0


def cmd_report(args) -> int:
    records = [RunRecord.from_dict(read_json(p), p) for p in args.runs]
    if not records:
        raise InputError("report needs at least one run record")
    records.sort(key=lambda r: r.config.L)
    seen = set()
    rows = []
    for record in records:
        if record.config.L in seen:
            raise InputError(f"duplicate run record for L={record.config.L}")
        seen.add(record.config.L)
        rows.append(_record_to_row(record))
    threshold = (
        args.threshold if args.threshold is not None
        else records[0].config.threshold
    )
    gammas = sorted({r.config.gamma for r in records})
    backends = sorted({r.backend for r in records})
    report = QGradeReport(
        label=f"gamma={','.join(f'{g:g}' for g in gammas)} ({','.join(backends)})",
        rows=rows, threshold=threshold, exhaustive=args.exhaustive,
        metadata={"gammas": gammas, "backends": backends},
    )
    _emit_report(report, args.out, "report")
    return 0


# --------------------------------------------------------------- parser

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--threshold", type=float, help="Q-grade cutoff on R")


def _add_ring_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma", type=float, help="depolarizing rate")
    parser.add_argument("--Gamma", type=float, help="transverse field")
    parser.add_argument("--J", type=float, help="Ising coupling")
    parser.add_argument("--shots", type=int, help="samples per circuit")
    parser.add_argument("--seed", type=int, help="base RNG seed")
    parser.add_argument(
        "--backend", choices=["statevector", "density-matrix", "trajectory"],
        help="simulation backend",
    )
    parser.add_argument(
        "--calibration", help="calibration JSON (computed on the fly if absent)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgrade",
        description="Many-body coherence (Q-grade) benchmark on a twisted Ising ring.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("calibrate", help="find t_max and N_opt per ring size")
    p.add_argument("--L", required=True, help="comma-separated even ring sizes")
    _add_ring_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("simulate", help="run both branches at one (L, gamma)")
    p.add_argument("--L", required=True, type=int)
    p.add_argument("--traces", action="store_true",
                   help="embed full occupation traces in the run record")
    _add_ring_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="simulate across L and emit a graded report")
    p.add_argument("--L", required=True, help="comma-separated even ring sizes")
    p.add_argument("--traces", action="store_true")
    p.add_argument("--exhaustive", action="store_true",
                   help="mark the sweep exhaustive (enables 'unbounded')")
    _add_ring_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export-qasm", help="write vison/no-vison OpenQASM files")
    p.add_argument("--L", required=True, help="comma-separated even ring sizes")
    p.add_argument("--qasm-version", type=int, choices=[2, 3], default=3)
    _add_ring_options(p)
    _add_common(p)
    p.set_defaults(func=cmd_export_qasm)

    p = sub.add_parser("ingest", help="grade hardware counts files")
    p.add_argument("counts", nargs="+", help="qgrade-counts/1 JSON files")
    p.add_argument("--calibration", required=True)
    p.add_argument("--exhaustive", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("report", help="grade saved run records")
    p.add_argument("runs", nargs="+", help="qgrade-run/1 JSON files")
    p.add_argument("--exhaustive", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QGradeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
