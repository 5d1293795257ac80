"""Many-body coherence benchmark on a twisted Ising ring.

A spinon launched on a ring with one antiferromagnetic bond either
propagates to the diametrically opposite site or is blockaded there by
destructive interference, depending on whether a vison (a pi-flux for
the spinon) threads the ring.  The contrast between the two branches,
normalized by its noiseless value, defines the coherence ratio R and
the Q-grade: the largest even ring size at which R stays above
threshold.  This package builds the Trotter circuits, simulates them
noiselessly and under depolarizing noise, exports OpenQASM, ingests
hardware counts, and grades the results.
"""

from .config import RingConfig, bond_signs, default_shots, detection_site
from .circuits import (
    Circuit,
    Gate,
    build_full_circuit,
    build_ghz_prep,
    build_trotter_step,
    trotter_angles,
)
from .errors import (
    CapacityError,
    InputError,
    PositivityError,
    ProtocolError,
    QasmError,
    QasmSyntaxError,
    QasmUnsupportedGateError,
    QGradeError,
    SchemaError,
)
from .model import (
    Hamiltonian,
    build_hamiltonian,
    parity_expectation,
    spinon_expectations,
    spinon_occupations,
    total_spinons,
    vison_expectation,
)
from .qasm import export_qasm, parse_qasm, qasm_filename
from .statevector import (
    OccupationTrace,
    exact_evolve,
    ghz_state,
    run_circuit,
    sample_shots,
    trotter_trace,
)
from .density import (
    depolarize_qubit,
    depolarizing_strength,
    final_density_matrix,
    fine_lindblad_trace,
    lindblad_trotter_trace,
    shot_counts_noisy,
)
from .trajectories import trajectory_shot_counts, trajectory_trace
from .oracles import (
    RingWavefunction,
    TwoQubitSolution,
    arrival_probability,
    predict_tmax,
    ring_wavefunction,
    two_qubit_occupations,
)
from .metrics import (
    CalibrationRecord,
    QGradeReport,
    QGradeReportRow,
    coherence_ratio,
    find_nopt,
    find_tmax,
    qgrade,
    ratio_stderr,
    trotter_error,
)
from .records import (
    CountsFile,
    RunRecord,
    counts_occupations,
    load_calibrations,
    report_csv,
    write_report,
)

__version__ = "1.0.0"

__all__ = [
    "RingConfig", "bond_signs", "default_shots", "detection_site",
    "Circuit", "Gate", "build_full_circuit", "build_ghz_prep",
    "build_trotter_step", "trotter_angles",
    "QGradeError", "InputError", "CapacityError", "ProtocolError",
    "PositivityError", "QasmError", "QasmSyntaxError",
    "QasmUnsupportedGateError", "SchemaError",
    "Hamiltonian", "build_hamiltonian", "parity_expectation",
    "spinon_expectations", "spinon_occupations", "total_spinons",
    "vison_expectation",
    "export_qasm", "parse_qasm", "qasm_filename",
    "OccupationTrace", "exact_evolve", "ghz_state", "run_circuit",
    "sample_shots", "trotter_trace",
    "depolarize_qubit", "depolarizing_strength", "final_density_matrix",
    "fine_lindblad_trace", "lindblad_trotter_trace", "shot_counts_noisy",
    "trajectory_shot_counts", "trajectory_trace",
    "RingWavefunction", "TwoQubitSolution", "arrival_probability",
    "predict_tmax", "ring_wavefunction", "two_qubit_occupations",
    "CalibrationRecord", "QGradeReport", "QGradeReportRow",
    "coherence_ratio", "find_nopt", "find_tmax", "qgrade",
    "ratio_stderr", "trotter_error",
    "CountsFile", "RunRecord", "counts_occupations", "load_calibrations",
    "report_csv", "write_report",
    "__version__",
]
