import math

import numpy as np
import pytest

from qgrade import (
    CalibrationRecord,
    InputError,
    QGradeReport,
    QGradeReportRow,
    RingConfig,
    coherence_ratio,
    find_nopt,
    find_tmax,
    qgrade,
    ratio_stderr,
    trotter_error,
)
from qgrade.errors import ProtocolError
from qgrade.metrics import ed_trace
from qgrade.statevector import trotter_trace


def test_find_tmax_small_rings():
    assert find_tmax(RingConfig(L=4)) == 16
    assert find_tmax(RingConfig(L=6)) == 21


def test_find_tmax_rejects_odd_rings():
    with pytest.raises(InputError):
        find_tmax(RingConfig(L=2))


def test_find_nopt_small_rings():
    assert find_nopt(RingConfig(L=4), 16.0) == 6
    assert find_nopt(RingConfig(L=6), 21.0) == 8


def test_trotter_error_normalization():
    cfg = RingConfig(L=4)
    trot = tuple(trotter_trace(cfg, 16.0, 6, v) for v in (True, False))
    ed = tuple(ed_trace(cfg, 16.0, 6, v) for v in (True, False))
    delta = trotter_error(ed, trot, 6, 4)
    # Direct reimplementation of the averaged RMS definition.
    total = sum(
        float(np.sum((e.occupations[1:] - t.occupations[1:]) ** 2))
        for e, t in zip(ed, trot)
    )
    assert delta == pytest.approx(math.sqrt(total / (2 * 6 * 4)), abs=1e-14)
    assert delta <= 0.15


def test_trotter_error_rejects_mismatched_grids():
    cfg = RingConfig(L=4)
    trot = tuple(trotter_trace(cfg, 16.0, 6, v) for v in (True, False))
    ed = tuple(ed_trace(cfg, 16.0, 8, v) for v in (True, False))
    with pytest.raises(InputError):
        trotter_error(ed, trot, 6, 4)


def test_coherence_ratio():
    assert coherence_ratio(0.2, 0.6, 0.0, 0.8) == pytest.approx(0.5)
    with pytest.raises(ProtocolError):
        coherence_ratio(0.2, 0.6, 0.5, 0.5)


def test_ratio_stderr_formula():
    n_v, n_nov, n_v0, n_nov0, shots = 0.31, 0.62, 0.01, 0.79, 1000
    expected = math.sqrt(
        ((1 - n_v) * n_v + (1 - n_nov) * n_nov) / (shots * (n_v0 - n_nov0) ** 2)
    )
    assert ratio_stderr(n_v, n_nov, n_v0, n_nov0, shots) == pytest.approx(
        expected, abs=1e-15
    )
    with pytest.raises(InputError):
        ratio_stderr(1.2, 0.5, 0.0, 0.8, 1000)
    with pytest.raises(InputError):
        ratio_stderr(0.5, 0.5, 0.0, 0.8, 0)


def test_qgrade_threshold_rule():
    rows = [(4, 0.9), (6, 0.5), (8, 0.25), (10, 0.1)]
    assert qgrade(rows, 0.2) == 8
    assert qgrade(rows, 0.4) == 6
    assert qgrade(rows, 0.95) == "none"


def test_qgrade_is_monotone_in_threshold():
    rows = [(4, 0.9), (6, 0.5), (8, 0.25), (10, 0.3), (12, 0.1)]
    grades = []
    for thr in (0.05, 0.2, 0.4, 0.6, 0.95):
        g = qgrade(rows, thr)
        grades.append(0 if g == "none" else g)
    assert grades == sorted(grades, reverse=True)


def test_qgrade_unbounded_requires_exhaustive_flag():
    rows = [(4, 0.9), (6, 0.8)]
    assert qgrade(rows, 0.2) == 6
    assert qgrade(rows, 0.2, exhaustive=True) == "unbounded"


def test_qgrade_input_validation():
    with pytest.raises(InputError):
        qgrade([], 0.2)
    with pytest.raises(InputError):
        qgrade([(5, 0.5)], 0.2)
    with pytest.raises(InputError):
        qgrade([(6, 0.5), (4, 0.9)], 0.2)


def test_calibration_record_round_trip():
    rec = CalibrationRecord(
        L=6, t_max=21, N_opt=8, delta=0.0766, reference="ed-eig",
        n_v_0=0.0139, n_nov_0=0.7962,
    )
    assert CalibrationRecord.from_dict(rec.to_dict()) == rec


def test_report_round_trip_and_grade():
    rows = [
        QGradeReportRow(L=4, R=0.68, dR=0.02, n_v_g=0.16, n_nov_g=0.78,
                        n_v_0=0.001, n_nov_0=0.917, shots=1000),
        QGradeReportRow(L=6, R=0.15, dR=0.03, n_v_g=0.44, n_nov_g=0.55,
                        n_v_0=0.014, n_nov_0=0.796, shots=1000),
    ]
    report = QGradeReport(label="gamma=0.002", rows=rows, threshold=0.2)
    assert report.grade == 4
    d = report.to_dict()
    assert d["schema"] == "qgrade-report/1"
    assert d["qgrade"] == 4
    back = QGradeReport.from_dict(d)
    assert back.grade == 4
    assert back.rows[1].n_nov_0 == pytest.approx(0.796)
