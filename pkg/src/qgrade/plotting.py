"""Figure rendering for reports and traces (headless matplotlib).

The CLI report path saves these next to the JSON/CSV output; the
functions are also usable directly on in-memory objects.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .metrics import QGradeReport
from .statevector import OccupationTrace


def plot_ratio_curve(report: QGradeReport, path: str) -> None:
    """R vs L with error bars, threshold line, and the resulting grade."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    Ls = [row.L for row in report.rows]
    Rs = [row.R for row in report.rows]
    dRs = [row.dR for row in report.rows]
    ax.errorbar(Ls, Rs, yerr=dRs, marker="o", capsize=3, lw=1.2)
    ax.axhline(report.threshold, color="crimson", ls="--", lw=1.0,
               label=f"threshold {report.threshold:g}")
    ax.set_xlabel("ring size $L$")
    ax.set_ylabel(r"coherence ratio $R_\gamma(L)$")
    ax.set_xticks(Ls)
    ax.set_title(f"{report.label}: Q-grade = {report.grade}")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_occupation_trace(trace: OccupationTrace, path: str) -> None:
    """Per-site spinon occupations against time, one line per site."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    L = trace.occupations.shape[1]
    for s in range(L):
        ax.plot(trace.times, trace.occupations[:, s], label=f"$s={s}$")
        if trace.stderr is not None:
            ax.fill_between(
                trace.times,
                trace.occupations[:, s] - trace.stderr[:, s],
                trace.occupations[:, s] + trace.stderr[:, s],
                alpha=0.2,
            )
    ax.set_xlabel("time $t$")
    ax.set_ylabel(r"$\langle n_s \rangle$")
    ax.set_ylim(-0.05, 1.05)
    branch = "vison" if trace.labels.get("with_vison") else "no vison"
    ax.set_title(f"L={L}, {branch}")
    ax.legend(frameon=False, fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
