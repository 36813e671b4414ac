"""CSV and key-value report writers; output is byte-stable for equal inputs."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..integrator import Trajectory
from .verify import VerificationReport


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def trajectory_csv(traj: Trajectory) -> str:
    cols = traj.columns()
    names = list(cols)
    lines = [",".join(names)]
    for i in range(len(traj)):
        lines.append(",".join(_fmt(cols[name][i]) for name in names))
    return "\n".join(lines) + "\n"


def report_text(report: VerificationReport) -> str:
    return "\n".join(report.to_lines()) + "\n"


def export_csv(traj: Trajectory, report: VerificationReport, path) -> tuple[Path, Path]:
    """Write ``<path>.csv`` and ``<path>.report.txt``; returns both paths.

    ``path`` may carry a ``.csv`` suffix or none.
    """
    base = Path(path)
    if base.suffix == ".csv":
        base = base.with_suffix("")
    csv_path = base.with_name(base.name + ".csv")
    rep_path = base.with_name(base.name + ".report.txt")
    try:
        base.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(trajectory_csv(traj), encoding="utf-8", newline="\n")
        rep_path.write_text(report_text(report), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write outputs under {base.parent}: {exc}") from exc
    return csv_path, rep_path
