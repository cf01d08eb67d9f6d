"""Result persistence: eigenvalue CSVs and line-oriented run reports.

The CSV codec is the interchange format for plots and regression
baselines: header ``re,im``, one row per eigenvalue at 17 significant
digits (lossless for doubles), rows sorted by (Re, Im).  Run reports are
diff-able text, one record per line as ``key=value`` pairs.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .config import render_config
from .errors import ConfigError, DomainError
from .esd import ESD
from .experiments import RunReport


def _sorted_points(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points.imag, points.real))
    return points[order]


def format_eigenvalues_csv(points) -> str:
    """CSV text for a set of eigenvalues (sorted by Re, then Im)."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.size < 1:
        raise DomainError("refusing to write an empty eigenvalue CSV")
    rows = ["re,im"]
    for z in _sorted_points(pts):
        rows.append(f"{z.real:.16e},{z.imag:.16e}")
    return "\n".join(rows) + "\n"


def write_eigenvalues_csv(e: ESD, path) -> None:
    """Write an ESD to `path` in the interchange CSV format."""
    text = format_eigenvalues_csv(e.points)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def parse_eigenvalues_csv(text: str) -> ESD:
    lines = text.strip().splitlines()
    if not lines or lines[0].strip().lower() != "re,im":
        raise ConfigError("eigenvalue CSV must start with header 're,im'", 1)
    points = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ConfigError("expected two comma-separated fields", lineno)
        try:
            points.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigError(f"malformed float in {line!r}", lineno)
    if not points:
        raise ConfigError("eigenvalue CSV contains no points", len(lines))
    return ESD.from_points(points)


def read_eigenvalues_csv(path) -> ESD:
    with open(path, "r", encoding="ascii") as fh:
        return parse_eigenvalues_csv(fh.read())


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j".replace("+-", "-")
    if v is None:
        return "nan"
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render_report(report: RunReport) -> str:
    """Deterministic line-oriented text form of a RunReport."""
    out = ["# sparsespectra run report", "format=1", f"version={report.version}", ""]
    out.append("[config]")
    out.extend(render_config(report.config).rstrip("\n").splitlines())
    out.append("")
    out.append("[records]")
    for rec in report.records:
        fields = [f"n={rec.n}", f"trial={rec.trial}"]
        for key, value in rec.values.items():
            fields.append(f"{key}={_fmt_value(value)}")
        if rec.exception is not None:
            fields.append(f"exception={rec.exception}")
        out.append("record " + " ".join(fields))
    out.append("")
    out.append("[summary]")
    for row in report.summary:
        fields = [f"{key}={_fmt_value(value)}" for key, value in row.items()]
        out.append("summary " + " ".join(fields))
    out.append("")
    out.append("[flags]")
    for flag in report.flags:
        status = "pass" if flag.passed else "FAIL"
        out.append(f"flag criterion={flag.criterion} status={status} detail={flag.detail}")
    out.append(f"exceptions={report.exceptions}")
    return "\n".join(out) + "\n"


def write_report_files(report: RunReport, out_dir, write_esds: bool = True) -> list[str]:
    """Write report.txt plus per-trial eigenvalue CSV sidecars.

    Returns the list of file paths written (report first).
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    report_path = os.path.join(out_dir, "report.txt")
    with open(report_path, "w", encoding="ascii") as fh:
        fh.write(render_report(report))
    paths.append(report_path)
    if write_esds:
        for rec in report.records:
            if not rec.esds:
                continue
            for label, points in rec.esds.items():
                suffix = f"_{label}" if label else ""
                name = f"esd_n{rec.n}_t{rec.trial}{suffix}.csv"
                path = os.path.join(out_dir, name)
                with open(path, "w", encoding="ascii") as fh:
                    fh.write(format_eigenvalues_csv(points))
                paths.append(path)
    return paths
