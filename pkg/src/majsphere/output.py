"""Trajectory and summary serialization (CSV / JSON).

Column order is fixed and versioned; floats are written with 12 significant
digits so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import TrajectoryRecord
from .mixedrep import LABELS, MixedTrajectory

COLUMNS_VERSION = 1

BASE_COLUMNS = [
    "time_ns",
    "p0",
    "p1",
    "p2",
    "theta_mix",
    "eta",
    "concurrence",
    "jx",
    "jy",
    "jz",
    "fid_dark",
    "infid_bright",
    "star1_x",
    "star1_y",
    "star1_z",
    "star2_x",
    "star2_y",
    "star2_z",
]

MIXED_COLUMNS = [f"lambda_{lab}" for lab in LABELS] + [
    f"star{s}_{lab}_{axis}" for lab in LABELS for s in (1, 2) for axis in "xyz"
]


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _base_row(record: TrajectoryRecord, mixed: MixedTrajectory | None, i: int) -> list[float]:
    t_ns = record.times[i] * 1e9
    if record.stars is not None:
        eta = record.eta[i]
        conc = record.concurrence[i]
        star_block = record.stars[i]
    elif mixed is not None:
        # open-system runs report the dark-labeled component's constellation
        dark_part = mixed.stars[i, 0]
        dot = float(np.clip(np.dot(dark_part[0], dark_part[1]), -1.0, 1.0))
        eta = float(np.arccos(dot))
        conc = float(np.sin(0.5 * eta) ** 2 / (1.0 + np.cos(0.5 * eta) ** 2))
        star_block = dark_part
    else:
        raise ValueError("open-system records need the mixed trajectory for star columns")
    row = [
        t_ns,
        record.populations[i, 0],
        record.populations[i, 1],
        record.populations[i, 2],
        record.theta[i],
        eta,
        conc,
        record.jvec[i, 0],
        record.jvec[i, 1],
        record.jvec[i, 2],
        record.fid_dark[i],
        record.infid_bright[i],
    ]
    row.extend(star_block[0])
    row.extend(star_block[1])
    return row


def trajectory_table(
    record: TrajectoryRecord, mixed: MixedTrajectory | None = None
) -> tuple[list[str], list[list[float]]]:
    """(header, rows) for one record; mixed columns appended for open runs."""
    header = list(BASE_COLUMNS)
    if mixed is not None:
        header += MIXED_COLUMNS
    rows = []
    for i in range(len(record.times)):
        row = _base_row(record, mixed, i)
        if mixed is not None:
            row.extend(mixed.lambdas[i])
            for k in range(3):
                row.extend(mixed.stars[i, k, 0])
                row.extend(mixed.stars[i, k, 1])
        rows.append(row)
    return header, rows


def write_table_csv(path: str | Path, header: list[str], rows: list[list[float]]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_table_json(path: str | Path, header: list[str], rows: list[list[float]]) -> None:
    payload = {
        "columns_version": COLUMNS_VERSION,
        "columns": header,
        "rows": [[float(fmt(v)) for v in row] for row in rows],
    }
    write_json(path, payload)


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=False) + "\n", encoding="utf-8"
    )


def summary_dict(
    record: TrajectoryRecord, mixed: MixedTrajectory | None = None
) -> dict:
    """Headline numbers of one run (final values and grid extremes)."""
    jnorm = np.linalg.norm(record.jvec, axis=1)
    out = {
        "columns_version": COLUMNS_VERSION,
        "kind": record.kind,
        "mode": record.cfg.mode,
        "n_steps": record.cfg.n_steps,
        "p0_final": float(fmt(record.populations[-1, 0])),
        "p1_final": float(fmt(record.populations[-1, 1])),
        "p2_final": float(fmt(record.populations[-1, 2])),
        "fid_dark_final": float(fmt(record.fid_dark[-1])),
        "max_p1": float(fmt(record.populations[:, 1].max())),
        "min_j_norm": float(fmt(jnorm.min())),
        "max_drift": float(fmt(record.drift.max())),
        "clipped_cd_samples": record.clipped_cd_samples,
    }
    if record.concurrence is not None:
        out["max_concurrence"] = float(fmt(record.concurrence.max()))
    if mixed is not None:
        out["purity_final"] = float(fmt(mixed.purity[-1]))
        out["lambdas_final"] = [float(fmt(v)) for v in mixed.lambdas[-1]]
    return out
