"""CSV snapshot files: header ``x,s,c``, floats at 17 significant digits."""

import csv
from pathlib import Path

import numpy as np


def time_tag(t):
    return f"t{float(t):g}"


def write_snapshot(path, x, s, c):
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("x,s,c\n")
        for row in zip(x, s, c):
            fh.write(",".join(f"{float(v):.17g}" for v in row) + "\n")
    return path


def read_snapshot(path):
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["x", "s", "c"]:
            raise ValueError(f"{path}: expected header x,s,c, got {','.join(header)}")
        rows = np.array([[float(v) for v in row] for row in reader], dtype=float)
    if rows.size == 0:
        rows = rows.reshape(0, 3)
    return rows[:, 0], rows[:, 1], rows[:, 2]


def write_snapshots(out_dir, prefix, grid, snapshots):
    """One CSV per ``(t, state)``, named ``<prefix>_t<time>.csv``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for t, state in snapshots:
        paths.append(write_snapshot(out_dir / f"{prefix}_{time_tag(t)}.csv",
                                    grid.centers, state.s, state.c))
    return paths
