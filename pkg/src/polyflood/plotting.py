"""Figures for solution profiles and convergence studies.

Rendering uses the non-interactive Agg backend. ``profile_script`` writes a
standalone matplotlib program that rebuilds the profile figure from the CSV
snapshots, so figures can be restyled without rerunning the solver.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "dflu": dict(color="tab:blue", lw=1.6),
    "godunov": dict(color="tab:orange", lw=1.2, ls="--"),
    "um": dict(color="tab:green", lw=1.2),
    "lf": dict(color="tab:red", lw=1.2),
    "force": dict(color="tab:purple", lw=1.2),
    "exact": dict(color="k", lw=1.0, ls=":"),
}


def plot_profiles(profiles, path, title=None):
    """Overlay ``s`` (left) and ``c`` (right) per snapshot time.

    ``profiles`` maps a label to ``{t: (x, s, c)}``; one row of axes per time.
    """
    times = sorted({t for snaps in profiles.values() for t in snaps})
    fig, axes = plt.subplots(len(times), 2, figsize=(10, 3.0 * len(times)), squeeze=False)
    for row, t in enumerate(times):
        ax_s, ax_c = axes[row]
        for label, snaps in profiles.items():
            if t not in snaps:
                continue
            x, s, c = snaps[t]
            style = STYLE.get(label, {})
            ax_s.plot(x, s, label=label, **style)
            ax_c.plot(x, c, label=label, **style)
        ax_s.set_ylabel("s")
        ax_c.set_ylabel("c")
        ax_s.set_title(f"t = {t:g}", fontsize=10)
        ax_c.set_title(f"t = {t:g}", fontsize=10)
    for ax in axes[-1]:
        ax.set_xlabel("x")
    axes[0][0].legend(fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_convergence(reports, path):
    fig, (ax_s, ax_c) = plt.subplots(1, 2, figsize=(10, 4))
    for rep in reports:
        hs = [r.h for r in rep.rows]
        style = STYLE.get(rep.scheme, {})
        ax_s.loglog(hs, rep.errors_s, marker="o", label=rep.scheme, **style)
        ax_c.loglog(hs, rep.errors_c, marker="o", label=rep.scheme, **style)
    ax_s.set_ylabel("L1 error in s")
    ax_c.set_ylabel("L1 error in c")
    for ax in (ax_s, ax_c):
        ax.set_xlabel("h")
        ax.grid(True, which="both", alpha=0.3)
    ax_s.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


_SCRIPT = '''"""Overlay saturation and concentration profiles from CSV snapshots."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
FILES = {files!r}


def load(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return ([float(r["x"]) for r in rows], [float(r["s"]) for r in rows],
            [float(r["c"]) for r in rows])


times = sorted({{t for per_time in FILES.values() for t in per_time}})
fig, axes = plt.subplots(len(times), 2, figsize=(10, 3 * len(times)), squeeze=False)
for row, t in enumerate(times):
    for label, per_time in FILES.items():
        if t in per_time:
            x, s, c = load(per_time[t])
            axes[row][0].plot(x, s, label=label)
            axes[row][1].plot(x, c, label=label)
    axes[row][0].set_ylabel("s")
    axes[row][1].set_ylabel("c")
    axes[row][0].set_title(f"t = {{t:g}}")
    axes[row][1].set_title(f"t = {{t:g}}")
axes[0][0].legend()
fig.tight_layout()
fig.savefig(HERE / {png!r}, dpi=120)
plt.show()
'''


def profile_script(files, path, png_name):
    """Write the standalone plot program; ``files`` maps label -> {t: csv name}."""
    path = Path(path)
    path.write_text(_SCRIPT.format(files=files, png=png_name))
    return path
