"""Error norms, convergence rates and conservation diagnostics."""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .riemann import sample


def l1_error(state, grid, fan, x0, t=None):
    """``sum_i h |u_i - u_exact(x_i, t)|`` for ``u = s`` and ``u = c``.

    The exact solution is the Riemann fan centred at ``x0``, point-sampled at
    the cell centres. At ``t = 0`` the initial jump is sampled directly.
    """
    t = state.t if t is None else t
    x = grid.centers
    if t > 0.0:
        exact = [sample(fan, (xi - x0) / t) for xi in x]
    else:
        exact = [fan.left_state if xi < x0 else fan.right_state for xi in x]
    s_ex = np.array([e.s for e in exact])
    c_ex = np.array([e.c for e in exact])
    h = grid.h
    return float(h * np.abs(state.s - s_ex).sum()), float(h * np.abs(state.c - c_ex).sum())


def convergence_rates(errors):
    """``log2(e_{k-1} / e_k)`` for successive halvings; None where undefined."""
    rates = []
    for prev, cur in zip(errors[:-1], errors[1:]):
        if prev > 0.0 and cur > 0.0:
            rates.append(math.log(prev / cur) / math.log(2.0))
        else:
            rates.append(None)
    return rates


def total_variation(values):
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("total variation of an empty array")
    return float(np.abs(np.diff(values)).sum())


def mass_totals(state, model, h):
    """``(sum s_i h, sum (c_i s_i + a(c_i)) h)``."""
    s = np.asarray(state.s, dtype=float)
    c = np.asarray(state.c, dtype=float)
    return float(s.sum() * h), float((c * s + model.a(c)).sum() * h)


def restrict(fine, factor):
    """Average consecutive blocks of ``factor`` fine cells onto a coarse grid."""
    fine = np.asarray(fine, dtype=float)
    if fine.size % factor:
        raise ValueError("fine grid size is not a multiple of the coarsening factor")
    return fine.reshape(-1, factor).mean(axis=1)


@dataclass
class ErrorRow:
    h: float
    error_s: float
    error_c: float
    rate_s: float = None
    rate_c: float = None


@dataclass
class ErrorReport:
    scheme: str
    rows: list = field(default_factory=list)

    @classmethod
    def from_errors(cls, scheme, hs, errors_s, errors_c):
        rs = [None] + convergence_rates(errors_s)
        rc = [None] + convergence_rates(errors_c)
        rows = [ErrorRow(h, es, ec, a, b)
                for h, es, ec, a, b in zip(hs, errors_s, errors_c, rs, rc)]
        return cls(scheme, rows)

    @property
    def errors_s(self):
        return [r.error_s for r in self.rows]

    @property
    def errors_c(self):
        return [r.error_c for r in self.rows]


def _h_label(h):
    n = 1.0 / h
    return f"1/{int(round(n))}" if abs(n - round(n)) < 1e-9 else f"{h:g}"


def _rate(r):
    return "" if r is None else f"{r:.4f}"


def render_table(reports):
    """Plain-text tables (one for ``s``, one for ``c``) with a column pair per scheme."""
    out = []
    for var in ("s", "c"):
        header = ["h"]
        for rep in reports:
            header += [f"{rep.scheme} |{var}-{var}_h|_L1", "rate"]
        lines = [header]
        for k, row in enumerate(reports[0].rows):
            line = [_h_label(row.h)]
            for rep in reports:
                r = rep.rows[k]
                err = r.error_s if var == "s" else r.error_c
                rate = r.rate_s if var == "s" else r.rate_c
                line += [f"{err:.5g}", _rate(rate)]
            lines.append(line)
        widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
        for line in lines:
            out.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
        out.append("")
    return "\n".join(out)


def report_csv(reports):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scheme", "h", "error_s", "rate_s", "error_c", "rate_c"])
    for rep in reports:
        for r in rep.rows:
            writer.writerow([rep.scheme, repr(r.h), repr(r.error_s),
                             "" if r.rate_s is None else repr(r.rate_s),
                             repr(r.error_c), "" if r.rate_c is None else repr(r.rate_c)])
    return buf.getvalue()


def front_position(x, s, s_ahead, tol=1e-9, min_run=2):
    """Leading edge of a saturation plume advancing into the constant state ``s_ahead``.

    Returns the centre of the first cell of the last run of at least
    ``min_run`` cells that still hold ``s_ahead`` (within ``tol``), i.e. where
    the undisturbed region begins. Cells ahead of a front are untouched to
    round-off, so ``tol`` can be tight; a pool collecting against a closed far
    wall lies beyond that run and does not count. Returns ``x[-1]`` when no
    undisturbed run remains.
    """
    x = np.asarray(x, dtype=float)
    untouched = np.abs(np.asarray(s, dtype=float) - s_ahead) <= tol
    end = len(untouched)
    while end > 0:
        while end > 0 and not untouched[end - 1]:
            end -= 1
        start = end
        while start > 0 and untouched[start - 1]:
            start -= 1
        if end - start >= min_run:
            return float(x[start])
        end = start
    return float(x[-1])
