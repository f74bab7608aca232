"""Bracketed scalar root finding and maximisation, vectorised over numpy arrays.

Every routine accepts scalars or arrays for the bracket ends and works
element-wise, so the same code serves a single Riemann problem and a whole
row of cell interfaces.
"""

import numpy as np

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class BracketError(ValueError):
    """Raised when a bracket does not enclose a sign change."""


def bisect(fun, lo, hi, tol=1e-12, maxiter=200, check=True):
    """Find roots of ``fun`` on ``[lo, hi]`` element-wise by bisection.

    ``fun`` must be vectorised. Where ``fun(lo)`` and ``fun(hi)`` share a strict
    sign a :class:`BracketError` is raised (unless ``check`` is false, in which
    case the endpoint with the smaller residual is returned there).
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    flo = np.asarray(fun(lo), dtype=float)
    fhi = np.asarray(fun(hi), dtype=float)
    bad = (flo * fhi) > 0.0
    if np.any(bad):
        if check:
            raise BracketError(
                f"no sign change on {np.count_nonzero(bad)} bracket(s), "
                f"e.g. [{lo[bad].flat[0]}, {hi[bad].flat[0]}]")
    root_lo = flo == 0.0
    root_hi = fhi == 0.0
    for _ in range(maxiter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        fmid = np.asarray(fun(mid), dtype=float)
        left = (flo * fmid) <= 0.0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fmid)
    out = 0.5 * (lo + hi)
    out = np.where(root_lo, lo, np.where(root_hi, hi, out))
    if np.any(bad):
        out = np.where(bad, np.where(np.abs(flo) <= np.abs(fhi), lo, hi), out)
    return out[()] if out.ndim == 0 else out


def golden_max(fun, lo, hi, tol=1e-10, maxiter=200):
    """Maximiser of a unimodal ``fun`` on ``[lo, hi]`` by golden-section search.

    Endpoints are compared against the interior result so monotone functions
    return the boundary exactly.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    lo, hi = np.broadcast_arrays(lo, hi)
    a = lo.copy()
    b = hi.copy()
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1 = fun(x1)
    f2 = fun(x2)
    for _ in range(maxiter):
        if np.all(b - a <= tol):
            break
        go_right = f1 < f2
        a = np.where(go_right, x1, a)
        b = np.where(go_right, b, x2)
        new_x1 = np.where(go_right, x2, b - GOLDEN * (b - a))
        new_x2 = np.where(go_right, a + GOLDEN * (b - a), x1)
        f_new = fun(np.where(go_right, new_x2, new_x1))
        f1, f2 = np.where(go_right, f2, f_new), np.where(go_right, f_new, f1)
        x1, x2 = new_x1, new_x2
    x = 0.5 * (a + b)
    fx = fun(x)
    flo = fun(lo)
    fhi = fun(hi)
    x = np.where(fhi >= fx, hi, x)
    fx = np.maximum(fx, fhi)
    x = np.where(flo > fx, lo, x)
    return x[()] if x.ndim == 0 else x
