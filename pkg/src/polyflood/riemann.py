"""Exact self-similar Riemann solutions of the polymer-flooding system.

A solution consists of s-waves along ``f(., c_L)``, one concentration
contact, and s-waves along ``f(., c_R)``. The contact speed is the slope of
a line through the pivot ``(-abar, 0)``, where ``abar`` is the secant slope of
the adsorption isotherm between ``c_L`` and ``c_R``. Writing
``phi(s) = f(s, c) / (s + abar)`` on each curve, the contact speed is

    sigma = min(phi_L(min(s_L, s*_L)), phi_R(max(s_R, s*_R)))

with ``s*`` the maximiser of ``phi``. When the left term is the minimum the
contact leaves from ``min(s_L, s*_L)`` (cases 1a/2a); otherwise it arrives at
``max(s_R, s*_R)`` (cases 1b/2b). The same construction covers ``c_L < c_R``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .model import DomainError, ModelError, _check, s_star as _s_star
from .roots import bisect


class State(NamedTuple):
    s: float
    c: float


@dataclass(frozen=True)
class Wave:
    kind: str  # "s_shock", "s_rarefaction" or "c_contact"
    left_speed: float
    right_speed: float
    left_state: State
    right_state: State

    @property
    def speed(self):
        return self.left_speed


@dataclass(frozen=True)
class RiemannFan:
    model: object
    left_state: State
    right_state: State
    waves: tuple = ()
    constants: dict = field(default_factory=dict)

    @property
    def speeds(self):
        out = []
        for w in self.waves:
            out.append(w.left_speed)
            if w.kind == "s_rarefaction":
                out.append(w.right_speed)
        return out


def _phi(model, s, c, abar):
    return model.flux(s, c) / (s + abar)


def _upper_root(model, sigma, c, abar, s_lo):
    """Root of ``f(s, c) = sigma (s + abar)`` on ``[s_lo, s_max]`` (decreasing side)."""
    c = np.asarray(c, dtype=float)

    def h(s):
        return model.flux(s, c) - sigma * (s + abar)

    return bisect(h, s_lo, np.full_like(np.asarray(s_lo, dtype=float), model.s_max),
                  tol=1e-13, check=False)


def _lower_root(model, sigma, c, abar, s_hi):
    """Root of ``f(s, c) = sigma (s + abar)`` on ``[0, s_hi]`` (increasing side)."""
    c = np.asarray(c, dtype=float)

    def h(s):
        return model.flux(s, c) - sigma * (s + abar)

    return bisect(h, np.zeros_like(np.asarray(s_hi, dtype=float)), s_hi,
                  tol=1e-13, check=False)


def contact_structure(model, s_l, c_l, s_r, c_r):
    """Vectorised ingredients of the contact wave.

    Returns a dict with ``abar``, ``theta_l``, ``theta_r``, ``s_star_l``,
    ``s_star_r``, the two candidate speeds ``demand`` (left) and ``supply``
    (right), and the boolean ``right_limited`` (``supply <= demand``).
    """
    s_l = np.asarray(s_l, dtype=float)
    c_l = np.asarray(c_l, dtype=float)
    s_r = np.asarray(s_r, dtype=float)
    c_r = np.asarray(c_r, dtype=float)
    abar = model.secant_a(c_l, c_r)
    ss_l = _s_star(model, c_l, c_r)
    ss_r = _s_star(model, c_r, c_l)
    demand = _phi(model, np.minimum(s_l, ss_l), c_l, abar)
    supply = _phi(model, np.maximum(s_r, ss_r), c_r, abar)
    return {
        "abar": abar,
        "theta_l": model.theta(c_l),
        "theta_r": model.theta(c_r),
        "s_star_l": ss_l,
        "s_star_r": ss_r,
        "demand": demand,
        "supply": supply,
        "right_limited": supply <= demand,
    }


def coincidence_s_star(model, c_l, c_r):
    """Saturation on ``f(., c_l)`` where ``f_s = f / (s + abar)``; lies left of the argmax."""
    _check(model, c=c_l)
    _check(model, c=c_r)
    abar = float(model.secant_a(c_l, c_r))
    theta = float(model.theta(c_l))
    lo = 1e-9 * model.s_max
    g_lo = model.flux_s(lo, c_l) * (lo + abar) - model.flux(lo, c_l)
    g_hi = model.flux_s(theta, c_l) * (theta + abar) - model.flux(theta, c_l)
    if not (g_lo > 0.0 and g_hi < 0.0):
        raise ModelError(f"cannot bracket s* on (0, {theta}) for c_L={c_l}, c_R={c_r}")
    return float(_s_star(model, c_l, c_r))


def secant_intersections(model, sigma, c, c_ref):
    """Intersections of the line ``sigma (s + abar)`` with ``f(., c)``.

    ``abar`` is the adsorption secant between ``c`` and ``c_ref``. Returns
    ``(lower, upper)``, split at the tangent point of the pivot line; each is
    None when the line passes above the curve.
    """
    if sigma < 0.0:
        raise DomainError(f"contact speed must be non-negative, got {sigma}")
    _check(model, c=c)
    _check(model, c=c_ref)
    abar = float(model.secant_a(c, c_ref))
    ss = float(_s_star(model, c, c_ref))
    if sigma == 0.0:
        return 0.0, float(model.s_max)
    peak = float(_phi(model, ss, c, abar))
    if sigma > peak:
        return None, None
    lower = float(_lower_root(model, sigma, c, abar, ss))
    upper = float(_upper_root(model, sigma, c, abar, ss))
    if model.flux(model.s_max, c) - sigma * (model.s_max + abar) > 0.0:
        upper = None
    return lower, upper


def scalar_godunov(model, s_l, s_r, c, theta=None):
    """Classical Godunov flux of ``s_t + f(s, c)_x = 0`` for unimodal ``f(., c)``."""
    s_l = np.asarray(s_l, dtype=float)
    s_r = np.asarray(s_r, dtype=float)
    if theta is None:
        theta = model.theta(c)
    up = np.minimum(model.flux(s_l, c), model.flux(s_r, c))
    down = model.flux(np.clip(theta, np.minimum(s_l, s_r), np.maximum(s_l, s_r)), c)
    out = np.where(s_l <= s_r, up, down)
    return out[()] if out.ndim == 0 else out


def _lower_hull(x, y):
    hull = []
    for i in range(len(x)):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[i] - y[o]) - (y[a] - y[o]) * (x[i] - x[o])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def _tangent(fun, dfun, anchor, lo, hi, guess):
    """Point ``v`` in ``[lo, hi]`` where the chord from ``anchor`` is tangent to the curve."""
    def h(v):
        return dfun(v) * (v - anchor) - (fun(v) - fun(anchor))

    if h(lo) * h(hi) > 0.0:
        return guess
    return float(bisect(h, lo, hi, tol=1e-13))


def scalar_s_wave(model, s_l, s_r, c, n_grid=400):
    """Entropy waves of ``s_t + f(s, c)_x = 0`` joining ``s_l`` to ``s_r``.

    Built from the lower convex (``s_l < s_r``) or upper concave (``s_l > s_r``)
    envelope of ``f(., c)``; tangency points of shocks are refined by bisection.
    """
    s_l = float(s_l)
    s_r = float(s_r)
    c = float(c)
    if s_l == s_r:
        return []
    lo, hi = min(s_l, s_r), max(s_l, s_r)
    sign = 1.0 if s_l < s_r else -1.0

    def fun(s):
        return sign * float(model.flux(s, c))

    def dfun(s):
        return sign * float(model.flux_s(s, c))

    xs = np.linspace(lo, hi, n_grid + 1)
    ys = sign * np.asarray(model.flux(xs, c), dtype=float)
    hull = _lower_hull(xs, ys)

    # breakpoints with segment kinds, consecutive on-curve pieces merged
    points = [xs[hull[0]]]
    kinds = []
    idx = [hull[0]]
    for a, b in zip(hull[:-1], hull[1:]):
        kind = "shock" if b - a > 1 else "fan"
        if kinds and kind == "fan" and kinds[-1] == "fan":
            points[-1] = xs[b]
            idx[-1] = b
        else:
            kinds.append(kind)
            points.append(xs[b])
            idx.append(b)
    points[0], points[-1] = lo, hi

    for _ in range(4):
        for k, kind in enumerate(kinds):
            if kind != "shock":
                continue
            u, v = points[k], points[k + 1]
            if k + 1 < len(kinds):
                j = idx[k + 1]
                points[k + 1] = _tangent(fun, dfun, u, max(xs[max(j - 1, 0)], u),
                                         xs[min(j + 1, n_grid)], v)
            if k > 0:
                j = idx[k]
                points[k] = _tangent(fun, dfun, points[k + 1], xs[max(j - 1, 0)],
                                     min(xs[min(j + 1, n_grid)], points[k + 1]), u)

    segments = [(points[k], points[k + 1], kind) for k, kind in enumerate(kinds)
                if points[k + 1] > points[k]]
    if sign < 0.0:
        segments = [(b, a, kind) for a, b, kind in reversed(segments)]
    waves = []
    for a, b, kind in segments:
        fa, fb = float(model.flux(a, c)), float(model.flux(b, c))
        if kind == "shock":
            speed = (fb - fa) / (b - a)
            waves.append(Wave("s_shock", speed, speed, State(a, c), State(b, c)))
        else:
            waves.append(Wave("s_rarefaction", float(model.flux_s(a, c)),
                              float(model.flux_s(b, c)), State(a, c), State(b, c)))
    return waves


def solve_riemann(model, left, right):
    """Exact Riemann fan between two states."""
    left = State(float(left[0]), float(left[1]))
    right = State(float(right[0]), float(right[1]))
    _check(model, left.s, left.c)
    _check(model, right.s, right.c)
    if left.c == right.c:
        waves = scalar_s_wave(model, left.s, right.s, left.c)
        return RiemannFan(model, left, right, tuple(waves), {"case": "scalar"})

    st = contact_structure(model, left.s, left.c, right.s, right.c)
    abar = float(st["abar"])
    ss_l = float(st["s_star_l"])
    ss_r = float(st["s_star_r"])
    demand = float(st["demand"])
    supply = float(st["supply"])
    case_1 = left.s < ss_l
    consts = {"abar": abar, "s_star": ss_l, "s_star_right": ss_r,
              "mirrored": left.c < right.c}
    if bool(st["right_limited"]):
        sigma = supply
        q = max(right.s, ss_r)
        p = float(_upper_root(model, sigma, left.c, abar, ss_l))
        consts["case"] = "1b" if case_1 else "2b"
        consts["s_bar"] = p
    else:
        sigma = demand
        p = min(left.s, ss_l)
        q = float(_lower_root(model, sigma, right.c, abar, ss_r))
        consts["case"] = "1a" if case_1 else "2a"
        consts["s_bar"] = q
    consts["sigma_c"] = sigma
    # thresholds on s_R that separate the a/b sub-cases
    threshold = float(_phi(model, min(left.s, ss_l), left.c, abar))
    if threshold <= float(_phi(model, ss_r, right.c, abar)):
        bound = float(_upper_root(model, threshold, right.c, abar, ss_r))
        consts["B" if case_1 else "A"] = bound

    waves = scalar_s_wave(model, left.s, p, left.c)
    waves.append(Wave("c_contact", sigma, sigma, State(p, left.c), State(q, right.c)))
    waves.extend(scalar_s_wave(model, q, right.s, right.c))
    return RiemannFan(model, left, right, tuple(waves), consts)


def _invert_speed(model, w, xi):
    a, b = w.left_state.s, w.right_state.s
    c = w.left_state.c
    lo, hi = min(a, b), max(a, b)
    return float(bisect(lambda s: model.flux_s(s, c) - xi, lo, hi, tol=1e-13, check=False))


def sample(fan, xi):
    """State on the ray ``x / t = xi``; a discontinuity moving exactly at ``xi`` yields its right state."""
    state = fan.left_state
    for w in fan.waves:
        if xi < w.left_speed:
            return state
        if w.kind == "s_rarefaction" and xi < w.right_speed:
            return State(_invert_speed(fan.model, w, xi), w.left_state.c)
        state = w.right_state
    return state


def godunov_interface_flux(model, left, right):
    """Flux ``f`` of the exact Riemann solution at ``x/t = 0`` (vectorised).

    Left-limited contacts give ``f(min(s_L, theta_L), c_L)``; right-limited
    ones give the scalar Godunov flux on ``f(., c_L)`` between ``s_L`` and the
    upper intersection ``s_bar`` of the contact line with that curve.
    """
    s_l = np.asarray(left[0], dtype=float)
    c_l = np.asarray(left[1], dtype=float)
    s_r = np.asarray(right[0], dtype=float)
    c_r = np.asarray(right[1], dtype=float)
    s_l, c_l, s_r, c_r = np.broadcast_arrays(s_l, c_l, s_r, c_r)
    theta_l = model.theta(c_l)
    out = scalar_godunov(model, s_l, s_r, c_l, theta_l)
    out = np.array(out, dtype=float, ndmin=1)
    jump = np.atleast_1d(c_l != c_r)
    if np.any(jump):
        sl, cl = np.atleast_1d(s_l)[jump], np.atleast_1d(c_l)[jump]
        sr, cr = np.atleast_1d(s_r)[jump], np.atleast_1d(c_r)[jump]
        st = contact_structure(model, sl, cl, sr, cr)
        th = st["theta_l"]
        left_limited = model.flux(np.minimum(sl, th), cl)
        s_bar = _upper_root(model, st["supply"], cl, st["abar"], st["s_star_l"])
        right_limited = scalar_godunov(model, sl, s_bar, cl, th)
        out[jump] = np.where(st["right_limited"], right_limited, left_limited)
    return out[0] if np.ndim(s_l) == 0 else out.reshape(np.shape(s_l))
