"""Numerical interface fluxes ``(F, G)`` for the conservative scheme.

``F`` approximates ``f(s, c)`` and ``G`` approximates ``c f(s, c)`` at a cell
interface, given the left and right cell states. All functions accept
:class:`~polyflood.riemann.State` tuples whose fields may be numpy arrays.
"""

import enum
from typing import NamedTuple

import numpy as np

from .model import recover_concentration
from .riemann import godunov_interface_flux


class SchemeKind(str, enum.Enum):
    DFLU = "dflu"
    GODUNOV = "godunov"
    UPSTREAM_MOBILITY = "um"
    LAX_FRIEDRICHS = "lf"
    FORCE = "force"


class InterfaceFlux(NamedTuple):
    F: np.ndarray
    G: np.ndarray


def _unpack(left, right):
    s_l, c_l = (np.asarray(v, dtype=float) for v in left)
    s_r, c_r = (np.asarray(v, dtype=float) for v in right)
    return s_l, c_l, s_r, c_r


def dflu_flux(model, left, right):
    """``F = min(f(min(s_L, theta_L), c_L), f(max(s_R, theta_R), c_R))``, ``G = c_L F``."""
    s_l, c_l, s_r, c_r = _unpack(left, right)
    F = np.minimum(model.flux(np.minimum(s_l, model.theta(c_l)), c_l),
                   model.flux(np.maximum(s_r, model.theta(c_r)), c_r))
    return InterfaceFlux(F, c_l * F)


def godunov_flux(model, left, right):
    s_l, c_l, s_r, c_r = _unpack(left, right)
    F = np.asarray(godunov_interface_flux(model, (s_l, c_l), (s_r, c_r)), dtype=float)
    return InterfaceFlux(F, c_l * F)


def upstream_mobility_flux(model, left, right, diagnostics=None):
    """Phase-upwinded mobilities.

    Each phase mobility is taken from the side its phase flows from; the four
    left/right combinations are tested and the self-consistent one kept.
    Where none is consistent the least-violating combination is used and
    ``diagnostics["um_inconsistent"]`` counts the interfaces.
    """
    if not hasattr(model, "mobility_1"):
        raise TypeError("upstream mobility requires two-phase model")
    s_l, c_l, s_r, c_r = _unpack(left, right)
    q = model.q
    g12 = model.g1 - model.g2
    m1 = (model.mobility_1(s_l, c_l), model.mobility_1(s_r, c_r))
    m2 = (model.mobility_2(s_l, c_l), model.mobility_2(s_r, c_r))

    best_F = None
    best_violation = None
    for i in (0, 1):
        for j in (0, 1):
            l1, l2 = m1[i], m2[j]
            d1 = q + g12 * l2
            d2 = q - g12 * l1
            # side 0 (left) is consistent when the driving term is positive
            v1 = np.where(d1 > 0.0, 0.0 if i == 0 else d1, 0.0 if i == 1 else -d1)
            v2 = np.where(d2 > 0.0, 0.0 if j == 0 else d2, 0.0 if j == 1 else -d2)
            violation = np.abs(v1) + np.abs(v2)
            tot = l1 + l2
            F = np.where(tot > 0.0, l1 / np.where(tot > 0.0, tot, 1.0) * d1, 0.0)
            if best_F is None:
                best_F, best_violation = F, violation
            else:
                better = violation < best_violation
                best_F = np.where(better, F, best_F)
                best_violation = np.where(better, violation, best_violation)
    if diagnostics is not None:
        diagnostics["um_inconsistent"] = diagnostics.get("um_inconsistent", 0) + int(
            np.count_nonzero(best_violation > 0.0))
    return InterfaceFlux(best_F, c_l * best_F)


def lax_friedrichs_flux(model, left, right, lam):
    s_l, c_l, s_r, c_r = _unpack(left, right)
    f_l = model.flux(s_l, c_l)
    f_r = model.flux(s_r, c_r)
    w_l = c_l * s_l + model.a(c_l)
    w_r = c_r * s_r + model.a(c_r)
    F = 0.5 * (f_r + f_l - (s_r - s_l) / lam)
    G = 0.5 * (c_r * f_r + c_l * f_l - (w_r - w_l) / lam)
    return InterfaceFlux(F, G)


def force_flux(model, left, right, lam, diagnostics=None):
    """Average of the Lax-Friedrichs flux and the two-step Lax-Wendroff flux.

    The half-step saturation is clamped to ``[0, s_max]`` and the half-step
    concentration to ``[0, c_max]``; clamped interfaces are counted in
    ``diagnostics["force_clamped"]``.
    """
    s_l, c_l, s_r, c_r = _unpack(left, right)
    f_l = model.flux(s_l, c_l)
    f_r = model.flux(s_r, c_r)
    w_l = c_l * s_l + model.a(c_l)
    w_r = c_r * s_r + model.a(c_r)
    s_half = 0.5 * (s_l + s_r) - 0.5 * lam * (f_r - f_l)
    w_half = 0.5 * (w_l + w_r) - 0.5 * lam * (c_r * f_r - c_l * f_l)
    s_clamped = np.clip(s_half, 0.0, model.s_max)
    c_half = recover_concentration(model, s_clamped, w_half)
    c_clamped = np.clip(c_half, 0.0, model.c_max)
    if diagnostics is not None:
        flagged = (s_clamped != s_half) | (c_clamped != c_half)
        diagnostics["force_clamped"] = diagnostics.get("force_clamped", 0) + int(
            np.count_nonzero(flagged))
    f_half = model.flux(s_clamped, c_clamped)
    F = 0.25 * (f_r + f_l + 2.0 * f_half - (s_r - s_l) / lam)
    G = 0.25 * (c_r * f_r + c_l * f_l + 2.0 * c_clamped * f_half - (w_r - w_l) / lam)
    return InterfaceFlux(F, G)


def numerical_flux(kind, model, left, right, lam, diagnostics=None):
    """Dispatch on :class:`SchemeKind` (or its string value)."""
    kind = SchemeKind(kind)
    if kind is SchemeKind.DFLU:
        return dflu_flux(model, left, right)
    if kind is SchemeKind.GODUNOV:
        return godunov_flux(model, left, right)
    if kind is SchemeKind.UPSTREAM_MOBILITY:
        return upstream_mobility_flux(model, left, right, diagnostics)
    if kind is SchemeKind.LAX_FRIEDRICHS:
        return lax_friedrichs_flux(model, left, right, lam)
    return force_flux(model, left, right, lam, diagnostics)
