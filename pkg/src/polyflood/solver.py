"""Explicit conservative finite-volume integration on a uniform 1D grid.

    s_i^{n+1} = s_i^n - lam (F_{i+1/2} - F_{i-1/2})
    w_i^{n+1} = w_i^n - lam (G_{i+1/2} - G_{i-1/2}),   w = c s + a(c)

with ``lam = dt / h``; the new concentration is recovered from ``w`` and the
new saturation.
"""

import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .fluxes import SchemeKind, numerical_flux
from .model import cfl_bound, recover_concentration
from .riemann import State

log = logging.getLogger(__name__)

S_TOL = 1e-12
C_TOL = 1e-10


class SolverError(RuntimeError):
    """A step failed; ``time`` and ``cell`` locate the failure."""

    def __init__(self, message, time=None, cell=None):
        super().__init__(message)
        self.time = time
        self.cell = cell


class NumericalBlowup(SolverError):
    pass


class DegenerateCell(ValueError):
    def __init__(self, message, cells):
        super().__init__(message)
        self.cells = cells


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells <= 0 or not self.x_max > self.x_min:
            raise ValueError("grid needs n_cells > 0 and x_max > x_min")

    @property
    def h(self):
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self):
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.h

    @property
    def interfaces(self):
        return self.x_min + np.arange(self.n_cells + 1) * self.h

    @classmethod
    def from_h(cls, x_min, x_max, h):
        n = int(round((x_max - x_min) / h))
        if n <= 0 or abs(n * h - (x_max - x_min)) > 1e-9 * (x_max - x_min):
            raise ValueError(f"h={h} does not divide [{x_min}, {x_max}]")
        return cls(x_min, x_max, n)


@dataclass
class SolverState:
    s: np.ndarray
    c: np.ndarray
    t: float = 0.0

    def copy(self):
        return SolverState(self.s.copy(), self.c.copy(), self.t)


@dataclass(frozen=True)
class Dirichlet:
    """Ghost cells holding fixed states on both ends."""

    left: State
    right: State


@dataclass(frozen=True)
class ClosedZeroFlux:
    """``F = G = 0`` at both domain ends."""


@dataclass(frozen=True)
class PiecewiseConstant:
    """Initial data: ``s[k], c[k]`` between consecutive ``breaks`` (extended to the domain ends)."""

    breaks: Sequence[float]
    s: Sequence[float]
    c: Sequence[float]

    def __post_init__(self):
        if len(self.s) != len(self.breaks) + 1 or len(self.c) != len(self.s):
            raise ValueError("need one more s/c value than break points")

    def __call__(self, x):
        k = np.searchsorted(np.asarray(self.breaks, dtype=float), x, side="right")
        return np.asarray(self.s, dtype=float)[k], np.asarray(self.c, dtype=float)[k]


@dataclass
class RunConfig:
    model: object
    scheme: SchemeKind
    grid: Grid1D
    lam: float
    t_end: float
    boundary: object
    initial: PiecewiseConstant
    snapshot_times: Sequence[float] = ()
    diagnostics: bool = False
    check_cfl: bool = True

    def __post_init__(self):
        self.scheme = SchemeKind(self.scheme)
        if self.lam <= 0.0:
            raise ValueError("lambda = dt/h must be positive")
        if self.scheme is SchemeKind.UPSTREAM_MOBILITY and not hasattr(self.model, "mobility_1"):
            raise TypeError("upstream mobility requires two-phase model")

    @property
    def dt(self):
        return self.lam * self.grid.h

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass
class StepInfo:
    """Per-step record used for balance checks and diagnostics."""

    t: float
    dt: float
    F_in: float
    F_out: float
    G_in: float
    G_out: float
    extra: dict = field(default_factory=dict)


def initial_state(config):
    s, c = config.initial(config.grid.centers)
    return SolverState(s.astype(float), c.astype(float), 0.0)


def solve_c_update(s_new, rhs, model, tol=C_TOL):
    """Concentration with ``c s_new + a(c) = rhs``.

    ``rhs`` must lie in ``[a(0), s_new c_max + a(c_max)]``; violations up to
    ``tol`` are clamped, larger ones raise :class:`DegenerateCell`.
    """
    s_new = np.asarray(s_new, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    lo = model.a(0.0) + 0.0 * s_new
    hi = s_new * model.c_max + model.a(model.c_max)
    bad = (rhs < lo - tol) | (rhs > hi + tol) | ~np.isfinite(rhs)
    if np.any(bad):
        cells = np.flatnonzero(np.atleast_1d(bad))
        raise DegenerateCell(f"conserved polymer value outside the admissible range in "
                             f"{cells.size} cell(s)", cells)
    c = recover_concentration(model, s_new, np.clip(rhs, lo, hi))
    return np.clip(c, 0.0, model.c_max)


def interface_fluxes(state, config, dt=None, diagnostics=None):
    """``(F, G)`` at all ``n_cells + 1`` interfaces."""
    lam = config.lam if dt is None else dt / config.grid.h
    s, c = state.s, state.c
    bc = config.boundary
    if isinstance(bc, Dirichlet):
        s_ext = np.concatenate(([bc.left[0]], s, [bc.right[0]]))
        c_ext = np.concatenate(([bc.left[1]], c, [bc.right[1]]))
        flux = numerical_flux(config.scheme, config.model, State(s_ext[:-1], c_ext[:-1]),
                              State(s_ext[1:], c_ext[1:]), lam, diagnostics)
        F = np.asarray(flux.F, dtype=float)
        G = np.asarray(flux.G, dtype=float)
    elif isinstance(bc, ClosedZeroFlux):
        F = np.zeros(s.size + 1)
        G = np.zeros(s.size + 1)
        if s.size > 1:
            flux = numerical_flux(config.scheme, config.model, State(s[:-1], c[:-1]),
                                  State(s[1:], c[1:]), lam, diagnostics)
            F[1:-1] = flux.F
            G[1:-1] = flux.G
    else:
        raise TypeError(f"unknown boundary condition {bc!r}")
    return F, G


def step(state, config, dt=None, info=None):
    """Advance one time step (of ``config.dt`` unless ``dt`` is given)."""
    model = config.model
    dt = config.dt if dt is None else dt
    lam = dt / config.grid.h
    extra = {}
    F, G = interface_fluxes(state, config, dt, extra)
    if not (np.all(np.isfinite(F)) and np.all(np.isfinite(G))):
        cell = int(np.flatnonzero(~(np.isfinite(F) & np.isfinite(G)))[0])
        raise NumericalBlowup(f"non-finite flux at interface {cell} (t={state.t})",
                              state.t, cell)
    s_new = state.s - lam * (F[1:] - F[:-1])
    low = s_new < -S_TOL
    high = s_new > model.s_max + S_TOL
    if np.any(low | high):
        cell = int(np.flatnonzero(low | high)[0])
        raise SolverError(f"saturation {s_new[cell]!r} left [0, {model.s_max}] in cell {cell} "
                          f"at t={state.t}", state.t, cell)
    s_new = np.clip(s_new, 0.0, model.s_max)
    w_new = state.c * state.s + model.a(state.c) - lam * (G[1:] - G[:-1])
    try:
        c_new = solve_c_update(s_new, w_new, model)
    except DegenerateCell as exc:
        raise SolverError(f"concentration recovery failed in cell {int(exc.cells[0])} "
                          f"at t={state.t}", state.t, int(exc.cells[0])) from None
    new = SolverState(s_new, c_new, state.t + dt)
    if info is not None:
        info.append(StepInfo(new.t, dt, float(F[0]), float(F[-1]), float(G[0]),
                             float(G[-1]), extra))
    return new


def check_cfl(config):
    """Return ``lam * M``; warns when it exceeds one."""
    bound = cfl_bound(config.model)
    value = config.lam * bound
    if value > 1.0 + 1e-12:
        warnings.warn(f"CFL condition violated: lambda*M = {value:.4g} > 1", stacklevel=2)
    return value


def run(config, info=None):
    """Integrate to ``config.t_end``; return ``[(t, SolverState), ...]``.

    The initial state and every requested snapshot time (plus ``t_end``) are
    recorded; the step before each of them is shortened to land exactly on
    it. Pass a list as ``info`` to collect a :class:`StepInfo` per step.
    """
    if config.check_cfl:
        check_cfl(config)
    state = initial_state(config)
    targets = sorted({float(t) for t in config.snapshot_times if 0.0 < t <= config.t_end}
                     | ({float(config.t_end)} if config.t_end > 0.0 else set()))
    snapshots = [(0.0, state.copy())]
    dt = config.dt
    for target in targets:
        while state.t < target - 1e-12 * max(1.0, target):
            this_dt = min(dt, target - state.t)
            try:
                state = step(state, config, this_dt, info)
            except SolverError as exc:
                log.error("run aborted at t=%s: %s", state.t, exc)
                raise
            if config.diagnostics:
                log.info("t=%.6g min s=%.6g max s=%.6g TV(c)=%.6g", state.t, state.s.min(),
                         state.s.max(), float(np.abs(np.diff(state.c)).sum()))
        state.t = target
        snapshots.append((target, state.copy()))
    return snapshots
