"""Named experiment set-ups and the key-value configuration file format.

Configuration files are INI-style::

    [model]
    name = two_phase_gravity
    g1 = 2
    g2 = 1

    [grid]
    x_min = 0
    x_max = 2
    n_cells = 200          ; or: h = 0.01

    [scheme]
    name = dflu
    lambda = 0.8

    [time]
    t_end = 1.5
    snapshots = 1, 1.5

    [boundary]
    type = dirichlet       ; or: closed
    left = 0.9, 0.9        ; s, c
    right = 0.1, 0.3

    [initial]
    breaks = 1.0
    s = 0.9, 0.1
    c = 0.9, 0.3
"""

import configparser
from dataclasses import dataclass, field

from .fluxes import SchemeKind
from .model import make_model
from .riemann import State
from .solver import ClosedZeroFlux, Dirichlet, Grid1D, PiecewiseConstant, RunConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    description: str
    model: str
    model_params: dict
    x_range: tuple
    h: float
    lam: float
    t_end: float
    boundary: str
    initial: PiecewiseConstant
    snapshots: tuple = ()
    riemann_origin: float = None
    default_schemes: tuple = ("dflu",)
    reference: dict = field(default_factory=dict)

    def config(self, scheme="dflu", h=None, lam=None, t_end=None, snapshots=None):
        model = make_model(self.model, **self.model_params)
        h = self.h if h is None else h
        grid = Grid1D.from_h(self.x_range[0], self.x_range[1], h)
        if self.boundary == "closed":
            bc = ClosedZeroFlux()
        else:
            ic = self.initial
            bc = Dirichlet(State(ic.s[0], ic.c[0]), State(ic.s[-1], ic.c[-1]))
        t_end = self.t_end if t_end is None else t_end
        snaps = self.snapshots if snapshots is None else tuple(snapshots)
        return RunConfig(model, scheme, grid, self.lam if lam is None else lam, t_end, bc,
                         self.initial, tuple(t for t in snaps if t <= t_end))


# Errors at t = 0.5 for h = 1/50 ... 1/800, lambda = 1/4 (published tables).
_TABLE_IC1 = {
    "godunov": {"s": [0.2373, 0.15134, 9.6868e-2, 6.4228e-2, 4.2198e-2],
                "c": [6.3796e-2, 4.1630e-2, 2.6669e-2, 1.7398e-2, 1.1522e-2],
                "rate_s": [0.6489, 0.6437, 0.5928, 0.606],
                "rate_c": [0.6158, 0.6424, 0.6162, 0.5945]},
    "dflu": {"s": [0.2372, 0.1506, 9.6868e-2, 6.4228e-2, 4.2197e-2],
             "c": [6.3796e-2, 4.1630e-2, 2.6669e-2, 1.7398e-2, 1.1522e-2],
             "rate_s": [0.655, 0.6366, 0.5928, 0.606],
             "rate_c": [0.6158, 0.6424, 0.6162, 0.5945]},
}
_TABLE_IC2 = {
    "godunov": {"s": [0.10246, 5.7861e-2, 3.2849e-2, 1.9152e-2, 1.1489e-2],
                "c": [4.8407e-2, 3.0161e-2, 1.9307e-2, 1.2618e-2, 8.4125e-3],
                "rate_s": [0.8243, 0.81674, 0.7785, 0.7370],
                "rate_c": [0.6825, 0.6435, 0.6136, 0.5848]},
    "dflu": {"s": [0.10373, 5.8731e-2, 3.3259e-2, 1.9353e-2, 1.1571e-2],
             "c": [4.8486e-2, 3.0201e-2, 1.9328e-2, 1.2628e-2, 8.4173e-3],
             "rate_s": [0.8206, 0.8203, 0.7811, 0.7420],
             "rate_c": [0.6829, 0.6439, 0.6140, 0.5851]},
}
TABLE_H = (1 / 50, 1 / 100, 1 / 200, 1 / 400, 1 / 800)

PRESETS = {
    "ic1": ExperimentPreset(
        "ic1", "quadratic test flux, rarefaction + contact + shock", "quadratic_test", {},
        (0.0, 2.0), 1 / 50, 0.25, 0.5, "dirichlet",
        PiecewiseConstant([0.5], [2.5, 1.0], [0.5, 0.0]), riemann_origin=0.5,
        default_schemes=("godunov", "dflu"),
        reference={"table": _TABLE_IC1, "h": TABLE_H,
                   "constants": {"s_star": 1.236, "A": 2.587, "s_bar": 0.394,
                                 "sigma_1": -2 / 3, "sigma_c": 1.018, "sigma_2": 2.606}}),
    "ic2": ExperimentPreset(
        "ic2", "quadratic test flux, shock + contact (DFLU differs from Godunov)",
        "quadratic_test", {}, (0.0, 2.0), 1 / 50, 0.25, 0.5, "dirichlet",
        PiecewiseConstant([0.5], [2.3, 3.2], [0.5, 0.0]), riemann_origin=0.5,
        default_schemes=("godunov", "dflu"),
        reference={"table": _TABLE_IC2, "h": TABLE_H,
                   "constants": {"s_bar": 2.7536, "sigma_s": -0.702, "sigma_c": 0.609}}),
    "ivp": ExperimentPreset(
        "ivp", "two-phase gravity model, Dirichlet ends", "two_phase_gravity", {},
        (0.0, 2.0), 1 / 100, 0.8, 1.5, "dirichlet",
        PiecewiseConstant([0.5], [0.9, 0.1], [0.9, 0.3]), snapshots=(1.0, 1.5),
        default_schemes=("dflu", "um", "lf", "force")),
    "closed": ExperimentPreset(
        "closed", "two-phase gravity model, closed ends", "two_phase_gravity", {},
        (0.0, 2.0), 1 / 100, 0.8, 3.0, "closed",
        PiecewiseConstant([0.5], [0.9, 0.1], [0.9, 0.3]), snapshots=(1.0, 2.0, 3.0),
        default_schemes=("dflu", "um", "lf", "force")),
    "nopolymer": ExperimentPreset(
        "nopolymer", "closed ends without polymer (c = 0)", "two_phase_gravity", {},
        (0.0, 2.0), 1 / 100, 0.8, 3.0, "closed",
        PiecewiseConstant([0.5], [0.9, 0.1], [0.0, 0.0]), snapshots=(1.0, 3.0),
        default_schemes=("dflu", "um", "lf", "force")),
}


def get_preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def _floats(text, key):
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{key}: expected comma-separated numbers, got {text!r}") from None


def _get(cp, section, key, cast=float, default=None):
    if not cp.has_option(section, key):
        if default is None:
            raise ConfigError(f"missing [{section}] {key}")
        return default
    raw = cp.get(section, key)
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from None


def parse_config(text):
    """Build a :class:`RunConfig` from configuration text."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    for section in ("model", "grid", "scheme", "time", "initial"):
        if not cp.has_section(section):
            raise ConfigError(f"missing section [{section}]")
    params = {k: v for k, v in cp.items("model") if k != "name"}
    try:
        model = make_model(cp.get("model", "name", fallback="quadratic_test"), **params)
    except ValueError as exc:
        raise ConfigError(f"[model] {exc}") from None
    x_min = _get(cp, "grid", "x_min")
    x_max = _get(cp, "grid", "x_max")
    try:
        if cp.has_option("grid", "n_cells"):
            grid = Grid1D(x_min, x_max, _get(cp, "grid", "n_cells", int))
        else:
            grid = Grid1D.from_h(x_min, x_max, _get(cp, "grid", "h"))
    except ValueError as exc:
        raise ConfigError(f"[grid] {exc}") from None
    scheme = cp.get("scheme", "name", fallback="dflu")
    try:
        SchemeKind(scheme)
    except ValueError:
        raise ConfigError(f"[scheme] name: unknown scheme {scheme!r}") from None
    lam = _get(cp, "scheme", "lambda")
    t_end = _get(cp, "time", "t_end")
    snaps = _floats(cp.get("time", "snapshots", fallback=""), "[time] snapshots")
    breaks = _floats(cp.get("initial", "breaks", fallback=""), "[initial] breaks")
    s_vals = _floats(_get(cp, "initial", "s", str), "[initial] s")
    c_vals = _floats(_get(cp, "initial", "c", str), "[initial] c")
    try:
        initial = PiecewiseConstant(breaks, s_vals, c_vals)
    except ValueError as exc:
        raise ConfigError(f"[initial] {exc}") from None
    kind = cp.get("boundary", "type", fallback="dirichlet")
    if kind == "closed":
        bc = ClosedZeroFlux()
    elif kind == "dirichlet":
        left = _floats(cp.get("boundary", "left", fallback=f"{s_vals[0]},{c_vals[0]}"),
                       "[boundary] left")
        right = _floats(cp.get("boundary", "right", fallback=f"{s_vals[-1]},{c_vals[-1]}"),
                        "[boundary] right")
        if len(left) != 2 or len(right) != 2:
            raise ConfigError("[boundary] left/right need two values: s, c")
        bc = Dirichlet(State(*left), State(*right))
    else:
        raise ConfigError(f"[boundary] type: expected dirichlet or closed, got {kind!r}")
    try:
        return RunConfig(model, scheme, grid, lam, t_end, bc, initial, tuple(snaps))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
