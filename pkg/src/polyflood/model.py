"""Flux and adsorption models for the polymer-flooding system.

    s_t + f(s, c)_x = 0
    (s c + a(c))_t + (c f(s, c))_x = 0

A model bundles the fractional-flow flux ``f`` (with its saturation
derivative), the adsorption isotherm ``a`` and the admissible rectangle
``[0, s_max] x [0, c_max]``. All model methods are vectorised; the
module-level functions add the domain checks.
"""

from dataclasses import dataclass, field

import numpy as np

from .roots import bisect, golden_max


class DomainError(ValueError):
    """Argument outside the admissible saturation/concentration rectangle."""


class ModelError(ValueError):
    """The model violates one of the structural hypotheses on ``f`` or ``a``."""


@dataclass(frozen=True)
class Adsorption:
    """Langmuir-type isotherm ``a(c) = k c / (1 + b c)``; ``b = 0`` is linear."""

    k: float = 1.0
    b: float = 0.0

    def __call__(self, c):
        return self.k * c / (1.0 + self.b * c)

    def prime(self, c):
        return self.k / (1.0 + self.b * c) ** 2

    @property
    def linear_slope(self):
        return self.k if self.b == 0.0 else None


class FluxModel:
    """Base class. Subclasses provide ``flux`` and ``adsorption``.

    ``flux_s`` falls back to a central difference with step ``1e-6 * s_max``
    and ``theta`` to golden-section search when no closed form is known.
    """

    name = "generic"
    s_max = 1.0
    c_max = 1.0
    adsorption = Adsorption()

    def flux(self, s, c):
        raise NotImplementedError

    def flux_s(self, s, c):
        eps = 1e-6 * self.s_max
        s = np.asarray(s, dtype=float)
        lo = np.clip(s - eps, 0.0, self.s_max)
        hi = np.clip(s + eps, 0.0, self.s_max)
        return (self.flux(hi, c) - self.flux(lo, c)) / (hi - lo)

    def a(self, c):
        return self.adsorption(c)

    def a_prime(self, c):
        return self.adsorption.prime(c)

    def theta(self, c):
        c = np.asarray(c, dtype=float)
        if c.ndim == 0:
            return golden_max(lambda s: self.flux(s, c), 0.0, self.s_max)
        # concentration fields repeat values heavily; search each value once
        uniq, inverse = np.unique(c, return_inverse=True)
        th = golden_max(lambda s: self.flux(s, uniq), np.zeros_like(uniq),
                        np.full_like(uniq, self.s_max))
        return th[inverse].reshape(c.shape)

    def speed_bound(self):
        """Closed-form bound on the eigenvalue magnitudes, or None."""
        return None

    def secant_a(self, c, c_ref):
        """Secant slope of ``a`` between ``c`` and ``c_ref`` (``a'`` when they meet)."""
        c = np.asarray(c, dtype=float)
        c_ref = np.asarray(c_ref, dtype=float)
        k = self.adsorption.linear_slope
        if k is not None:
            return np.broadcast_to(np.float64(k), np.broadcast(c, c_ref).shape)[()]
        dc = c - c_ref
        close = np.abs(dc) < 1e-8
        safe = np.where(close, 1.0, dc)
        sec = (self.a(c) - self.a(c_ref)) / safe
        out = np.where(close, self.a_prime(0.5 * (c + c_ref)), sec)
        return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class GenericFluxModel(FluxModel):
    """User-supplied ``f`` (and optionally ``f_s``) with an adsorption isotherm."""

    f: object = None
    f_s: object = None
    adsorption: Adsorption = field(default_factory=Adsorption)
    s_max: float = 1.0
    c_max: float = 1.0
    name: str = "generic"

    def flux(self, s, c):
        return self.f(s, c)

    def flux_s(self, s, c):
        if self.f_s is None:
            return FluxModel.flux_s(self, s, c)
        return self.f_s(s, c)


@dataclass(frozen=True)
class QuadraticTestModel(FluxModel):
    """``f(s, c) = s (4 - s) / (1 + c)`` on ``[0, 4]``, with ``a(c) = c``."""

    adsorption: Adsorption = field(default_factory=lambda: Adsorption(1.0))
    s_max: float = 4.0
    c_max: float = 1.0
    name: str = "quadratic_test"

    def flux(self, s, c):
        return s * (4.0 - s) / (1.0 + c)

    def flux_s(self, s, c):
        return (4.0 - 2.0 * s) / (1.0 + c)

    def theta(self, c):
        c = np.asarray(c, dtype=float)
        out = np.full_like(c, 2.0)
        return out[()] if out.ndim == 0 else out

    def speed_bound(self):
        # |f_s| peaks at s = 0 or 4 with c = 0; f/(s + 1) stays below 1.53
        return 4.0


@dataclass(frozen=True)
class TwoPhaseGravityModel(FluxModel):
    """Wetting-phase Darcy velocity under gravity segregation.

    Mobilities are power laws,

        lambda_1 = s**n1 / (mu_w0 + mu_w_slope * c)
        lambda_2 = (1 - s)**n2 / mu_o

    and ``f = lambda_1 / (lambda_1 + lambda_2) * (q + (g1 - g2) lambda_2)``.
    The defaults give the gravity test case with ``a(c) = 0.25 c``.
    """

    g1: float = 2.0
    g2: float = 1.0
    q: float = 0.0
    n1: float = 2.0
    n2: float = 2.0
    mu_w0: float = 0.5
    mu_w_slope: float = 1.0
    mu_o: float = 1.0
    adsorption: Adsorption = field(default_factory=lambda: Adsorption(0.25))
    s_max: float = 1.0
    c_max: float = 1.0
    name: str = "two_phase_gravity"

    def mobility_1(self, s, c):
        return s ** self.n1 / (self.mu_w0 + self.mu_w_slope * c)

    def mobility_2(self, s, c):
        return (1.0 - s) ** self.n2 / self.mu_o + 0.0 * c

    def _mobility_1_s(self, s, c):
        return self.n1 * s ** (self.n1 - 1.0) / (self.mu_w0 + self.mu_w_slope * c)

    def _mobility_2_s(self, s, c):
        return -self.n2 * (1.0 - s) ** (self.n2 - 1.0) / self.mu_o + 0.0 * c

    def flux(self, s, c):
        m1 = self.mobility_1(s, c)
        m2 = self.mobility_2(s, c)
        tot = m1 + m2
        safe = np.where(tot > 0.0, tot, 1.0)
        return np.where(tot > 0.0, m1 / safe * (self.q + (self.g1 - self.g2) * m2), 0.0)

    def flux_s(self, s, c):
        g = self.g1 - self.g2
        m1 = self.mobility_1(s, c)
        m2 = self.mobility_2(s, c)
        d1 = self._mobility_1_s(s, c)
        d2 = self._mobility_2_s(s, c)
        tot = m1 + m2
        safe = np.where(tot > 0.0, tot, 1.0)
        num = (d1 * (self.q + g * m2) + m1 * g * d2) * tot - m1 * (self.q + g * m2) * (d1 + d2)
        return np.where(tot > 0.0, num / safe ** 2, 0.0)


def make_model(name, **params):
    """Build a named model; ``adsorption_slope``/``adsorption_b`` set the isotherm."""
    params = dict(params)
    k = params.pop("adsorption_slope", None)
    b = params.pop("adsorption_b", 0.0)
    if name == "quadratic_test":
        cls = QuadraticTestModel
        default_k = 1.0
    elif name == "two_phase_gravity":
        cls = TwoPhaseGravityModel
        default_k = 0.25
    else:
        raise ValueError(f"unknown model {name!r}; expected quadratic_test or two_phase_gravity")
    params["adsorption"] = Adsorption(default_k if k is None else float(k), float(b))
    try:
        return cls(**{key: float(v) if key != "adsorption" else v for key, v in params.items()})
    except TypeError as exc:
        raise ValueError(f"bad parameter for model {name!r}: {exc}") from None


def _check(model, s=None, c=None):
    if s is not None:
        s = np.asarray(s, dtype=float)
        if np.any(~np.isfinite(s)) or np.any(s < 0.0) or np.any(s > model.s_max):
            raise DomainError(f"saturation s outside [0, {model.s_max}]: {s}")
    if c is not None:
        c = np.asarray(c, dtype=float)
        if np.any(~np.isfinite(c)) or np.any(c < 0.0) or np.any(c > model.c_max):
            raise DomainError(f"concentration c outside [0, {model.c_max}]: {c}")


def eval_f(model, s, c):
    """Flux ``f(s, c)`` with domain checks."""
    _check(model, s, c)
    return model.flux(np.asarray(s, dtype=float), np.asarray(c, dtype=float))


def secant_adsorption(model, c, c_ref):
    """``(a(c) - a(c_ref)) / (c - c_ref)``, or ``a'(c)`` when ``c == c_ref``."""
    _check(model, c=c)
    _check(model, c=c_ref)
    return model.secant_a(c, c_ref)


def argmax_theta(model, c, check=True):
    """Maximiser of ``f(., c)`` on ``[0, s_max]``.

    With ``check`` the result is compared to a 257-point scan; a scan value
    noticeably above the returned maximum means ``f(., c)`` is not unimodal.
    """
    _check(model, c=c)
    theta = model.theta(c)
    if check:
        c_arr = np.atleast_1d(np.asarray(c, dtype=float))
        th = np.atleast_1d(theta)
        grid = np.linspace(0.0, model.s_max, 257)[:, None]
        scan = model.flux(grid, c_arr[None, :]).max(axis=0)
        best = model.flux(th, c_arr)
        if np.any(scan > best + 1e-9 * max(1.0, float(np.max(np.abs(scan))))):
            raise ModelError("f(., c) is not unimodal: golden-section search missed the maximum")
    return theta


def eigenvalues(model, s, c):
    """Return ``(f_s(s, c), f(s, c) / (s + a'(c)))``."""
    _check(model, s, c)
    s = np.asarray(s, dtype=float)
    c = np.asarray(c, dtype=float)
    denom = s + model.a_prime(c)
    if np.any(denom <= 0.0):
        raise ModelError("s + a'(c) vanishes; the concentration eigenvalue is singular")
    return model.flux_s(s, c), model.flux(s, c) / denom


def cfl_bound(model, n_s=2048, n_c=64):
    """Upper bound ``M`` on both eigenvalue magnitudes over the admissible rectangle.

    Uses the model's closed form when it has one; otherwise a dense grid
    sample inflated by 1 %.
    """
    exact = model.speed_bound()
    if exact is not None:
        return float(exact)
    s = np.linspace(0.0, model.s_max, n_s)[:, None]
    c = np.linspace(0.0, model.c_max, n_c)[None, :]
    lam_s = np.abs(model.flux_s(s, c))
    lam_c = np.abs(model.flux(s, c) / (s + model.a_prime(c)))
    return 1.01 * float(max(lam_s.max(), lam_c.max()))


def validate_model(model, n_s=401, n_c=21):
    """Check the flux/adsorption hypotheses on a grid; return a list of violations."""
    problems = []
    s = np.linspace(0.0, model.s_max, n_s)
    c = np.linspace(0.0, model.c_max, n_c)
    S, C = np.meshgrid(s, c, indexing="ij")
    f = model.flux(S, C)
    scale = max(1.0, float(np.abs(f).max()))
    if np.any(f < -1e-12 * scale):
        problems.append("f takes negative values")
    if np.any(np.abs(model.flux(0.0 * c, c)) > 1e-12 * scale):
        problems.append("f(0, c) != 0")
    if np.any(np.abs(model.flux(model.s_max + 0.0 * c, c)) > 1e-12 * scale):
        problems.append("f(s_max, c) != 0")
    for j in range(n_c):
        col = f[:, j]
        k = int(np.argmax(col))
        if np.any(np.diff(col[: k + 1]) < -1e-12 * scale) or np.any(np.diff(col[k:]) > 1e-12 * scale):
            problems.append(f"f(., {c[j]:.3g}) is not unimodal")
            break
    interior = f[1:-1, :]
    if np.any(np.diff(interior, axis=1) >= 0.0):
        problems.append("f is not strictly decreasing in c at interior s")
    ap = model.a_prime(c)
    if abs(float(model.a(0.0))) > 1e-14:
        problems.append("a(0) != 0")
    if np.any(ap <= 0.0):
        problems.append("a'(c) is not positive")
    if np.any(np.diff(ap) > 1e-14):
        problems.append("a'(c) is increasing (a is not concave)")
    probe = s[1:-1:max(1, n_s // 40)]
    eps = 1e-6 * model.s_max
    for cj in c[:: max(1, n_c // 5)]:
        fd = (model.flux(probe + eps, cj) - model.flux(probe - eps, cj)) / (2 * eps)
        an = model.flux_s(probe, cj)
        if np.any(np.abs(fd - an) > 1e-6 * np.maximum(1.0, np.abs(an))):
            problems.append(f"f_s disagrees with finite differences at c={cj:.3g}")
            break
    return problems


def s_star(model, c_l, c_r):
    """Saturation where ``f_s(., c_l)`` equals ``f(., c_l) / (s + abar)``.

    ``abar`` is the adsorption secant between ``c_l`` and ``c_r``. This is the
    tangent point of the line through ``(-abar, 0)`` on the curve ``f(., c_l)``
    and the maximiser of ``f(., c_l) / (s + abar)``. Vectorised, no checks.
    """
    c_l = np.asarray(c_l, dtype=float)
    abar = model.secant_a(c_l, c_r)
    theta = model.theta(c_l)

    def g(s):
        return model.flux_s(s, c_l) * (s + abar) - model.flux(s, c_l)

    lo = np.minimum(np.zeros_like(theta) + 1e-9 * model.s_max, theta)
    # g(0+) >= 0 and g(theta) = -f(theta) <= 0
    root = bisect(g, lo, theta, tol=1e-13, check=False)
    # keep the side with f_s <= f/(s + abar) so wave speeds stay ordered
    root = np.where(g(root) > 0.0, np.minimum(root + 1e-13, theta), root)
    return root


def recover_concentration(model, s_new, rhs, tol=1e-12):
    """Solve ``c * s_new + a(c) = rhs`` for ``c`` (vectorised, no range checks).

    Closed form for linear isotherms, bisection on ``[0, c_max]`` otherwise.
    """
    s_new = np.asarray(s_new, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    k = model.adsorption.linear_slope
    if k is not None:
        out = rhs / (s_new + k)
    else:
        out = bisect(lambda c: c * s_new + model.a(c) - rhs,
                     np.zeros(np.broadcast(s_new, rhs).shape),
                     np.full(np.broadcast(s_new, rhs).shape, model.c_max),
                     tol=tol, check=False)
    return out[()] if np.ndim(out) == 0 else out
