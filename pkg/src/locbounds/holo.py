"""Bounds on |Omega(0)| from circle averages of ln Omega-bar, and the closed-form exponents.

ln|Omega(0)| is bounded by the average of ln Omega-bar(r, |Im w|) over a circle
w = rho e^{i theta} inside the gap disk, or over the image f(rho e^{i theta})
of a circle under the strip map ``conformal_f``. Both averages reduce to a
quarter period by symmetry. The logarithmic singularity of ln Omega-bar at
y -> 0 is handled exactly: y Omega-bar(y) is bounded, and the remaining
-ln sin(theta) piece integrates in closed form to ln 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .errors import DivergenceError, DomainError, QuadratureError
from .kernels import OmegaBarEnvelope
from .quadrature import gk_integrate

HALF_PI = 0.5 * math.pi
_THETA_RTOL = 1e-10
_THETA_ATOL = 1e-12

POWER_ENVELOPE = "P(ln r)/r^exp"
EXP_ENVELOPE = "P(r)*exp(-exp*r)"


@dataclass(frozen=True)
class GapModel:
    """Uniform gap Delta and velocity v; Omega is analytic off {|Re w| >= Delta, Im w = 0}."""

    Delta: float
    v: float

    def __post_init__(self):
        if not (self.Delta > 0 and math.isfinite(self.Delta)):
            raise DomainError(f"gap must be positive, got {self.Delta}")
        if not (self.v > 0 and math.isfinite(self.v)):
            raise DomainError(f"velocity must be positive, got {self.v}")

    def in_excluded_set(self, w, tol=0.0) -> bool:
        w = complex(w)
        return abs(w.imag) <= tol and abs(w.real) >= self.Delta - tol


@dataclass(frozen=True)
class BoundResult:
    exponent: float
    envelope_kind: str = POWER_ENVELOPE
    poly_degree: int = 0
    method: str = "conformal"
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.exponent > 0:
            raise DomainError(f"bound exponent must be positive, got {self.exponent}")
        cap = 3 if self.method == "fse" else 2
        if not 0 <= self.poly_degree <= cap:
            raise DomainError(f"polynomial degree {self.poly_degree} outside [0, {cap}]")


def _average(fun, breakpoints=()):
    """(2/pi) int_0^{pi/2} fun(theta) d theta with kinks passed as breakpoints."""
    pts = sorted(b for b in set(breakpoints) if 0.0 < b < HALF_PI)
    try:
        val = gk_integrate(fun, 0.0, HALF_PI, rtol=_THETA_RTOL, atol=_THETA_ATOL,
                           breakpoints=pts, max_panels=20000)
    except QuadratureError as exc:
        raise DivergenceError(f"circle average did not converge: {exc}") from exc
    if not np.isfinite(val):
        raise DivergenceError("circle average is not finite")
    return float(val) / HALF_PI


def _y_breaks(env: OmegaBarEnvelope, ymax):
    """Spectral parameters where ln(y Omega-bar) bends sharply, for theta breakpoints."""
    ys = {1.0 / max(env.timescale, 1e-300)}
    rate = getattr(env.kernel, "rate", getattr(env.kernel, "v", None))
    if rate is not None:
        ys.add(float(rate))
    if env.saturation > 0:
        ys.update({1.0 / env.saturation, 10.0 / env.saturation, 100.0 / env.saturation})
    return [y for y in ys if 0 < y < ymax]


def disk_average_log_bound(env: OmegaBarEnvelope, rho: float, gap: GapModel) -> float:
    """(1/2pi) int_0^{2pi} ln Omega-bar(r, |rho sin theta|) d theta, for 0 < rho < Delta."""
    if not 0.0 < rho < gap.Delta:
        raise DomainError(f"radius must lie in (0, Delta={gap.Delta}), got {rho}")
    return _disk_average(env, rho)


def _disk_average(env, rho):
    def fun(theta):
        return env.log_y_times(rho * np.sin(theta))

    breaks = [math.asin(y / rho) for y in _y_breaks(env, rho)]
    return _average(fun, breaks) - math.log(rho / 2.0)


def conformal_f(z, gap: GapModel):
    """(2v/pi) artanh(2z/(z^2+1) tanh(Delta pi / 2v)), principal branch, |z| < 1.

    Evaluated as (v/pi)[log(1+a) - log(1-a)] with 1 - a rebuilt from
    (1-z)^2/(1+z^2) so the result stays accurate as z approaches +-1.
    """
    z = np.asarray(z, complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("conformal map is defined on the open unit disk only")
    x = gap.Delta * math.pi / (2.0 * gap.v)
    one_minus_T = 2.0 / (math.exp(2.0 * x) + 1.0) if x < 350 else 0.0
    zz = 1.0 + z * z
    w = 2.0 * z / zz
    one_minus_a = (1.0 - z) ** 2 / zz + w * one_minus_T
    one_plus_a = (1.0 + z) ** 2 / zz - w * one_minus_T
    out = (gap.v / math.pi) * (np.log(one_plus_a) - np.log(one_minus_a))
    return out if out.ndim else complex(out)


def conformal_average_log_bound(env: OmegaBarEnvelope, rho: float, gap: GapModel,
                                f: Callable | None = None) -> float:
    """(1/2pi) int_0^{2pi} ln Omega-bar(r, |Im f(rho e^{i theta})|) d theta, 0 < rho < 1.

    ``f`` defaults to ``conformal_f``; any map analytic on the unit disk with
    f(0) = 0, image off the excluded set and the symmetries of the default
    map may be passed instead (f(z) = Delta z recovers the disk average).
    """
    if not 0.0 < rho < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {rho}")
    fmap = (lambda z: conformal_f(z, gap)) if f is None else f

    def y_of(theta):
        return np.abs(np.imag(fmap(rho * np.exp(1j * theta))))

    def fun(theta):
        y = y_of(theta)
        return env.log_y_times(y) - np.log(y / np.sin(theta))

    breaks = []
    if f is None:
        T = math.tanh(gap.Delta * math.pi / (2.0 * gap.v))
        theta0 = math.acos(T)
        eps = 1.0 - rho
        breaks += [theta0 + s * k * eps for k in (1.0, 4.0, 16.0, 64.0) for s in (-1.0, 1.0)]
        breaks.append(theta0)
    # locate theta where y(theta) crosses the envelope's bend points
    grid = np.linspace(1e-9, HALF_PI, 257)
    yg = y_of(grid)
    for yb in _y_breaks(env, float(yg.max()) * 1.0000001):
        idx = np.nonzero(np.diff(np.sign(yg - yb)))[0]
        for i in idx:
            try:
                breaks.append(optimize.brentq(lambda t: y_of(np.array([t]))[0] - yb,
                                              grid[i], grid[i + 1], xtol=1e-14))
            except ValueError:
                pass
    return _average(fun, breaks) + math.log(2.0)


def _rho_objective(env, gap, conformal):
    def obj(u):
        rho = -math.expm1(u)  # u = ln(1 - rho)
        if conformal:
            return conformal_average_log_bound(env, rho, gap)
        return disk_average_log_bound(env, gap.Delta * rho, gap)
    return obj


@dataclass(frozen=True)
class RhoOptimum:
    rho_star: float
    log_bound: float
    rho_init: float
    log_bound_init: float
    iterations: int
    refined: bool


def optimize_rho(env: OmegaBarEnvelope, gap: GapModel, conformal: bool = True,
                 max_iter: int = 64) -> RhoOptimum:
    """Choose the circle radius (as a fraction of the maximal one).

    Initial guess 1 - rho = pi / (2 Delta t0), the minimizer of the leading
    -ln(1 - rho) + (2 Delta t0 / pi)(1 - rho) behavior, with t0 the envelope
    timescale; then a golden-section search in ln(1 - rho). The refined value
    is kept only if it improves on the initialization.
    """
    t0 = max(env.timescale, 1e-300)
    eps0 = min(max(math.pi / (2.0 * gap.Delta * t0), 1e-9), 0.5)
    u0 = math.log(eps0)
    obj = _rho_objective(env, gap, conformal)
    f0 = obj(u0)
    lo, hi = max(u0 - 8.0, math.log(1e-13)), min(u0 + 8.0, math.log(0.999))
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = obj(c), obj(d)
    it = 2
    while it < max_iter and (b - a) > 1e-6:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = obj(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = obj(d)
        it += 1
    u_best, f_best = (c, fc) if fc < fd else (d, fd)
    rho0 = -math.expm1(u0)
    if f_best < f0:
        return RhoOptimum(-math.expm1(u_best), f_best, rho0, f0, it, True)
    return RhoOptimum(rho0, f0, rho0, f0, it, False)


def log_bound_at_zero(env: OmegaBarEnvelope, gap: GapModel, method: str = "conformal") -> float:
    """Best available upper bound on ln|Omega(0)| for the given envelope."""
    if method == "conformal":
        return optimize_rho(env, gap, conformal=True).log_bound
    if method in ("nonconformal", "large-alpha"):
        # the disk average only improves as rho -> Delta
        return disk_average_log_bound(env, gap.Delta * (1.0 - 1e-12), gap)
    raise DomainError(f"unknown method {method!r}")


# closed-form exponents -------------------------------------------------------

def _gd(x: float) -> float:
    """arcsin(tanh x) as arctan(sinh x), which keeps full precision as tanh x -> 1."""
    return math.atan(math.sinh(x)) if x < 710 else HALF_PI


def alpha1_nonconformal(alpha: float, gap: GapModel) -> BoundResult:
    ratio = gap.v / gap.Delta
    theta0 = math.asin(ratio) if ratio < 1.0 else HALF_PI
    # 1 - cos(theta0) written as 2 sin^2(theta0 / 2) to avoid cancellation
    val = (4.0 * alpha / (math.pi * ratio)) * math.sin(0.5 * theta0) ** 2 \
        + alpha * (1.0 - 2.0 * theta0 / math.pi)
    return BoundResult(val, POWER_ENVELOPE, 1, "nonconformal",
                       {"alpha": alpha, "Delta": gap.Delta, "v": gap.v, "theta0": theta0})


def alpha1_conformal(alpha: float, gap: GapModel) -> BoundResult:
    x = gap.Delta * math.pi / (2.0 * gap.v)
    val = (2.0 * alpha / math.pi) * _gd(x)
    return BoundResult(val, POWER_ENVELOPE, 2, "conformal",
                       {"alpha": alpha, "Delta": gap.Delta, "v": gap.v})


def mu1_exponential(mu: float, gap: GapModel) -> BoundResult:
    x = gap.Delta * math.pi / (2.0 * mu * gap.v)
    val = (2.0 * mu / math.pi) * _gd(x)
    return BoundResult(val, EXP_ENVELOPE, 2, "exponential",
                       {"mu": mu, "Delta": gap.Delta, "v": gap.v})


def mu1_kappa(omega: Callable, gap: GapModel, kappas=None) -> BoundResult:
    """Best mu1 over kappa for C e^{omega(kappa) t - kappa r} (mu = kappa, mu v = omega)."""
    k = np.geomspace(1e-3, 20.0, 2000) if kappas is None else np.asarray(kappas, float)
    w = np.asarray(omega(k), float)
    with np.errstate(over="ignore"):
        vals = (2.0 * k / math.pi) * np.arctan(np.sinh(gap.Delta * math.pi / (2.0 * w)))
    i = int(np.argmax(vals))
    return BoundResult(float(vals[i]), EXP_ENVELOPE, 2, "exponential",
                       {"kappa": float(k[i]), "omega": float(w[i]), "Delta": gap.Delta})


def prior_exponents(interaction: str, gap: GapModel, *, alpha=None, mu=None) -> BoundResult:
    if interaction == "power":
        val = alpha / (1.0 + 2.0 * gap.v / gap.Delta)
        return BoundResult(val, POWER_ENVELOPE, 0, "prior", {"alpha": alpha})
    if interaction == "exponential":
        val = mu / (1.0 + 2.0 * mu * gap.v / gap.Delta)
        return BoundResult(val, EXP_ENVELOPE, 0, "prior", {"mu": mu})
    raise DomainError(f"unknown interaction class {interaction!r}")


def qac_comparison_exponent(alpha: float, D: int) -> BoundResult | None:
    """alpha - D - 1 for alpha > 2D; None means the method gives no power-law bound."""
    if alpha > 2 * D:
        return BoundResult(alpha - D - 1.0, POWER_ENVELOPE, 0, "qac", {"alpha": alpha, "D": D})
    return None


def crossover_points(alpha: float, D: int, C: float = 1.0):
    """Positive roots of (x + C) e^{-C x} = x^{-alpha(gamma+1)}; may be empty."""
    gamma = (1.0 + D) / (alpha - 2.0 * D)
    k = alpha * (gamma + 1.0)

    def g(x):
        return np.log(x + C) - C * x + k * np.log(x)

    xs = np.geomspace(1e-8, 1e4, 4001)
    gx = g(xs)
    roots = []
    for i in np.nonzero(np.diff(np.sign(gx)))[0]:
        roots.append(optimize.brentq(g, xs[i], xs[i + 1], xtol=1e-14, rtol=1e-14))
    return roots


def alpha1_large_alpha(alpha: float, D: int, gap: GapModel, *, slope_check: bool = False,
                       kernel=None, r_grid=None) -> BoundResult:
    """alpha1 = alpha for two-body interactions with alpha > 2D (constant prefactor)."""
    if not alpha > 2 * D:
        raise DomainError(f"large-alpha bound needs alpha > 2D, got alpha={alpha}, D={D}")
    roots = crossover_points(alpha, D)
    constants = {"alpha": alpha, "D": D, "gamma": (1.0 + D) / (alpha - 2.0 * D),
                 "crossover_x": roots, "crossover_found": len(roots) == 2}
    if slope_check:
        constants["fitted_slope"] = large_alpha_slope(alpha, D, gap, kernel=kernel, r_grid=r_grid)
    return BoundResult(float(alpha), POWER_ENVELOPE, 0, "large-alpha", constants)


def large_alpha_slope(alpha, D, gap, *, kernel=None, r_grid=None, mode="closed-form-piecewise"):
    from .kernels import AlgebraicLightcone
    from .ed.fitting import fit_decay
    kern = kernel or AlgebraicLightcone(alpha=alpha, D=D, v=gap.v, v_prime=gap.v)
    rs = np.geomspace(1e2, 1e6, 9) if r_grid is None else np.asarray(r_grid, float)
    logs = [log_bound_at_zero(OmegaBarEnvelope(kern, r, mode), gap, "large-alpha") for r in rs]
    return -fit_decay(list(zip(rs, np.exp(logs))), "power").exponent


def curve_point(env: OmegaBarEnvelope, gap: GapModel, method: str = "conformal") -> dict:
    """One row of a bound curve: log bound plus the rho trace for the conformal method.

    The disk is the f(xi) = Delta xi member of the admissible maps, so the
    conformal row keeps whichever of the strip map and the disk is lower and
    records which one it used.
    """
    disk = None
    if method in ("nonconformal", "large-alpha", "conformal"):
        disk = log_bound_at_zero(env, gap, "nonconformal")
    if method == "conformal":
        opt = optimize_rho(env, gap, conformal=True)
        use_strip = opt.log_bound <= disk
        return {"r": env.r, "log_bound": min(opt.log_bound, disk), "rho_star": opt.rho_star,
                "rho_init": opt.rho_init, "log_bound_init": opt.log_bound_init,
                "strip_log_bound": opt.log_bound, "map": "strip" if use_strip else "disk"}
    if disk is None:
        raise DomainError(f"unknown method {method!r}")
    return {"r": env.r, "log_bound": disk, "rho_star": 1.0 - 1e-12,
            "rho_init": 1.0 - 1e-12, "log_bound_init": disk, "strip_log_bound": None, "map": "disk"}
