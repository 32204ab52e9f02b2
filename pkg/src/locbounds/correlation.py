"""Correlation-decay bounds from the imaginary-axis integral of Omega.

The connected correlator is (1/2pi) times the integral of Omega along the
imaginary axis. On the axis |Omega(iy)| is bounded by the bound at zero near
y = 0 and by the envelope Omega-bar(r, |y|) further out, which gives

    |<S V>_c| <= (1/2pi) [2 y0 B + 2 int_{y0}^inf Omega-bar(r, y) dy]

for any split point y0. The best y0 solves Omega-bar(r, y0) = B.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, QuadratureError, TailDivergenceError
from .holo import BoundResult, GapModel
from .kernels import CLOSED_FORM, OmegaBarEnvelope
from .quadrature import gk_integrate

Y_LO = 1e-8
Y_HI_FACTOR = 1e3
TAIL_RTOL = 1e-10


@dataclass(frozen=True)
class AxisIntegral:
    exact: complex
    numeric: complex
    error: float


def inverse_linear_axis_integral(mu: float) -> AxisIntegral:
    """Principal value of int_{-i inf}^{+i inf} dw / (w - mu) = -pi i sgn(mu).

    The numeric value pairs y with -y (the principal value) after y = |mu| tan(phi).
    """
    mu = float(mu)
    if mu == 0 or not math.isfinite(mu):
        raise DomainError("mu must be a nonzero finite real")
    a = abs(mu)

    def f(phi):
        y = a * np.tan(phi)
        jac = a / np.cos(phi) ** 2
        plus = 1j / (1j * y - mu)
        minus = 1j / (-1j * y - mu)
        return (plus + minus) * jac

    val, err = gk_integrate(f, 0.0, 0.5 * math.pi, rtol=1e-13, atol=1e-15, full_output=True)
    return AxisIntegral(-1j * math.pi * math.copysign(1.0, mu), complex(val), float(np.abs(err)))


@dataclass(frozen=True)
class CorrelationBound:
    r: float
    y0: float
    value: float
    exponent: BoundResult | None
    bound_at_zero: float
    tail_integral: float
    y0_fallback: bool


def _solve_y0(env: OmegaBarEnvelope, target: float, v: float):
    lo, hi = math.log(Y_LO), math.log(Y_HI_FACTOR * v)
    g = lambda u: float(env.log(math.exp(u))[0]) - math.log(target)  # noqa: E731
    if target <= 0 or not (g(lo) >= 0 >= g(hi)):
        return v, True
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return math.exp(0.5 * (lo + hi)), False


def tail_integral(env: OmegaBarEnvelope, y0: float) -> float:
    """int_{y0}^inf Omega-bar(r, y) dy.

    Numeric envelopes use the exact swap int C(r, t) e^{-y0 t} / t dt, which is
    finite only when C(r, t) vanishes at t = 0. Closed-form envelopes are
    integrated in ln y up to a cutoff Y that grows until Y Omega-bar(Y) falls
    below ``TAIL_RTOL`` of the running total.
    """
    if env.mode == CLOSED_FORM:
        return _tail_y_space(env, y0)
    kern, r = env.kernel, env.r
    with np.errstate(divide="ignore"):
        c0 = float(kern.log_value(r, np.array([0.0]))[0])
    if np.isfinite(c0):
        raise TailDivergenceError("kernel does not vanish at t = 0, the axis tail diverges")
    T = env.saturation
    edges = sorted({0.0, *[c for c in env.crossovers if 0.0 < c < T], T})

    def f(t):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.exp(kern.log_value(r, t) - y0 * t) / t
        return np.where(t > 0, out, 0.0)

    total = math.fsum(float(gk_integrate(f, lo, hi, rtol=1e-11, atol=0.0))
                      for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo)
    # beyond saturation the kernel is the constant cap: cap * E1(y0 T)
    return total + env.cap * float(special.exp1(y0 * T))


def _tail_y_space(env, y0):
    def f(u):
        y = np.exp(u)
        return np.exp(env.log(y)) * y

    total, Y = 0.0, y0
    prev = float(y0 * env(y0))
    atol = 1e-13 * prev
    for _ in range(40):
        Ynew = Y * 10.0
        try:
            total += float(gk_integrate(f, math.log(Y), math.log(Ynew), rtol=1e-11, atol=atol,
                                       max_panels=20000))
        except QuadratureError as exc:
            raise TailDivergenceError(f"axis tail quadrature failed: {exc}") from exc
        Y = Ynew
        yo = float(Y * env(Y))
        if yo >= 0.9 * prev and Y > 1e6 * y0:
            raise TailDivergenceError("y Omega-bar(y) does not decay, the axis tail diverges")
        prev = yo
        if yo < TAIL_RTOL * total:
            return total + yo
    raise TailDivergenceError("axis tail did not converge within the cutoff schedule")


def correlation_bound(env: OmegaBarEnvelope, gap: GapModel, bound_at_zero: float,
                      exponent: BoundResult | None = None) -> CorrelationBound:
    """Upper bound on |<S_X V_Y>_c| at distance env.r."""
    if bound_at_zero < 0 or not math.isfinite(bound_at_zero):
        raise DomainError("bound at zero must be finite and nonnegative")
    y0, fallback = _solve_y0(env, bound_at_zero, gap.v)
    tail = tail_integral(env, y0)
    value = (2.0 * y0 * bound_at_zero + 2.0 * tail) / (2.0 * math.pi)
    return CorrelationBound(env.r, y0, value, exponent, float(bound_at_zero), tail, fallback)


def direct_axis_bound(env: OmegaBarEnvelope, gap: GapModel, bound_at_zero: float) -> float:
    """(1/pi) int_0^inf min(B, Omega-bar(r, y)) dy, integrated without a split point."""
    y_hi = Y_HI_FACTOR * gap.v
    if float(env(y_hi)) > bound_at_zero:
        raise DomainError("envelope still exceeds the bound at zero at the top of the bracket")

    def f(u):
        y = np.exp(u)
        return np.minimum(bound_at_zero, np.exp(env.log(y))) * y

    y_min = 1e-14
    head = float(gk_integrate(f, math.log(y_min), math.log(y_hi), rtol=1e-11, atol=0.0,
                              max_panels=20000))
    return (head + y_min * bound_at_zero + tail_integral(env, y_hi)) / math.pi


@dataclass(frozen=True)
class DominanceReport:
    y: np.ndarray
    profile: np.ndarray
    bound_at_zero: float
    max_excess: float
    monotone: bool
    passed: bool


def axis_dominance_check(amps, bound_at_zero: float, y_grid=None, *, gap: GapModel | None = None,
                         rtol: float = 1e-12) -> DominanceReport:
    """Sample |Omega(iy)| of an exact instance and compare it to the bound at zero.

    ``amps`` is anything with an ``omega(w)`` method, e.g. ``ResponseAmplitudes``.
    """
    if y_grid is None:
        scale = gap.Delta if gap is not None else 1.0
        y_grid = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 161) * scale])
    y = np.asarray(y_grid, float)
    if y.size == 0:
        raise DomainError("empty y grid")
    prof = np.abs(np.asarray(amps.omega(1j * y)))
    excess = float(np.max(prof - bound_at_zero))
    order = np.argsort(np.abs(y))
    p = prof[order]
    mono = bool(np.all(np.diff(p) <= rtol * max(float(p.max()), 1e-300)))
    ok = excess <= rtol * max(bound_at_zero, 1e-300)
    return DominanceReport(y, prof, float(bound_at_zero), excess, mono, bool(ok))
