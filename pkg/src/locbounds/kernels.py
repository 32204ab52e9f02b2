"""Lieb-Robinson-type commutator bounds C(r, t) and their Laplace envelopes.

Every kernel works in log space: ``log_value(r, t)`` returns ln C(r, t). The
envelope ``OmegaBarEnvelope`` integrates C(r, t) e^{-yt} over t >= 0, either
by adaptive quadrature split at the kernel's crossover times (numeric mode) or
by a closed-form piecewise upper bound (closed-form mode).

Unspecified multiplicative constants default to 1; they only move the
prefactors, never the decay exponents.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable, ClassVar

import numpy as np
from scipy import special

from .errors import DomainError
from .quadrature import gk_integrate

NUMERIC = "numeric-quadrature"
CLOSED_FORM = "closed-form-piecewise"

_LOG_TINY = -745.0


def _log_exprel(a, t):
    """ln[(1 - e^{-a t}) / a], stable for either sign of ``a`` (limit ln t at 0)."""
    a = np.asarray(a, float)
    out = np.empty(np.broadcast(a, t).shape)
    at = a * t
    small = np.abs(at) < 1e-12
    pos = (a > 0) & ~small
    neg = (a < 0) & ~small
    t_b = np.broadcast_to(t, out.shape)
    out[small] = np.log(t_b[small]) + np.log1p(-0.5 * at[small])
    out[pos] = np.log(-np.expm1(-at[pos])) - np.log(a[pos])
    b = -a[neg]
    out[neg] = b * t_b[neg] + np.log(-np.expm1(-b * t_b[neg])) - np.log(b)
    return out


def _check_r(r):
    if not np.all(np.asarray(r) >= 1.0):
        raise DomainError(f"lattice distance must satisfy r >= 1, got {r}")


def _check_positive(**kw):
    for name, value in kw.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be a positive finite number, got {value}")


class _ExpGrowth:
    """Shared machinery for kernels of the form min(C g(vt) e^{-L(r)}, cap).

    ``g`` is e^{x} (default) or e^{x} - 1 (``smooth``), ``L`` is the spatial
    suppression: alpha ln r for power laws, mu r for exponential decay.
    """

    smooth: bool

    # subclasses provide: prefactor, cap_value, rate, suppression(r)

    def log_value(self, r, t):
        _check_r(r)
        t = np.asarray(t, float)
        if np.any(t < 0):
            raise DomainError("time must be nonnegative")
        L = self.suppression(r)
        x = self.rate * t
        if self.smooth:
            with np.errstate(divide="ignore"):
                growth = np.where(x > 30, x + np.log1p(-np.exp(-np.minimum(x, 700))),
                                  np.log(np.expm1(np.minimum(x, 30))))
        else:
            growth = x
        return np.minimum(math.log(self.cap_value), math.log(self.prefactor) + growth - L)

    def saturation_time(self, r):
        """First time at which the kernel reaches its trivial cap."""
        L = float(self.suppression(r))
        ratio_log = math.log(self.cap_value) - math.log(self.prefactor) + L
        if self.smooth:
            # C (e^{vt} - 1) e^{-L} = cap
            return float(np.logaddexp(0.0, ratio_log)) / self.rate
        return max(ratio_log, 0.0) / self.rate

    def crossovers(self, r):
        return [self.saturation_time(r)]

    def timescale(self, r):
        return max(self.saturation_time(r), 1.0 / self.rate)

    def log_closed_form(self, r, y):
        """ln of the piecewise Laplace envelope; always >= the exact transform."""
        y = np.asarray(y, float)
        t0 = self.saturation_time(r)
        L = float(self.suppression(r))
        v, C, cap = self.rate, self.prefactor, self.cap_value
        if self.smooth:
            return self._log_smooth_exact(y, t0, L)
        low = math.log(cap) + np.log(t0 + 1.0 / y) - y * t0
        high = math.log(C) - L + math.log(t0 + 1.0 / v) + 0.0 * y
        return np.where(y <= v, low, high)

    def _log_smooth_exact(self, y, t0, L):
        # Exact transform of min(C (e^{vt}-1) e^{-L}, cap); terms regrouped so
        # nothing overflows for large L.
        v, C, cap = self.rate, self.prefactor, self.cap_value
        eL = math.exp(-L) if L < 745 else 0.0
        out = np.empty_like(y)
        lo = y <= v
        if np.any(lo):
            yl = y[lo]
            a = v - yl
            A = (cap + C * eL) * np.exp(_log_exprel(a, t0))
            B = C * eL * np.expm1(yl * t0) / yl
            T = cap / yl
            out[lo] = -yl * t0 + np.log(A - B + T)
        if np.any(~lo):
            # the three pieces collapse to C v (1 - e^{-(y-v) t0}) / (y (y - v))
            yh = y[~lo]
            out[~lo] = (-L + math.log(C * v) + np.log(-np.expm1(-(yh - v) * t0))
                        - np.log(yh) - np.log(yh - v))
        return out

    def pieces(self, r):
        return [(0.0, self.saturation_time(r))]


@dataclass(frozen=True)
class HastingsKoma(_ExpGrowth):
    """min{C e^{vt} / r^alpha, cap}; with ``smooth`` the growth is e^{vt} - 1.

    ``cap`` defaults to ``C``. The smooth form is what the standard
    reproducing-function proof delivers and vanishes at t = 0, which makes its
    Laplace transform integrable over the spectral parameter.
    """

    C: float = 1.0
    v: float = 1.0
    alpha: float = 3.0
    D: int = 1
    cap: float | None = None
    smooth: bool = False
    variant: ClassVar[str] = "HastingsKoma"

    def __post_init__(self):
        _check_positive(C=self.C, v=self.v)
        if self.cap is not None:
            _check_positive(cap=self.cap)
        if int(self.D) != self.D or self.D < 1:
            raise DomainError("D must be a positive integer")
        if not self.alpha > self.D:
            raise DomainError(f"HastingsKoma needs alpha > D, got alpha={self.alpha}, D={self.D}")

    prefactor = property(lambda self: self.C)
    cap_value = property(lambda self: self.C if self.cap is None else self.cap)
    rate = property(lambda self: self.v)

    def suppression(self, r):
        return self.alpha * np.log(r)


@dataclass(frozen=True)
class Exponential(_ExpGrowth):
    """min{C e^{-mu (r - v t)}, cap}: a power law in e^r with alpha -> mu, v -> mu v."""

    C: float = 1.0
    mu: float = 1.0
    v: float = 1.0
    cap: float | None = None
    smooth: bool = False
    variant: ClassVar[str] = "Exponential"

    def __post_init__(self):
        _check_positive(C=self.C, mu=self.mu, v=self.v)
        if self.cap is not None:
            _check_positive(cap=self.cap)

    prefactor = property(lambda self: self.C)
    cap_value = property(lambda self: self.C if self.cap is None else self.cap)
    rate = property(lambda self: self.mu * self.v)

    def suppression(self, r):
        return self.mu * np.asarray(r, float)


@dataclass(frozen=True)
class AlgebraicLightcone:
    """Three-stage bound for two-body interactions with alpha > 2D.

    short times  C_short e^{v' t} / r^alpha                         t <= t'
    intermediate C_mid e^{v t - r / (C0 t^gamma)} + C_alg t^{alpha(gamma+1)} / r^alpha
    long times   cap                                                t > t0(r)

    with gamma = (1 + D)/(alpha - 2D), t' = alpha ln(alpha) / v and
    t0(r) = (r / (6 v C0))^{1/(gamma+1)}. The intermediate stage is floored at
    the short-time value reached at t' so the kernel is nondecreasing in t.
    ``C0=None`` picks the smallest grid value passing the convexity check.
    """

    C_short: float = 1.0
    C_mid: float = 1.0
    C_alg: float = 1.0
    cap: float = 1.0
    v: float = 1.0
    v_prime: float = 1.0
    alpha: float = 5.0
    D: int = 1
    C0: float | None = None
    variant: ClassVar[str] = "AlgebraicLightcone"
    C0_GRID: ClassVar[tuple] = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0)

    def __post_init__(self):
        _check_positive(C_short=self.C_short, C_mid=self.C_mid, C_alg=self.C_alg,
                        cap=self.cap, v=self.v, v_prime=self.v_prime)
        if int(self.D) != self.D or self.D < 1:
            raise DomainError("D must be a positive integer")
        if not self.alpha > 2 * self.D:
            raise DomainError(f"AlgebraicLightcone needs alpha > 2D, got {self.alpha}")
        if self.C0 is None:
            object.__setattr__(self, "C0", select_C0(self))
        else:
            _check_positive(C0=self.C0)

    @property
    def gamma(self):
        return (1.0 + self.D) / (self.alpha - 2.0 * self.D)

    @property
    def t_prime(self):
        return self.alpha * math.log(self.alpha) / self.v

    def t0(self, r):
        return (float(r) / (6.0 * self.v * self.C0)) ** (1.0 / (self.gamma + 1.0))

    cap_value = property(lambda self: self.cap)

    def _log_short(self, r, t):
        return math.log(self.C_short) + self.v_prime * t - self.alpha * math.log(r)

    def _log_mid(self, r, t):
        t = np.asarray(t, float)
        k = self.alpha * (self.gamma + 1.0)
        a = math.log(self.C_mid) + self.v * t - r / (self.C0 * t ** self.gamma)
        b = math.log(self.C_alg) + k * np.log(t) - self.alpha * math.log(r)
        return np.logaddexp(a, b)

    def log_value(self, r, t):
        _check_r(r)
        r = float(r)
        t = np.asarray(t, float)
        if np.any(t < 0):
            raise DomainError("time must be nonnegative")
        tp, t0 = self.t_prime, self.t0(r)
        floor = self._log_short(r, min(tp, t0))
        with np.errstate(divide="ignore"):
            mid = np.maximum(self._log_mid(r, np.maximum(t, 1e-300)), floor)
        out = np.where(t <= tp, self._log_short(r, t), mid)
        out = np.where(t > t0, math.log(self.cap), out)
        return np.minimum(out, math.log(self.cap))

    def saturation_time(self, r):
        return self.t0(r)

    def crossovers(self, r):
        return sorted({min(self.t_prime, self.t0(r)), self.t0(r)})

    def timescale(self, r):
        return max(self.t0(r), 1.0 / self.v)

    def log_closed_form(self, r, y):
        """Three-piece closed form; each piece also capped by cap * (time window)."""
        r = float(r)
        y = np.asarray(y, float)
        tp, t0 = self.t_prime, self.t0(r)
        tA = min(tp, t0)
        lcap = math.log(self.cap)
        # short-time piece, exact, and never more than cap (1 - e^{-y tA}) / y
        p1 = (math.log(self.C_short) - self.alpha * math.log(r)
              + (self.v_prime - y) * tA + _log_exprel(self.v_prime - y, tA))
        p1 = np.minimum(p1, lcap + _log_exprel(y, tA))
        terms = [p1]
        if t0 > tp:
            win = -y * tp + _log_exprel(y, t0 - tp)  # ln int_{t'}^{t0} e^{-yt} dt
            peak = np.logaddexp(math.log(self.C_mid) + self.v * t0 - r / (self.C0 * t0 ** self.gamma),
                                self._log_short(r, tp))
            k = self.alpha * (self.gamma + 1.0)
            alg = (math.log(self.C_alg) - self.alpha * math.log(r)
                   + special.gammaln(k + 1.0) - (k + 1.0) * np.log(y))
            terms.append(np.minimum(np.logaddexp(peak + win, alg), lcap + win))
        terms.append(lcap - y * t0 - np.log(y))
        total = np.logaddexp.reduce(np.stack(terms), axis=0)
        return np.minimum(total, lcap - np.log(y))

    def convexity_ok(self, r_samples=(10.0, 1e3, 1e6), n=200):
        return _mid_exponential_convex(self, self.C0, r_samples, n)


def _mid_exponential_convex(kernel, C0, r_samples, n):
    """Second differences of e^{vt - r/(C0 t^gamma)} on [t', t0(r)] are >= 0."""
    g = kernel.gamma
    for r in r_samples:
        t0 = (r / (6.0 * kernel.v * C0)) ** (1.0 / (g + 1.0))
        tp = kernel.t_prime
        if t0 <= tp:
            continue
        t = np.linspace(tp, t0, n)
        logh = kernel.v * t - r / (C0 * t ** g)
        # scale-free second difference: exp(log h_i - log h_mid)
        l0, l1, l2 = logh[:-2], logh[1:-1], logh[2:]
        with np.errstate(over="ignore"):
            d2 = np.exp(l0 - l1) + np.exp(l2 - l1) - 2.0
        if np.any(d2 < -1e-12):
            return False
    return True


def select_C0(kernel):
    for C0 in AlgebraicLightcone.C0_GRID:
        if _mid_exponential_convex(kernel, C0, (10.0, 1e3, 1e6), 200):
            return C0
    raise DomainError("no C0 in the grid makes the intermediate stage convex")


@dataclass(frozen=True)
class KappaFamily:
    """inf over kappa > 0 of C e^{omega(kappa) t - kappa r}, capped.

    ``omega`` maps kappa to the (model-specific) growth rate; it is looked up
    by name in ``DISPERSIONS`` when the kernel comes from JSON. Any single
    kappa gives a valid bound, so minimizing over a finite grid stays valid.
    """

    omega: Callable[[np.ndarray], np.ndarray]
    C: float = 1.0
    cap: float | None = None
    kappa_grid: tuple = field(default=tuple(np.geomspace(1e-3, 20.0, 400)))
    dispersion: str | None = None
    params: dict | None = None
    variant: ClassVar[str] = "KappaFamily"

    def __post_init__(self):
        _check_positive(C=self.C)
        if self.cap is not None:
            _check_positive(cap=self.cap)
        k = np.asarray(self.kappa_grid, float)
        if np.any(k <= 0):
            raise DomainError("kappa grid must be positive")
        if np.any(np.asarray(self.omega(k)) <= 0):
            raise DomainError("omega(kappa) must be positive")

    cap_value = property(lambda self: self.C if self.cap is None else self.cap)

    def _kappas(self):
        k = np.asarray(self.kappa_grid, float)
        return k, np.asarray(self.omega(k), float)

    def log_value(self, r, t):
        _check_r(r)
        t = np.asarray(t, float)
        if np.any(t < 0):
            raise DomainError("time must be nonnegative")
        k, w = self._kappas()
        expo = np.min(np.multiply.outer(t, w) - k * float(r), axis=-1)
        return np.minimum(math.log(self.cap_value), math.log(self.C) + expo)

    def as_exponential(self, kappa):
        w = float(self.omega(np.array([kappa]))[0])
        return Exponential(C=self.C, mu=kappa, v=w / kappa, cap=self.cap_value)

    def saturation_time(self, r):
        # kernel saturates once every kappa-bound exceeds the cap
        k, w = self._kappas()
        return float(np.max((math.log(self.cap_value / self.C) + k * float(r)).clip(0) / w))

    def crossovers(self, r):
        k, w = self._kappas()
        times = (math.log(self.cap_value / self.C) + k * float(r)).clip(0) / w
        return sorted(set(np.quantile(times, [0.0, 0.25, 0.5, 0.75, 1.0]).tolist()))

    def timescale(self, r):
        k, w = self._kappas()
        return float(np.median((math.log(self.cap_value / self.C) + k * float(r)).clip(0) / w))

    def log_closed_form(self, r, y):
        y = np.asarray(y, float)
        k = np.asarray(self.kappa_grid, float)[::8]
        vals = np.stack([self.as_exponential(kk).log_closed_form(r, y) for kk in k])
        return vals.min(axis=0)


DISPERSIONS: dict[str, Callable] = {
    # omega(i kappa) = a sinh(kappa) + b, e.g. a nearest-neighbour chain
    "sinh": lambda p: (lambda k: p.get("a", 2.0) * np.sinh(k) + p.get("b", 0.0)),
    # omega(i kappa) = a cosh(kappa), strictly positive for a > 0
    "cosh": lambda p: (lambda k: p.get("a", 2.0) * np.cosh(k)),
}

LrbKernel = HastingsKoma | AlgebraicLightcone | Exponential | KappaFamily

_VARIANTS = {cls.variant: cls for cls in (HastingsKoma, AlgebraicLightcone, Exponential, KappaFamily)}


def kernel_to_dict(kernel) -> dict:
    if isinstance(kernel, KappaFamily):
        if kernel.dispersion is None:
            raise DomainError("only KappaFamily kernels built from a named dispersion serialize")
        return {"variant": kernel.variant, "C": kernel.C, "cap": kernel.cap,
                "dispersion": kernel.dispersion, "params": dict(kernel.params or {})}
    d = asdict(kernel)
    return {"variant": kernel.variant, **d}


def kernel_from_dict(d: dict):
    d = dict(d)
    variant = d.pop("variant", None)
    if variant not in _VARIANTS:
        raise DomainError(f"unknown kernel variant {variant!r}")
    if variant == "KappaFamily":
        name = d.pop("dispersion")
        params = d.pop("params", {}) or {}
        if name not in DISPERSIONS:
            raise DomainError(f"unknown dispersion {name!r}")
        return KappaFamily(omega=DISPERSIONS[name](params), dispersion=name, params=params, **d)
    return _VARIANTS[variant](**d)


def eval_lrb(kernel, r, t):
    """C(r, t) for the given kernel (vectorized over t)."""
    _check_r(r)
    return np.exp(kernel.log_value(r, t))


class OmegaBarEnvelope:
    """Laplace envelope Omega-bar(r, y) = int_0^inf C(r, t) e^{-yt} dt.

    Values are immutable after construction; evaluation is vectorized in y.
    """

    def __init__(self, kernel, r, mode=NUMERIC, rtol=1e-10):
        _check_r(r)
        if mode not in (NUMERIC, CLOSED_FORM):
            raise DomainError(f"unknown envelope mode {mode!r}")
        self.kernel = kernel
        self.r = float(r)
        self.mode = mode
        self.rtol = rtol
        self.crossovers = tuple(kernel.crossovers(self.r))
        self.saturation = float(kernel.saturation_time(self.r))
        self.cap = float(kernel.cap_value)

    def __repr__(self):
        return f"OmegaBarEnvelope({self.kernel!r}, r={self.r}, mode={self.mode!r})"

    @property
    def timescale(self):
        return self.kernel.timescale(self.r)

    def log(self, y):
        y = np.atleast_1d(np.asarray(y, float))
        if np.any(~(y > 0)):
            raise DomainError("spectral parameter y must be > 0")
        if self.mode == CLOSED_FORM:
            return self.kernel.log_closed_form(self.r, y)
        return self._log_numeric(y)

    def __call__(self, y):
        out = np.exp(self.log(y))
        return out[0] if np.ndim(y) == 0 else out

    def log_y_times(self, y):
        """ln(y * Omega-bar(y)); bounded as y -> 0 for every kernel."""
        y = np.atleast_1d(np.asarray(y, float))
        return self.log(y) + np.log(y)

    def _log_numeric(self, y):
        T = self.saturation
        edges = sorted({0.0, *[c for c in self.crossovers if 0.0 < c < T], T})
        logs = [math.log(self.cap) - y * T - np.log(y)]  # analytic tail
        r = self.r
        for lo, hi in zip(edges[:-1], edges[1:]):
            if hi <= lo:
                continue
            # scale each column by a sampled maximum so nothing under/overflows
            ts = np.linspace(lo, hi, 65)
            # the peak of C e^{-yt} can sit near lo + 1/y, between grid samples
            te = np.clip(lo + np.multiply.outer(np.array([0.5, 1.0, 2.0, 4.0]), 1.0 / y), lo, hi)
            with np.errstate(divide="ignore"):
                shift = np.max(self.kernel.log_value(r, ts)[:, None] - np.multiply.outer(ts, y), axis=0)
                ext = self.kernel.log_value(r, te.ravel()).reshape(te.shape) - te * y
                shift = np.maximum(shift, ext.max(axis=0))
            shift = np.where(np.isfinite(shift), shift, 0.0)

            def integrand(t, shift=shift):
                lv = self.kernel.log_value(r, t)
                return np.exp(lv[:, None] - np.multiply.outer(t, y) - shift[None, :])

            val = gk_integrate(integrand, lo, hi, rtol=self.rtol * 0.1, atol=0.0)
            with np.errstate(divide="ignore"):
                logs.append(np.log(np.maximum(val, 0.0)) + shift)
        return np.logaddexp.reduce(np.stack(logs), axis=0)


def omega_bar(env: OmegaBarEnvelope, y):
    """Envelope value at spectral parameter y > 0 (scalar or array)."""
    return env(y)


# reproducing-function constants ------------------------------------------------

@dataclass(frozen=True)
class HKConstants:
    """Lieb-Robinson constants for interactions with sum ||h_X|| <= h0 / d^alpha.

    ``C`` is the prefactor per unit ||S|| ||V|| |X| |Y|, ``v`` the growth rate;
    the certified bound for observables S_X and V_Y is

        ||[S(t), V]|| <= min{ C ||S|| ||V|| |X| |Y| (e^{vt} - 1) / r^alpha,
                              2 ||S|| ||V|| }.
    """

    C: float
    v: float
    reproducing_constant: float
    interaction_norm: float
    lattice_sum: float
    formula: str

    def kernel(self, norm_S, norm_V, size_X=1, size_Y=1, alpha=None, D=1):
        cap = 2.0 * norm_S * norm_V
        return HastingsKoma(C=self.C * norm_S * norm_V * size_X * size_Y, v=self.v,
                            alpha=alpha, D=D, cap=cap, smooth=True)


def _ball_measure_derivative(D, metric):
    if metric == "euclidean":
        return D * math.pi ** (D / 2) / math.gamma(D / 2 + 1)
    if metric == "graph":
        return 2.0 ** D / math.factorial(D - 1)
    raise DomainError(f"unknown metric {metric!r}")


def lattice_power_sum(alpha, D, *, shift=1.0, exclude_origin=False, metric="euclidean",
                      cutoff=None):
    """Upper bound on sum_{k in Z^D} (shift + |k|)^{-alpha} (direct sum + integral tail)."""
    if not alpha > D:
        raise DomainError(f"lattice sum diverges for alpha <= D ({alpha} <= {D})")
    if D == 1 and metric in ("euclidean", "graph"):
        # sum over k in Z of (shift + |k|)^{-alpha}
        s = 2.0 * special.zeta(alpha, shift) - shift ** (-alpha)
        if exclude_origin:
            s -= shift ** (-alpha)
        return float(s)
    K = cutoff or max(40, int(60 / (alpha - D)))
    ax = np.arange(-K, K + 1)
    grids = np.meshgrid(*([ax] * D), indexing="ij")
    if metric == "euclidean":
        dist = np.sqrt(sum(g.astype(float) ** 2 for g in grids))
    else:
        dist = sum(np.abs(g).astype(float) for g in grids)
    inside = dist < K
    if exclude_origin:
        inside &= dist > 0
    total = math.fsum(((shift + dist[inside]) ** (-alpha)).tolist())
    # tail: each lattice point owns a unit cell within half-diameter s of it
    s = math.sqrt(D) / 2 if metric == "euclidean" else D / 2
    dens = _ball_measure_derivative(D, metric)
    from scipy.integrate import quad
    tail, _ = quad(lambda rho: dens * rho ** (D - 1) * (shift + rho - s) ** (-alpha),
                   K - s, np.inf, epsabs=0, epsrel=1e-12)
    return total + tail


def derive_hk_constants(h0, alpha, D=1, metric="euclidean") -> HKConstants:
    """Conservative (C, v) from the reproducing function F(d) = (1 + d)^{-alpha}.

    With ||Phi||_F = sup_{i != j} sum_{X > {i,j}} ||h_X|| / F(d_ij) and
    C_F = sup_{i,j} sum_k F(d_ik) F(d_kj) / F(d_ij):

        ||[A(t), B]|| <= (2 ||A|| ||B|| / C_F) (e^{2 ||Phi||_F C_F |t|} - 1) sum F(d_xy).

    Bounds used: d^{-alpha} <= 2^alpha (1+d)^{-alpha} for d >= 1, the i = j term
    sum_{j != i} h0 d^{-alpha}, and C_F <= 2^{alpha+1} sum_{k in Z^D} F(|k|).
    On-site terms drop out (interaction picture). Returns C = 2 / C_F and
    v = 2 ||Phi||_F C_F; h0 = 0 yields C = v = 0.
    """
    if h0 < 0:
        raise DomainError("h0 must be nonnegative")
    if not alpha > D:
        raise DomainError(f"reproducing series diverges for alpha <= D ({alpha} <= {D})")
    F_sum = lattice_power_sum(alpha, D, shift=1.0, metric=metric)
    diag_sum = lattice_power_sum(alpha, D, shift=0.0, exclude_origin=True, metric=metric) \
        if D > 1 else 2.0 * float(special.zeta(alpha))
    C_F = 2.0 ** (alpha + 1.0) * F_sum
    phi_per_h0 = max(2.0 ** alpha, diag_sum)
    formula = ("C_F = 2^(alpha+1) * sum_k (1+|k|)^-alpha; ||Phi||_F = h0 * max(2^alpha, "
               "sum_{k!=0} |k|^-alpha); C = 2/C_F; v = 2 ||Phi||_F C_F")
    if h0 == 0:
        return HKConstants(0.0, 0.0, C_F, 0.0, F_sum, formula)
    phi = h0 * phi_per_h0
    return HKConstants(C=2.0 / C_F, v=2.0 * phi * C_F, reproducing_constant=C_F,
                       interaction_norm=phi, lattice_sum=F_sum, formula=formula)
