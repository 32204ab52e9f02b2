"""The response function Omega(w) of a finite instance, three ways.

Spectral form (resolvents), time-integral form (Heisenberg evolution) and the
finite-difference derivative of <S>_lambda. Also an instance envelope: the
running maximum of |<[S(t), V]>| turned into a certified kernel, so the
circle-average bounds can be exercised with a tight input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import DomainError
from ..quadrature import gk_integrate
from .models import operator_norm
from .spectral import SpectralData, spectrum


def _dense(A):
    return A.toarray() if sp.issparse(A) else np.asarray(A)


@dataclass(frozen=True)
class ResponseAmplitudes:
    """Omega(w) = sum i a / (w - e) - i b / (w + e) over ground b, excited n.

    ``a = S_bn V_nb / d``, ``b = V_bn S_nb / d`` and ``e = E_n - E_b > 0``.
    ``g_*`` hold the full commutator expansion (every level m) for the time
    domain: <[S(t), V]> = sum g_c exp(-i g_e t) - sum g_d exp(+i g_e t).
    """

    a: np.ndarray
    b: np.ndarray
    e: np.ndarray
    gap: float
    g_c: np.ndarray
    g_d: np.ndarray
    g_e: np.ndarray
    norm_bound: float

    def omega(self, w):
        w = np.asarray(w, complex)
        wv = w[..., None]
        return (1j * self.a / (wv - self.e) - 1j * self.b / (wv + self.e)).sum(-1)

    def commutator(self, t):
        t = np.asarray(t, float)[..., None]
        return (self.g_c * np.exp(-1j * self.g_e * t) - self.g_d * np.exp(1j * self.g_e * t)).sum(-1)

    def lipschitz(self) -> float:
        return float(np.sum(np.abs(self.g_c * self.g_e)) + np.sum(np.abs(self.g_d * self.g_e)))


def response_amplitudes(H, S, V, *, spec: SpectralData | None = None, ground_dim=None):
    sd = spec or spectrum(H, ground_dim=ground_dim)
    if not sd.complete:
        raise DomainError("the response function needs the full spectrum")
    U = sd.vectors
    Sm = U.conj().T @ (_dense(S) @ U)
    Vm = U.conj().T @ (_dense(V) @ U)
    d = sd.ground_dim
    E = sd.energies
    exc = slice(d, None)
    a = (Sm[:d, exc] * Vm[exc, :d].T) / d
    b = (Vm[:d, exc] * Sm[exc, :d].T) / d
    e = E[None, exc] - E[:d, None]
    gc = (Sm[:d, :] * Vm[:, :d].T) / d
    gd = (Vm[:d, :] * Sm[:, :d].T) / d
    ge = E[None, :] - E[:d, None]
    nS = operator_norm(S)
    nV = operator_norm(V)
    return ResponseAmplitudes(a.ravel(), b.ravel(), e.ravel(), sd.gap,
                              gc.ravel(), gd.ravel(), ge.ravel(), 2.0 * nS * nV)


def omega_spectral(H, S, V, omega, *, spec=None, amps=None, tol=1e-12):
    """Spectral (resolvent) form; excludes the whole ground cluster from the resolvent."""
    amp = amps or response_amplitudes(H, S, V, spec=spec)
    w = np.asarray(omega, complex)
    if np.any((np.abs(w.imag) <= tol) & (np.abs(w.real) >= amp.gap - tol)):
        raise DomainError("omega lies on the excluded part of the real axis")
    out = amp.omega(w)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TimeIntegral:
    value: complex
    horizon: float
    tail_bound: float
    quad_error: float


def omega_time_integral(H, S, V, omega, horizon=None, *, spec=None, amps=None,
                        tail_tol=1e-12, rtol=1e-12) -> TimeIntegral:
    """int_0^{sgn(Im w) inf} <[S(t), V]> e^{iwt} dt, truncated with an analytic tail bound."""
    w = complex(omega)
    y = abs(w.imag)
    if y == 0:
        raise DomainError("the time integral needs Im(omega) != 0")
    amp = amps or response_amplitudes(H, S, V, spec=spec)
    cap = amp.norm_bound
    if horizon is None:
        horizon = max(math.log(max(cap, 1e-300) / (y * tail_tol)), 1.0) / y
    eta = 1.0 if w.imag > 0 else -1.0

    def integrand(s):
        t = eta * s
        return amp.commutator(t) * np.exp(1j * w * t) * eta

    # panels of roughly one fastest period keep the adaptive rule efficient
    fmax = float(np.max(np.abs(amp.g_e))) if amp.g_e.size else 1.0
    n0 = int(min(max(horizon * fmax / (2 * math.pi), 1), 2000))
    breaks = np.linspace(0.0, horizon, n0 + 1)[1:-1]
    val, err = gk_integrate(integrand, 0.0, horizon, rtol=rtol, atol=1e-15,
                            breakpoints=breaks, max_panels=200000, full_output=True)
    tail = cap * math.exp(-y * horizon) / y
    return TimeIntegral(complex(val), float(horizon), float(tail), float(np.abs(err)))


def axis_integral(H, S, V, *, spec=None, amps=None, rtol=1e-13) -> complex:
    """int over the imaginary axis of Omega(w) dw (= i int Omega(iy) dy), by y = s tan(phi)."""
    amp = amps or response_amplitudes(H, S, V, spec=spec)
    s = float(np.median(amp.e)) if amp.e.size else 1.0

    def f(phi):
        y = s * np.tan(phi)
        jac = s / np.cos(phi) ** 2
        return 1j * (amp.omega(1j * y) + amp.omega(-1j * y)) * jac

    return complex(gk_integrate(f, 0.0, 0.5 * math.pi, rtol=rtol, atol=1e-15, max_panels=20000))


@dataclass(frozen=True)
class DerivativeCheck:
    lam: float
    step: float
    fd: float
    fd_half: float
    richardson: float
    minus_i_omega0: float
    i_omega0: float
    residual: float
    fd_order: float | None


def expectation_along(H, V, S, lam, ground_dim):
    return spectrum(H + lam * V, ground_dim=ground_dim).expectation(S).real


def dlambda_identity_check(H, V, S, lam: float = 0.0, step: float = 1e-3, *,
                           ground_dim=None) -> DerivativeCheck:
    """Finite-difference d<S>/dlambda against the resolvent expression at lambda.

    For Hermitian S, V the derivative equals -i Omega(0); the opposite sign
    (i Omega(0)) is reported alongside for comparison.
    """
    Hl = H + lam * V
    sd = spectrum(Hl, ground_dim=ground_dim)
    d = sd.ground_dim
    f = lambda x: expectation_along(H, V, S, x, d)  # noqa: E731
    D1 = (f(lam + step) - f(lam - step)) / (2 * step)
    D2 = (f(lam + step / 2) - f(lam - step / 2)) / step
    rich = (4.0 * D2 - D1) / 3.0
    om0 = omega_spectral(Hl, S, V, 0.0, spec=sd)
    exact = float((-1j * om0).real)
    order = None
    e1, e2 = abs(D1 - exact), abs(D2 - exact)
    if e2 > 0 and e1 > 1e3 * np.finfo(float).eps * max(1.0, abs(exact)) / step:
        order = math.log2(e1 / e2)
    return DerivativeCheck(lam, step, D1, D2, rich, exact, float((1j * om0).real),
                           abs(rich - exact), order)


class InstanceKernel:
    """Certified kernel from the running maximum of |<[S(t), V]>| on a grid.

    On [t_k, t_{k+1}] the kernel is max_{j <= k+1} |g(t_j)| + L dt, with L a
    Lipschitz bound of g, so it dominates |g| everywhere; beyond the horizon
    it is the trivial cap 2 ||S|| ||V||.
    """

    variant = "Instance"

    def __init__(self, amps: ResponseAmplitudes, horizon: float, n: int = 4000):
        self.cap_value = amps.norm_bound
        self.T = float(horizon)
        t = np.linspace(0.0, self.T, n + 1)
        g = np.abs(amps.commutator(t))
        dt = t[1] - t[0]
        hull = np.maximum.accumulate(g)[1:] + amps.lipschitz() * dt
        self.t = t
        self.c = np.minimum(hull, self.cap_value)
        half = np.nonzero(self.c >= 0.5 * self.c[-1])[0]
        self._timescale = float(t[half[0] + 1]) if half.size else self.T

    def log_value(self, r, t):
        t = np.asarray(t, float)
        k = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, len(self.c) - 1)
        with np.errstate(divide="ignore"):
            return np.where(t >= self.T, math.log(self.cap_value), np.log(self.c[k]))

    def saturation_time(self, r):
        return self.T

    def crossovers(self, r):
        return [self._timescale]

    def timescale(self, r):
        return self._timescale

    def log_closed_form(self, r, y):
        """Exact transform of the step kernel."""
        y = np.atleast_1d(np.asarray(y, float))
        out = np.empty_like(y)
        t0, dt = self.t[:-1], self.t[1] - self.t[0]
        for s in range(0, len(y), 512):
            yy = y[s:s + 512, None]
            w = np.exp(-yy * t0) * (-np.expm1(-yy * dt))
            tot = w @ self.c + self.cap_value * np.exp(-yy[:, 0] * self.T)
            out[s:s + 512] = np.log(tot) - np.log(yy[:, 0])
        return out
