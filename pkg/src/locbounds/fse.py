"""Finite-size-error bounds: convolution sums, their asymptotic class and alpha3."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from . import backend
from .errors import DomainError


@dataclass(frozen=True)
class ConvolutionSpec:
    """sum_{r=1}^{R-1} P(ln r) / (r^zeta (R - r)^eta), P with nonnegative coefficients."""

    R: int
    zeta: float
    eta: float
    poly: tuple = (1.0,)

    def __post_init__(self):
        if int(self.R) != self.R or self.R < 2:
            raise DomainError("R must be an integer >= 2")
        if not 0 < self.eta <= self.zeta:
            raise DomainError(f"need 0 < eta <= zeta, got eta={self.eta}, zeta={self.zeta}")
        _check_poly(self.poly)


def _check_poly(poly):
    if len(poly) == 0 or any(c < 0 for c in poly):
        raise DomainError("polynomial coefficients must be nonnegative")


def _polyval(poly, x):
    return float(np.polynomial.polynomial.polyval(x, np.asarray(poly, float)))


def convolution_sum_exact(spec: ConvolutionSpec) -> float:
    return float(backend.conv_sum(float(spec.zeta), float(spec.eta), int(spec.R),
                                  np.asarray(spec.poly, float)))


@dataclass(frozen=True)
class ConvolutionClass:
    exponent: float  # the sum behaves like P(ln R) R^exponent
    label: str
    degree_bump: bool
    poly_degree: int

    def value(self, R, poly) -> float:
        lr = math.log(R)
        v = _polyval(poly, lr) * R ** self.exponent
        return v * (1.0 + lr) if self.degree_bump else v


def convolution_class(zeta: float, eta: float, poly_degree: int = 0) -> ConvolutionClass:
    """Growth class of the two-sided convolution for any real zeta, eta > 0.

    Each endpoint contributes R^{-other} times the partial sum of its own power,
    which is O(1) above 1, ln R at exactly 1 and R^{1-p} below 1.
    """
    end_r = -eta + max(0.0, 1.0 - zeta)
    end_R = -zeta + max(0.0, 1.0 - eta)
    exponent = max(end_r, end_R)
    bump = (zeta == 1.0 and end_r >= end_R) or (eta == 1.0 and end_R >= end_r)
    if exponent == -eta and zeta >= 1:
        label = f"R^-{eta:g}"
    else:
        label = f"R^{exponent:g}"
    return ConvolutionClass(exponent, label, bump, poly_degree + int(bump))


def convolution_asymptotic(spec: ConvolutionSpec) -> ConvolutionClass:
    """Growth class: R^-eta for zeta >= 1, R^{1-eta-zeta} for zeta < 1."""
    return convolution_class(spec.zeta, spec.eta, len(spec.poly) - 1)


@dataclass(frozen=True)
class Alpha3Result:
    value: float
    branch: str
    both_branches: dict = field(default_factory=dict)


def alpha3_detail(alpha: float, alpha1: float, D: int, two_body: bool = False) -> Alpha3Result:
    if not alpha > D:
        raise DomainError(f"alpha3 needs alpha > D, got alpha={alpha}, D={D}")
    if two_body and alpha > 2 * D:
        return Alpha3Result(alpha - D, "two-body")
    high = min(alpha - D, alpha1 + 1 - D)
    low = (alpha - D) if alpha1 > D else (alpha1 + alpha - 2 * D)
    if alpha > D + 1:
        return Alpha3Result(high, "alpha>D+1", {"alpha>D+1": high})
    both = {"D<alpha<=D+1": low}
    if alpha == D + 1:
        both["alpha>D+1"] = high
    return Alpha3Result(low, "D<alpha<=D+1", both)


def alpha3(alpha: float, alpha1: float, D: int, two_body: bool = False) -> float:
    return alpha3_detail(alpha, alpha1, D, two_body).value


def mu3_exponential(mu1: float) -> float:
    return mu1


@dataclass(frozen=True)
class FseValue:
    exact: float
    asymptotic: float
    klass: ConvolutionClass
    ratio: float


def fse_bound_1d(L: int, alpha: float, alpha1: float, poly=(1.0,)) -> FseValue:
    """sum_{i=1}^{R+1} P(ln i) i^-alpha1 (R+2-i)^(1-alpha), R = L/2, and its class value."""
    if int(L) != L or L < 2 or L % 2:
        raise DomainError("L must be an even integer >= 2")
    _check_poly(poly)
    R = L // 2
    exact = float(backend.fse_sum_1d(float(alpha), float(alpha1), int(R), np.asarray(poly, float)))
    klass = convolution_class(alpha1, alpha - 1.0, len(poly) - 1)
    asym = klass.value(R + 2, poly)
    return FseValue(exact, asym, klass, exact / asym)


def fse_bound_sphere(R: int, alpha: float, alpha1: float, D: int, poly=(1.0,)) -> FseValue:
    """Radial reduction sum_{r=1}^{R-1} P(ln r) / (r^{alpha1-D+1} (R-r)^{alpha-D})."""
    if int(R) != R or R < 2:
        raise DomainError("R must be an integer >= 2")
    if not alpha > D:
        raise DomainError("need alpha > D")
    _check_poly(poly)
    zeta, eta = alpha1 - D + 1.0, alpha - D
    exact = float(backend.conv_sum(zeta, eta, int(R), np.asarray(poly, float)))
    klass = convolution_class(zeta, eta, len(poly) - 1)
    asym = klass.value(R, poly)
    return FseValue(exact, asym, klass, exact / asym)


@dataclass(frozen=True)
class LatticeSphereSum:
    lattice_sum: float
    radial_sum: float
    absorbed_constant: float
    outer_radius: float
    tail_bound: float


def sphere_lattice_sum(R: int, alpha: float, alpha1: float, D: int, poly=(1.0,),
                       outer_radius: float | None = None) -> LatticeSphereSum:
    """Direct double sum over x in the ball |x| < R and z outside it.

    The weight is P(ln |x|) |x|^-alpha1 |z - x|^-alpha with |x| clamped to 1
    at the origin; z is truncated at ``outer_radius`` and the rest bounded by
    an integral. The ratio to the radial sum is the constant that the radial
    reduction absorbs into P.
    """
    if not alpha > D:
        raise DomainError("need alpha > D")
    Rout = float(outer_radius or 20 * R)
    K = int(math.ceil(Rout))
    ax = np.arange(-K, K + 1, dtype=float)
    pts = np.stack(np.meshgrid(*([ax] * D), indexing="ij"), -1).reshape(-1, D)
    rad = np.linalg.norm(pts, axis=1)
    inside = pts[rad < R]
    outside = pts[(rad >= R) & (rad <= Rout)]
    coeffs = np.asarray(poly, float)
    total = float(backend.pair_sum(np.ascontiguousarray(inside), np.ascontiguousarray(outside),
                                   float(alpha), float(alpha1), coeffs))
    # tail: every z with |z| > Rout sits at distance >= g0 = Rout - R from x;
    # sum_{|u| >= g0} |u|^-alpha <= area int_{g0-2s}^inf (q+s)^{D-1} q^-alpha dq
    s = math.sqrt(D) / 2.0
    area = D * math.pi ** (D / 2) / math.gamma(D / 2 + 1)
    q1 = Rout - R - 2.0 * s
    shell, _ = integrate.quad(lambda q: (q + s) ** (D - 1) * q ** (-alpha), q1, np.inf)
    rx = np.maximum(np.linalg.norm(inside, axis=1), 1.0)
    w = np.polynomial.polynomial.polyval(np.log(rx), coeffs) * rx ** -alpha1
    tail = float(w.sum() * area * shell)
    radial = fse_bound_sphere(R, alpha, alpha1, D, poly).exact
    return LatticeSphereSum(total, radial, total / radial, Rout, tail)
