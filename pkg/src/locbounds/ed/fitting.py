"""Least-squares decay fits on log data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    intercept: float
    stderr: float
    residual: float
    model: str


def fit_decay(points, model: str = "power") -> DecayFit:
    """Fit value ~ A r^-p (``power``) or A e^{-p r} (``exponential``).

    Returns p, ln A, the standard error of p and the rms residual in ln value.
    """
    pts = np.asarray(list(points), float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise DomainError("need at least two (r, value) points")
    r, val = pts[:, 0], pts[:, 1]
    if np.any(val <= 0) or np.any(r <= 0):
        raise DomainError("decay fits need positive r and values")
    if model == "power":
        x = np.log(r)
    elif model == "exponential":
        x = r
    else:
        raise DomainError(f"unknown decay model {model!r}")
    yv = np.log(val)
    A = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(A, yv, rcond=None)
    res = yv - A @ coef
    dof = max(len(x) - 2, 1)
    s2 = float(res @ res) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return DecayFit(-float(coef[0]), float(coef[1]), float(np.sqrt(cov[0, 0])),
                    float(np.sqrt(np.mean(res ** 2))), model)


def fit_power_with_log_envelope(r, log_values, degree_terms=1):
    """Fit ln B = -a ln r + sum_k b_k (ln ln r)^k... reduced to one ln ln r term; returns a.

    Bound curves of the form P(ln r) r^-a carry a polylogarithmic envelope;
    including ln ln r as a regressor removes its leading effect on the slope.
    """
    r = np.asarray(r, float)
    lr = np.log(r)
    cols = [-lr, np.ones_like(lr)]
    if degree_terms >= 1:
        cols.append(np.log(lr))
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, np.asarray(log_values, float), rcond=None)
    return float(coef[0])
