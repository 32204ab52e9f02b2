"""Pure numpy fallback for the compiled inner loops in _kernels_c."""
import math

import numpy as np


def _poly(coeffs, x):
    return np.polynomial.polynomial.polyval(x, np.asarray(coeffs, float))


def conv_sum(zeta, eta, R, coeffs):
    r = np.arange(1, R, dtype=float)
    terms = _poly(coeffs, np.log(r)) * r ** -zeta * (R - r) ** -eta
    return math.fsum(terms.tolist())


def fse_sum_1d(alpha, alpha1, R, coeffs):
    i = np.arange(1, R + 2, dtype=float)
    terms = _poly(coeffs, np.log(i)) * i ** -alpha1 * (R + 2 - i) ** (1.0 - alpha)
    return math.fsum(terms.tolist())


def pair_sum(inside, outside, alpha, alpha1, coeffs):
    inside = np.asarray(inside, float)
    outside = np.asarray(outside, float)
    rx = np.maximum(np.linalg.norm(inside, axis=1), 1.0)
    w = _poly(coeffs, np.log(rx)) * rx ** -alpha1
    total = []
    for start in range(0, len(inside), 256):
        blk = inside[start:start + 256]
        d2 = ((outside[None, :, :] - blk[:, None, :]) ** 2).sum(-1)
        total.extend((w[start:start + 256] * (d2 ** (-0.5 * alpha)).sum(1)).tolist())
    return math.fsum(total)


def zz_diagonal(J, N):
    J = np.asarray(J, float)
    idx = np.arange(1 << N)
    z = 1 - 2 * ((idx[:, None] >> (N - 1 - np.arange(N))[None, :]) & 1)
    upper = np.triu(J, 1)
    return np.einsum("si,ij,sj->s", z.astype(float), upper, z.astype(float))
