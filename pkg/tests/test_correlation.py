import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from locbounds.correlation import (axis_dominance_check, correlation_bound, direct_axis_bound,
                                   inverse_linear_axis_integral, tail_integral)
from locbounds.ed.instances import two_level
from locbounds.ed.response import response_amplitudes
from locbounds.errors import DomainError, TailDivergenceError
from locbounds.holo import GapModel, log_bound_at_zero
from locbounds.kernels import CLOSED_FORM, NUMERIC, HastingsKoma, OmegaBarEnvelope

SMOOTH = HastingsKoma(C=1.0, v=1.0, alpha=3.0, cap=2.0, smooth=True)
GAP = GapModel(1.0, 1.0)


@given(st.floats(1e-3, 1e3), st.booleans())
def test_inverse_linear_principal_value(mu, neg):
    res = inverse_linear_axis_integral(-mu if neg else mu)
    assert abs(res.numeric - res.exact) < 1e-10


def test_tail_modes_agree_and_match_mpmath():
    for r in (3.0, 100.0):
        num = OmegaBarEnvelope(SMOOTH, r, NUMERIC)
        cf = OmegaBarEnvelope(SMOOTH, r, CLOSED_FORM)
        y0 = 0.4
        ref = mp.quad(lambda y: mp.mpf(float(cf(float(y)))), [y0, 1, 10, 100, mp.inf])
        assert tail_integral(num, y0) == pytest.approx(float(ref), rel=1e-7)
        assert tail_integral(cf, y0) == pytest.approx(float(ref), rel=1e-7)


def test_nonvanishing_kernel_tail_diverges():
    env = OmegaBarEnvelope(HastingsKoma(C=1.0, v=1.0, alpha=3.0), 10.0, NUMERIC)
    with pytest.raises(TailDivergenceError):
        tail_integral(env, 0.5)


def test_split_bound_matches_direct_integral():
    for r in (10.0, 1e3):
        env = OmegaBarEnvelope(SMOOTH, r, NUMERIC)
        B = math.exp(log_bound_at_zero(env, GAP))
        cb = correlation_bound(env, GAP, B)
        assert not cb.y0_fallback
        assert float(env(cb.y0)) == pytest.approx(B, rel=1e-9)
        assert cb.value == pytest.approx(direct_axis_bound(env, GAP, B), rel=1e-9)


def test_y0_is_optimal_split():
    env = OmegaBarEnvelope(SMOOTH, 30.0, NUMERIC)
    B = math.exp(log_bound_at_zero(env, GAP))
    cb = correlation_bound(env, GAP, B)
    for f in (0.5, 2.0):
        y = cb.y0 * f
        other = (2 * y * B + 2 * tail_integral(env, y)) / (2 * math.pi)
        assert cb.value <= other


def test_correlation_bound_decays():
    vals = []
    for r in (10.0, 100.0, 1000.0):
        env = OmegaBarEnvelope(SMOOTH, r, NUMERIC)
        vals.append(correlation_bound(env, GAP, math.exp(log_bound_at_zero(env, GAP))).value)
    assert vals[0] > vals[1] > vals[2] > 0


def test_axis_dominance_two_level():
    H, S, V = two_level(1.0)
    amps = response_amplitudes(H, S, V)
    rep = axis_dominance_check(amps, 2.0, gap=GapModel(1.0, 1.0))
    # |Omega(iy)| = 2 / (1 + y^2), maximal at y = 0
    assert rep.passed and rep.monotone
    assert rep.profile[0] == pytest.approx(2.0)
    assert not axis_dominance_check(amps, 1.9).passed


def test_bad_inputs():
    env = OmegaBarEnvelope(SMOOTH, 10.0, NUMERIC)
    with pytest.raises(DomainError):
        correlation_bound(env, GAP, -1.0)
    with pytest.raises(DomainError):
        inverse_linear_axis_integral(0.0)
    H, S, V = two_level(1.0)
    with pytest.raises(DomainError):
        axis_dominance_check(response_amplitudes(H, S, V), 1.0, y_grid=[])
