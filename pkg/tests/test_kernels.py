import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from locbounds.errors import DomainError
from locbounds.kernels import (CLOSED_FORM, DISPERSIONS, NUMERIC, AlgebraicLightcone, Exponential,
                               HastingsKoma, KappaFamily, OmegaBarEnvelope, derive_hk_constants,
                               eval_lrb, kernel_from_dict, kernel_to_dict, lattice_power_sum)

mp.mp.dps = 30


def mp_laplace(kernel, r, y):
    """Independent oracle: int_0^inf C(r, t) e^{-yt} dt in mpmath with the kink as a breakpoint."""
    T = kernel.saturation_time(r)
    f = lambda t: mp.exp(float(kernel.log_value(r, np.array([float(t)]))[0])) * mp.exp(-y * t)
    head = mp.quad(f, [0, T / 2, T]) if T > 0 else mp.mpf(0)
    return float(head + kernel.cap_value * mp.exp(-y * T) / y)


@pytest.mark.parametrize("smooth", [False, True])
@pytest.mark.parametrize("r", [1.0, 10.0, 1e3])
def test_hk_numeric_matches_mpmath(smooth, r):
    k = HastingsKoma(C=1.3, v=0.7, alpha=3.0, cap=2.0, smooth=smooth)
    env = OmegaBarEnvelope(k, r, NUMERIC)
    for y in (0.01, 0.5, 0.7, 3.0, 50.0):
        assert env(y) == pytest.approx(mp_laplace(k, r, y), rel=1e-9)


@pytest.mark.parametrize("r", [1.0, 10.0, 1e3, 1e6])
def test_hk_smooth_closed_form_is_exact(r):
    k = HastingsKoma(C=1.3, v=0.7, alpha=3.0, cap=2.0, smooth=True)
    num = OmegaBarEnvelope(k, r, NUMERIC)
    cf = OmegaBarEnvelope(k, r, CLOSED_FORM)
    y = np.geomspace(1e-3, 1e3, 41)
    np.testing.assert_allclose(cf.log(y), num.log(y), rtol=0, atol=1e-8)


def test_hk_plain_closed_form_dominates_exact():
    k = HastingsKoma(C=1.0, v=1.0, alpha=3.0)
    for r in (1.0, 10.0, 1e4):
        num = OmegaBarEnvelope(k, r, NUMERIC)
        cf = OmegaBarEnvelope(k, r, CLOSED_FORM)
        y = np.geomspace(1e-3, 1e3, 61)
        assert np.all(cf.log(y) >= num.log(y) - 1e-10)


def test_exponential_matches_mpmath():
    k = Exponential(C=1.0, mu=0.8, v=1.5, cap=1.0)
    for r in (1.0, 5.0, 30.0):
        env = OmegaBarEnvelope(k, r, NUMERIC)
        for y in (0.1, 1.0, 10.0):
            assert env(y) == pytest.approx(mp_laplace(k, r, y), rel=1e-9)


def test_algebraic_lightcone_monotone_and_closed_form_dominates():
    k = AlgebraicLightcone(alpha=5.0, D=1)
    assert k.convexity_ok()
    for r in (10.0, 1e3, 1e5):
        t = np.linspace(0, 2 * k.saturation_time(r), 2001)
        lv = k.log_value(r, t)
        assert np.all(np.diff(lv) >= -1e-12)
        num = OmegaBarEnvelope(k, r, NUMERIC)
        cf = OmegaBarEnvelope(k, r, CLOSED_FORM)
        y = np.geomspace(1e-4, 1e2, 31)
        assert np.all(cf.log(y) >= num.log(y) - 1e-9)


def test_kappa_family_below_every_member():
    k = KappaFamily(omega=DISPERSIONS["sinh"]({"a": 2.0}), C=1.0, cap=1.0, dispersion="sinh",
                    params={"a": 2.0})
    t = np.linspace(0, 20, 101)
    for kappa in (0.1, 1.0, 3.0):
        member = k.as_exponential(kappa)
        assert np.all(k.log_value(7.0, t) <= member.log_value(7.0, t) + 1e-12)


@pytest.mark.parametrize("kernel", [
    HastingsKoma(C=1.0, v=1.0, alpha=3.0, cap=2.0, smooth=True),
    Exponential(C=1.0, mu=1.0, v=1.0),
    AlgebraicLightcone(alpha=5.0),
    KappaFamily(omega=DISPERSIONS["cosh"]({"a": 1.5}), dispersion="cosh", params={"a": 1.5}),
])
def test_dict_round_trip(kernel):
    back = kernel_from_dict(kernel_to_dict(kernel))
    assert kernel_to_dict(back) == kernel_to_dict(kernel)
    t = np.linspace(0, 10, 11)
    np.testing.assert_array_equal(back.log_value(5.0, t), kernel.log_value(5.0, t))


def test_schema_validates_round_trip():
    jsonschema = pytest.importorskip("jsonschema")
    import json
    from pathlib import Path
    schema = json.loads((Path(__file__).parents[1] / "docs" / "kernel_schema.json").read_text())
    for k in (HastingsKoma(), Exponential(), AlgebraicLightcone(),
              KappaFamily(omega=DISPERSIONS["sinh"]({}), dispersion="sinh", params={})):
        jsonschema.validate(kernel_to_dict(k), schema)


def test_domain_errors():
    with pytest.raises(DomainError):
        HastingsKoma(alpha=1.0, D=1)
    with pytest.raises(DomainError):
        AlgebraicLightcone(alpha=2.0, D=1)
    with pytest.raises(DomainError):
        eval_lrb(HastingsKoma(), 0.5, [0.0])
    with pytest.raises(DomainError):
        OmegaBarEnvelope(HastingsKoma(), 3.0, NUMERIC).log([0.0])
    with pytest.raises(DomainError):
        OmegaBarEnvelope(HastingsKoma(), 3.0, "spline")
    with pytest.raises(DomainError):
        kernel_from_dict({"variant": "Gaussian"})
    with pytest.raises(DomainError):
        derive_hk_constants(-1.0, 3.0)


def test_lattice_power_sum_against_brute_force():
    # D = 1 uses the Hurwitz zeta, D = 2 a direct sum plus a tail bound
    brute = 1.0 + 2.0 * math.fsum((1.0 + k) ** -3.0 for k in range(1, 2_000_000))
    assert lattice_power_sum(3.0, 1) == pytest.approx(brute, rel=1e-10)
    ax = np.arange(-400, 401)
    X, Y = np.meshgrid(ax, ax)
    d = np.sqrt(X ** 2.0 + Y ** 2.0)
    brute2 = float(np.sum((1.0 + d) ** -4.0))
    ub = lattice_power_sum(4.0, 2)
    assert brute2 <= ub <= brute2 * 1.01


def test_hk_constants_scale_with_h0():
    a = derive_hk_constants(1.0, 3.0)
    b = derive_hk_constants(2.0, 3.0)
    assert a.C == pytest.approx(b.C)
    assert b.v == pytest.approx(2.0 * a.v)
    zero = derive_hk_constants(0.0, 3.0)
    assert zero.C == 0.0 and zero.v == 0.0


@given(st.floats(1.0, 1e5), st.floats(0.2, 5.0), st.floats(2.0, 6.0),
       st.floats(1e-3, 1e2), st.booleans())
def test_envelope_properties(r, v, alpha, y, smooth):
    k = HastingsKoma(C=1.0, v=v, alpha=alpha, cap=2.0, smooth=smooth)
    ys = np.array([y, 2.0 * y])
    exact = OmegaBarEnvelope(k, r, CLOSED_FORM if smooth else NUMERIC)
    lv = exact.log(ys)
    # exact transform: nonincreasing in y, never above cap / y
    assert lv[1] <= lv[0] + 1e-12
    assert np.all(exact.log_y_times(ys) <= math.log(2.0) + 1e-9)
    if not smooth:
        # the piecewise closed form only has to dominate it
        cf = OmegaBarEnvelope(k, r, CLOSED_FORM).log(ys)
        assert np.all(cf >= lv - 1e-9)


@given(st.floats(1.0, 1e4), st.floats(0.0, 50.0))
def test_kernel_capped_and_nondecreasing(r, t):
    for k in (HastingsKoma(cap=2.0, smooth=True), Exponential(), AlgebraicLightcone(alpha=5.0)):
        a, b = k.log_value(r, np.array([t, t + 0.5]))
        assert b >= a - 1e-12
        assert b <= math.log(k.cap_value) + 1e-15
