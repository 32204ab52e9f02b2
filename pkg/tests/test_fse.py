import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from locbounds.errors import DomainError
from locbounds.fse import (ConvolutionSpec, alpha3, alpha3_detail, convolution_asymptotic,
                           convolution_class, convolution_sum_exact, fse_bound_1d,
                           fse_bound_sphere, mu3_exponential, sphere_lattice_sum)


def mp_conv(R, zeta, eta, poly):
    return float(mp.fsum(mp.polyval(list(reversed(poly)), mp.log(r)) / (mp.mpf(r) ** zeta
                         * mp.mpf(R - r) ** eta) for r in range(1, R)))


@given(st.integers(2, 400), st.floats(0.2, 3.0), st.floats(0.1, 1.0),
       st.lists(st.floats(0.0, 2.0), min_size=1, max_size=3))
def test_convolution_sum_against_mpmath(R, zeta, k, poly):
    eta = zeta * k
    spec = ConvolutionSpec(R, zeta, eta, tuple(poly))
    ref = mp_conv(R, zeta, eta, poly)
    assert convolution_sum_exact(spec) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_integer_exponents_exact_rational():
    R = 30
    ref = sum(Fraction(1, r * r * (R - r)) for r in range(1, R))
    assert convolution_sum_exact(ConvolutionSpec(R, 2, 1)) == pytest.approx(float(ref), rel=1e-15)


@pytest.mark.parametrize("zeta,eta,exp,bump", [
    (2.0, 1.0, -1.0, False),  # the ln R from the R end multiplies R^-2 only
    (1.0, 1.0, -1.0, True),
    (0.5, 0.4, 0.1, False),
    (1.5, 0.7, -0.7, False),
])
def test_class_exponents(zeta, eta, exp, bump):
    k = convolution_class(zeta, eta)
    assert k.exponent == pytest.approx(exp)
    assert k.degree_bump is bump


@pytest.mark.parametrize("zeta,eta", [(2.0, 1.0), (1.0, 1.0), (0.5, 0.4), (1.5, 0.7), (3.0, 2.5)])
def test_ratio_sandwich(zeta, eta):
    ratios = []
    for k in range(3, 18):
        spec = ConvolutionSpec(2 ** k, zeta, eta)
        ratios.append(convolution_sum_exact(spec) / convolution_asymptotic(spec).value(2 ** k, (1.0,)))
    ratios = np.array(ratios)
    assert ratios.max() / ratios.min() < 3.0
    assert np.all(np.abs(np.diff(np.log(ratios))) < math.log(1.5))


def test_fse_1d_brute_force():
    L, a, a1 = 40, 3.0, 2.2
    R = L // 2
    brute = math.fsum(i ** -a1 * (R + 2 - i) ** (1 - a) for i in range(1, R + 2))
    val = fse_bound_1d(L, a, a1)
    assert val.exact == pytest.approx(brute, rel=1e-14)
    assert val.ratio == pytest.approx(val.exact / val.asymptotic)


def test_sphere_lattice_constant_is_bounded():
    consts = [sphere_lattice_sum(R, 4.0, 3.0, 2, outer_radius=8 * R).absorbed_constant
              for R in (4, 8, 16)]
    assert max(consts) / min(consts) < 2.0
    s = sphere_lattice_sum(6, 4.0, 3.0, 2, outer_radius=30)
    assert 0 < s.tail_bound < s.lattice_sum


def test_alpha3_branches():
    assert alpha3(3.0, 2.5, 1) == pytest.approx(min(2.0, 2.5))
    det = alpha3_detail(2.0, 1.5, 1)
    assert det.branch == "D<alpha<=D+1"
    assert set(det.both_branches) == {"D<alpha<=D+1", "alpha>D+1"}
    assert det.value == pytest.approx(1.0)
    assert alpha3(1.5, 0.5, 1) == pytest.approx(0.5 + 1.5 - 2)
    assert alpha3(5.0, 5.0, 1, two_body=True) == 4.0
    assert mu3_exponential(0.7) == 0.7
    with pytest.raises(DomainError):
        alpha3(1.0, 1.0, 1)


def test_domain_errors():
    with pytest.raises(DomainError):
        ConvolutionSpec(10, 0.5, 1.0)
    with pytest.raises(DomainError):
        ConvolutionSpec(1, 2.0, 1.0)
    with pytest.raises(DomainError):
        ConvolutionSpec(10, 2.0, 1.0, (-1.0,))
    with pytest.raises(DomainError):
        fse_bound_1d(7, 3.0, 2.0)
    with pytest.raises(DomainError):
        fse_bound_sphere(10, 2.0, 2.0, 2)
