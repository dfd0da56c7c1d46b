import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from robindisc.errors import NoConvergence, PoleParameter
from robindisc.specfun import (SeriesAccuracy, bessel_i, bessel_i_prime, kummer_m,
                               kummer_m_dz, kummer_series)


def test_kummer_at_zero_is_one():
    assert kummer_m(0.7, 2.3, 0.0) == 1.0


def test_kummer_equal_parameters_is_exp():
    assert kummer_m(1, 1, 1) == pytest.approx(math.e, rel=1e-14)


def test_kummer_polynomial_case():
    assert kummer_m(-1, 2, 1) == pytest.approx(0.5, abs=1e-15)


def test_kummer_dz_basic():
    assert kummer_m_dz(1, 1, 0) == pytest.approx(1.0)
    assert kummer_m_dz(-1, 2, 5) == pytest.approx(-0.5, abs=1e-15)


def test_kummer_dz_matches_central_difference():
    step = 1e-6
    fd = (kummer_m(0.3, 1.7, 0.9 + step) - kummer_m(0.3, 1.7, 0.9 - step)) / (2 * step)
    assert kummer_m_dz(0.3, 1.7, 0.9) == pytest.approx(fd, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.1, 5), c=st.floats(0.1, 5), z=st.floats(0.1, 5))
def test_contiguous_identity(a, c, z):
    step = 1e-5
    fd = (kummer_m(a, c, z + step) - kummer_m(a, c, z - step)) / (2 * step)
    assert abs(kummer_m_dz(a, c, z) - fd) <= 1e-7 * max(1.0, abs(fd))


@pytest.mark.parametrize("a,c,z", [(0.5, 1.0, 3.0), (-2.7, 2.0, 16.0), (-7.3, 4.0, 32.0), (3.1, 1.5, 20.0)])
def test_kummer_against_scipy(a, c, z):
    assert kummer_m(a, c, z) == pytest.approx(special.hyp1f1(a, c, z), rel=1e-10)


@pytest.mark.parametrize("k", range(0, 7))
def test_polynomial_truncation_term_count(k):
    value, n_terms = kummer_series(-k, 1.5, 2.0)
    assert n_terms == k + 1
    assert value == pytest.approx(float(mpmath.hyp1f1(-k, 1.5, 2.0)), rel=1e-13)


@pytest.mark.parametrize("c", [0.0, -1.0, -3.0])
def test_pole_parameter(c):
    with pytest.raises(PoleParameter):
        kummer_m(0.5, c, 1.0)


def test_no_convergence_reported():
    with pytest.raises(NoConvergence):
        kummer_m(0.5, 1.0, 30.0, SeriesAccuracy(max_terms=10))


def test_series_accuracy_validation():
    with pytest.raises(ValueError):
        SeriesAccuracy(rel_tol=0.0)
    with pytest.raises(ValueError):
        SeriesAccuracy(max_terms=5)


def test_bessel_small_values():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0


def test_bessel_high_precision_oracle():
    mpmath.mp.dps = 30
    ref = float(mpmath.besseli(0, 2))
    assert bessel_i(0, 2.0) == pytest.approx(ref, rel=1e-14)
    assert ref == pytest.approx(2.2795853023360673, rel=1e-15)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0])
def test_bessel_derivative_relation(x):
    step = 1e-5
    fd = (bessel_i(0, x + step) - bessel_i(0, x - step)) / (2 * step)
    assert bessel_i(1, x) == pytest.approx(fd, abs=1e-10 * max(1, abs(fd)) + 1e-10)
    assert bessel_i_prime(0, x) == pytest.approx(bessel_i(1, x), rel=1e-14)


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_bessel_against_scipy(n):
    for x in (0.3, 4.0, 20.0, 40.0):
        assert bessel_i(n, x) == pytest.approx(special.iv(n, x), rel=1e-12)


def test_outputs_finite_on_parameter_box():
    for a in np.linspace(-20, 10, 13):
        for z in (0.0, 8.0, 32.0):
            assert np.isfinite(kummer_m(a, 4.0, z))
