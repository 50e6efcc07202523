import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from numpy.polynomial import chebyshev as C
from scipy.special import erf, iv

from nffprep.chebyshev import (
    BernsteinEllipse,
    ChebyshevSeries,
    certified_degree,
    dense_grid,
    dense_values,
    erf_ellipse_bound,
    erf_exponent,
    erf_steepness,
    expand,
    lemma1_degree,
    lemma1_scale,
    quadrature_nodes,
    rho_for_unit_exponent,
    truncation_bound,
)
from nffprep.errors import DomainError, NonFiniteSample

# (eps, delta, eta) -> (k, rho, degree), computed independently in 30-digit
# mpmath: alpha0 by numeric maximisation over the ellipse, rho by bisection,
# degree by linear scan of the bound.
FROZEN_DEGREES = {
    (1e-3, 0.05, -0.9): (97.8882362352287, 1.0236554457072602, 529),
    (1e-3, 0.1, 0.0): (48.94411811761435, 1.0206401648467425, 611),
    (1e-2, 0.2, -0.5): (19.199561590784874, 1.06187293109949, 152),
    (1e-4, 0.05, -0.25): (115.17917755408055, 1.0090070129844437, 1742),
}


def test_expand_identity():
    np.testing.assert_allclose(expand(lambda x: x, 3).coefficients, [0, 1, 0, 0], atol=1e-15)


def test_expand_t2():
    np.testing.assert_allclose(expand(lambda x: 2 * x * x - 1, 4).coefficients, [0, 0, 1, 0, 0], atol=1e-15)


def test_expand_exp_matches_bessel():
    # e^x = I0(1) + 2 sum_k I_k(1) T_k(x)
    c = expand(np.exp, 12).coefficients
    ref = np.array([iv(0, 1.0)] + [2 * iv(k, 1.0) for k in range(1, 13)])
    np.testing.assert_allclose(c, ref, atol=1e-15)


def test_expand_erf10():
    # mpmath coefficient integrals: |a_41| = 4.8196e-4, sum_{k>40} |a_k| = 1.2596e-3,
    # and sum_{k>70} |a_k| = 1.7912e-7. Degree 40 cannot reach 1e-6; degree 70 does.
    x = dense_grid()
    s40 = expand(lambda t: erf(10 * t), 40)
    err40 = np.max(np.abs(s40.dense_values() - erf(10 * x)))
    assert 4.8196e-4 <= err40 <= 1.2596e-3 * (1 + 1e-4)
    assert s40.parity == "odd"
    s70 = expand(lambda t: erf(10 * t), 70)
    assert np.max(np.abs(s70.dense_values() - erf(10 * x))) < 1e-6


def test_expand_rejects_nonfinite():
    with pytest.raises(NonFiniteSample):
        expand(lambda x: 1 / x * 0 + np.where(x > 0.5, np.nan, 0.0), 8)


def test_parity_detection_even():
    s = expand(lambda x: np.cos(3 * x), 20)
    assert s.parity == "even"
    assert np.all(s.coefficients[1::2] == 0)


def test_series_at_one_is_coefficient_sum():
    s = ChebyshevSeries([0.3, -0.2, 0.5, 0.1])
    assert s(1.0) == pytest.approx(0.7)


def test_series_degree_and_parts():
    s = ChebyshevSeries([1.0, 2.0, 3.0, 4.0, 0.0])
    assert s.degree == 3
    np.testing.assert_array_equal(s.odd_part().coefficients, [0, 2, 0, 4, 0])
    np.testing.assert_array_equal(s.even_part().coefficients, [1, 0, 3, 0, 0])


def test_quadrature_node_count():
    assert [quadrature_nodes(d) for d in (0, 1, 3, 4, 100)] == [2, 4, 8, 16, 256]


def test_dense_grid_is_fine_enough():
    x = dense_grid()
    assert x[0] == -1.0 and x[-1] == 1.0
    assert np.all(np.diff(x) > 0)
    assert np.max(np.diff(x)) < 1e-5 * 2


@given(degree=st.integers(0, 600), points=st.sampled_from([2, 3, 9, 65, 257]), seed=st.integers(0, 2**31))
def test_dense_values_match_chebval(degree, points, seed):
    c = np.random.default_rng(seed).standard_normal(degree + 1)
    got = dense_values(c, points)
    ref = C.chebval(dense_grid(points), c)
    assert np.max(np.abs(got - ref)) <= 1e-11 * max(1.0, np.sum(np.abs(c)))


def test_truncation_bound_examples():
    e = BernsteinEllipse(2.0, 1.0)
    assert truncation_bound(e, 1) == pytest.approx(1.0)
    assert truncation_bound(e, 11) == pytest.approx(2.0**-10)
    # 30-digit reference for 2 e 1.1^-200 / 0.1
    assert truncation_bound(BernsteinEllipse(1.1, math.e), 200) == pytest.approx(2.86277651587521423e-7, rel=1e-12)


def test_huge_exponent_gives_infinite_modulus():
    ell = erf_ellipse_bound(64.0, 0.0, 1.5)
    assert ell.max_modulus == math.inf
    assert truncation_bound(ell, 10) == math.inf


def test_ellipse_validation():
    with pytest.raises(DomainError):
        BernsteinEllipse(1.0, 1.0)
    with pytest.raises(DomainError):
        erf_ellipse_bound(10.0, 1.0, 1.1)


def test_erf_exponent_closed_form():
    ref = 100 / (4 * 1.1025 * 2.2155) * 0.1025**2 * (1 + 1.2155)
    assert erf_exponent(10.0, 0.0, 1.05) == pytest.approx(ref, rel=1e-12)
    # numeric maximisation over the ellipse, 30 digits
    assert erf_exponent(10.0, 0.0, 1.05) == pytest.approx(0.238236961451247578896, rel=1e-9)


def test_erf_exponent_limits_and_symmetry():
    assert erf_exponent(50.0, 0.3, 1.0 + 1e-12) < 1e-18
    assert erf_ellipse_bound(50.0, 0.3, 1.0 + 1e-9).max_modulus == pytest.approx(1.0)
    assert erf_exponent(7.0, 0.4, 1.2) == erf_exponent(7.0, -0.4, 1.2)


@given(
    k=st.floats(1.0, 200.0),
    eta=st.floats(-0.95, 0.95),
    rho=st.floats(1.0005, 1.5),
)
def test_erf_bound_dominates_sampled_modulus(k, eta, rho):
    assume(erf_exponent(k, eta, rho) < 500)
    ell = erf_ellipse_bound(k, eta, rho)
    z = ell.points(2000)
    m = np.max(np.abs(erf(k * (z - eta))))
    assert m <= ell.max_modulus * (1 + 1e-9)


def test_erf_steepness():
    eps = 1 / math.sqrt(2 * math.pi * math.e)
    assert erf_steepness(eps, 1.0) == pytest.approx(math.sqrt(2))
    with pytest.raises(DomainError):
        erf_steepness(0.45, 0.1)


def test_rho_solves_unit_exponent():
    rho = rho_for_unit_exponent(40.0, -0.6)
    assert erf_exponent(40.0, -0.6, rho) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("args", list(FROZEN_DEGREES))
def test_frozen_degrees(args):
    k, rho, n = FROZEN_DEGREES[args]
    est = lemma1_degree(*args)
    assert est.k == pytest.approx(k, rel=1e-12)
    assert est.ellipse.rho == pytest.approx(rho, rel=1e-10)
    assert est.degree == n


def test_degree_is_minimal_and_honest():
    est = lemma1_degree(1e-3, 0.07, -0.4)
    assert est.certified_error <= 1e-3
    assert truncation_bound(est.ellipse, est.degree - 1) > 1e-3
    assert est.certified_error == pytest.approx(truncation_bound(est.ellipse, est.degree))


def test_lemma1_preconditions():
    for bad in [(0.0, 0.1, 0.0), (0.5, 0.1, 0.0), (1e-3, 0.0, 0.0), (1e-3, 1.0, 0.0), (1e-3, 0.1, -0.95)]:
        with pytest.raises(DomainError):
            lemma1_degree(*bad)
    # the boundary |eta| = 1 - delta is admitted
    assert lemma1_degree(1e-3, 0.1, -0.9).degree > 0


def test_degree_ratio_unshifted():
    eps = 1e-3
    n0 = lemma1_degree(eps, 0.1, 0.0).degree / math.log(1 / (0.1 * eps))
    n1 = lemma1_degree(eps, 0.01, 0.0).degree / math.log(1 / (0.01 * eps))
    assert 8 <= n1 / n0 <= 12.5


def test_degree_ratio_shifted():
    eps, d = 1e-3, 0.02
    a = lemma1_degree(eps, d, -1 + d).degree
    b = lemma1_degree(eps, d / 4, -1 + d / 4).degree
    assert 1.7 <= b / a <= 2.6


@given(eps=st.floats(1e-5, 0.1), delta=st.floats(1e-3, 0.3), frac=st.floats(0.0, 1.0))
def test_monotonicity(eps, delta, frac):
    eta = -(1 - delta) * frac
    n = lemma1_degree(eps, delta, eta).degree
    assert lemma1_degree(eps / 2, delta, eta).degree >= n
    # moving eta toward 0 never lowers the degree
    assert lemma1_degree(eps, delta, eta / 2).degree >= n


def test_certified_degree_any_eta():
    est = certified_degree(1e-3, 30.0, 0.99)
    assert est.certified_error <= 1e-3


def test_lemma1_scale_forms():
    a = lemma1_scale(1e-3, 0.01, -0.5, "abs")
    b = lemma1_scale(1e-3, 0.01, -0.5, "sq")
    assert a > 0 and b > 0 and a != b
