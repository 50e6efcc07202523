import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nffprep.chebyshev import ChebyshevSeries, lemma1_degree
from nffprep.errors import DomainError
from nffprep.filters import (
    FilterSpec,
    bandpass_degrees,
    dense_error,
    identity_filter,
    make_bandpass_filter,
    make_step_filter,
    odd_part,
    plateau_error,
    stage_one_window,
)
from nffprep.hamiltonians import grover_hamiltonian


def test_step_value_at_eta():
    f = make_step_filter(1e-3, 0.1, -0.3)
    assert abs(f(-0.3)) <= 1e-3


def test_step_plateaus():
    eps = 1e-3
    f = make_step_filter(eps, 0.1, -0.3)
    x = np.linspace(-1, 1, 4001)
    lo, hi = x <= -0.35, x >= -0.25
    assert np.max(np.abs(f(x[lo]) + 1)) <= 2 * eps
    assert np.max(np.abs(f(x[hi]) - 1)) <= 2 * eps
    assert plateau_error(f) <= 2 * eps


def test_step_degree_matches_lemma():
    f = make_step_filter(1e-3, 0.05, -0.9)
    assert f.degree == lemma1_degree(1e-3, 0.05, -0.9).degree == 529
    assert f.kind == "step"


@given(eps=st.floats(1e-4, 1e-1), delta=st.floats(5e-3, 0.5), frac=st.floats(0, 1))
def test_step_bounded_and_honest(eps, delta, frac):
    eta = -(1 - delta) * frac
    f = make_step_filter(eps, delta, eta)
    assert f.series.max_abs() <= 1 + 1e-12
    assert dense_error(f) <= eps
    assert plateau_error(f) <= 2 * eps


def test_odd_part_idempotent_on_odd_input():
    f = odd_part(make_step_filter(1e-3, 0.1, 0.0))
    g = odd_part(make_step_filter(1e-3, 0.1, 0.0))
    np.testing.assert_array_equal(f.series.coefficients, g.series.coefficients)
    assert np.all(f.series.coefficients[0::2] == 0)
    assert f.kind == "step_odd"


def test_odd_part_of_constant_is_zero():
    one = FilterSpec(0.1, 0.1, 0.0, 1.0, ChebyshevSeries.constant(1.0), "step", 0.0)
    assert np.all(odd_part(one).series.coefficients == 0)


def test_odd_part_rejects_odd_kind():
    f = odd_part(make_step_filter(1e-2, 0.1, 0.0))
    with pytest.raises(DomainError):
        odd_part(f)


def test_odd_step_on_grover_spectrum():
    eps = 1e-3
    p = grover_hamiltonian(256)
    width, eta = stage_one_window(p.mu, p.delta)
    f = odd_part(make_step_filter(eps, width, eta))
    w = np.unique(np.round(p.spectrum, 12))
    assert f(p.mu) <= -1 + 2 * eps
    # -mu mirrors the ground energy and lands near +1; the rest sits in [-O(eps), 1]
    assert np.all(f(w[1:]) >= -2 * eps)
    assert np.all(f(w[1:]) <= 1 + 1e-12)


def test_bandpass_values():
    eps, d1, eta = 1e-3, 0.1, -0.4
    f = make_bandpass_filter(eps, d1, eta)
    assert f(eta) == pytest.approx(-1, abs=2 * eps)
    assert abs(f(eta + 2 * d1)) <= 2 * eps
    assert abs(f(eta - 2 * d1)) <= 2 * eps
    assert dense_error(f) <= eps
    assert f.series.max_abs() <= 1 + 1e-12


def test_bandpass_preconditions():
    with pytest.raises(DomainError):
        make_bandpass_filter(1e-3, 0.2, 0.85)
    with pytest.raises(DomainError):
        make_bandpass_filter(0.6, 0.1, 0.0)
    with pytest.raises(DomainError):
        make_bandpass_filter(1e-3, 0.0, 0.0)


def test_bandpass_degree_scaling_near_minus_one():
    ds = np.array([2.0**-j for j in range(4, 10)])
    ns = np.array([make_bandpass_filter(1e-3, d, -1 + d).degree for d in ds])
    logs = np.log(1 / (ds * 1e-3))
    slope = np.polyfit(np.log(ds), np.log(ns / logs), 1)[0]
    assert slope == pytest.approx(-0.5, abs=0.1)


@pytest.mark.parametrize("y", [0.0, 0.5, 1.0])
def test_bandpass_matches_step_degree(y):
    eps, d = 1e-3, 2.0**-6
    eta = -1 + d**y + d / 2
    if abs(eta) + d >= 1:
        eta = -1 + 1.01 * d
    band = make_bandpass_filter(eps, d, eta)
    step = make_step_filter(eps, d, eta)
    assert 0.5 <= band.degree / step.degree <= 2.0


def test_bandpass_odd_parity():
    f = odd_part(make_bandpass_filter(1e-3, 0.1, 0.5))
    assert f.kind == "bandpass_odd"
    assert np.all(f.series.coefficients[0::2] == 0)
    assert dense_error(f) <= 1e-3


def test_bandpass_degrees_pair():
    left, right = bandpass_degrees(1e-3, 0.1, -0.5)
    assert left.k == right.k
    assert left.degree < right.degree  # edge closer to -1 needs fewer terms


def test_identity_filter():
    f = identity_filter()
    assert f(0.3) == pytest.approx(0.3)
    assert f.degree == 1


def test_stage_one_window():
    assert stage_one_window(-0.5, 0.1) == pytest.approx((0.1, -0.45))
    width, eta = stage_one_window(-0.99, 0.05)
    assert width == pytest.approx(0.03)
    assert eta - width / 2 == pytest.approx(-0.99 + 0.05 - 0.03)
    assert abs(eta) <= 1 - width
    with pytest.raises(DomainError):
        stage_one_window(-0.5, 0.0)
