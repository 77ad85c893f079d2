"""Test Lanczos log-gamma and the Beta function."""

import math
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.expr import ArgumentError
from core.special import beta_function, gamma_function, log_beta, log_gamma


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 57.25])
def test_log_gamma_matches_stdlib(z):
    assert log_gamma(z) == pytest.approx(math.lgamma(z), rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("n,fact", [(1, 1), (2, 1), (5, 24), (8, 5040)])
def test_gamma_of_integers(n, fact):
    assert gamma_function(n) == pytest.approx(fact, rel=1e-12)


def test_gamma_half():
    assert gamma_function(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)


@pytest.mark.parametrize(
    "p,q,expected",
    [(1.0, 1.0, 1.0), (2.0, 3.0, 1 / 12), (0.5, 0.5, math.pi), (3.0, 3.0, 1 / 30)],
)
def test_beta_closed_forms(p, q, expected):
    assert beta_function(p, q) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=0.05, max_value=40.0, allow_nan=False),
    st.floats(min_value=0.05, max_value=40.0, allow_nan=False),
)
def test_beta_matches_scipy(p, q):
    assert beta_function(p, q) == pytest.approx(special.beta(p, q), rel=1e-10)
    assert log_beta(p, q) == pytest.approx(special.betaln(p, q), rel=1e-10, abs=1e-12)


@given(st.floats(min_value=0.05, max_value=40.0), st.floats(min_value=0.05, max_value=40.0))
def test_beta_symmetric(p, q):
    assert beta_function(p, q) == pytest.approx(beta_function(q, p), rel=1e-13)


@pytest.mark.parametrize("p,q", [(0.0, 1.0), (1.0, -2.0), (-0.5, -0.5)])
def test_beta_rejects_non_positive(p, q):
    with pytest.raises(ArgumentError):
        beta_function(p, q)
    with pytest.raises(ArgumentError):
        log_beta(p, q)


@pytest.mark.parametrize("z", [0.0, -1.0, float("inf"), float("nan")])
def test_log_gamma_rejects(z):
    with pytest.raises(ArgumentError):
        log_gamma(z)
