import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from glaubercorr import model
from glaubercorr.errors import DegenerateNormalization, InvalidParams, UnsupportedSize
from glaubercorr.model import ModelParams

p_values = st.floats(0.0, 1.0, allow_nan=False)
parities = st.sampled_from([0, 1])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(p=-0.1, n=3, m=0),
        dict(p=1.5, n=3, m=0),
        dict(p=float("nan"), n=3, m=0),
        dict(p=0.5, n=1, m=0),
        dict(p=0.5, n=3.5, m=0),
        dict(p=0.5, n=3, m=2),
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(InvalidParams):
        ModelParams(**kwargs)


def test_from_alpha():
    params = ModelParams.from_alpha(0.5, 4, 1)
    assert params.p == pytest.approx(math.exp(-0.5))
    assert params.sign == -1
    assert params.q == pytest.approx(math.exp(-0.5) ** 2)
    assert ModelParams.from_alpha(1j, 3, 0).p == pytest.approx(math.exp(-2))


@pytest.mark.parametrize("p", [1 - 1e-12, 1 - 1e-9, 0.999, 0.3])
@pytest.mark.parametrize("k", [1, 3, 25])
def test_one_minus_pow_is_accurate_near_one(p, k):
    exact = 1 - Fraction(p) ** k
    assert model.one_minus_pow(p, k) == pytest.approx(float(exact), rel=1e-12)


def test_one_minus_pow_edges():
    assert model.one_minus_pow(0.0, 3) == 1.0
    assert model.one_minus_pow(0.4, 0) == 0.0
    assert model.one_minus_pow(1.0, 5) == 0.0


@settings(max_examples=50, deadline=None)
@given(p=p_values, l=st.integers(1, 30))
def test_logical_amplitudes_normalized(p, l):
    a, b = model.logical_amplitudes(p, l)
    assert a * a + b * b == pytest.approx(1.0, abs=1e-15)
    assert a * a - b * b == pytest.approx(p**l, abs=1e-15)


@settings(max_examples=80, deadline=None)
@given(p=st.floats(0.0, 0.999), n=st.integers(2, 25), m=parities, data=st.data())
def test_pure_split_normalized(p, n, m, data):
    k = data.draw(st.integers(1, n - 1))
    split = model.pure_split_state(ModelParams(p, n, m), k)
    assert split.norm == pytest.approx(1.0, abs=1e-12)
    if m == 0:
        assert split.c01 == 0 and split.c10 == 0
    else:
        assert split.c00 == 0 and split.c11 == 0


def test_pure_split_bell_limit():
    v = model.pure_split_state(ModelParams(0.0, 4, 0), 1).vector
    assert_allclose(v, [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)], atol=1e-15)
    v = model.pure_split_state(ModelParams(0.0, 4, 1), 2).vector
    assert_allclose(v, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-15)


def test_pure_split_rejects_bad_k():
    with pytest.raises(InvalidParams):
        model.pure_split_state(ModelParams(0.3, 4, 0), 4)


def test_odd_state_vanishes_at_full_overlap():
    with pytest.raises(DegenerateNormalization):
        model.normalization(ModelParams(1.0, 4, 1))
    with pytest.raises(DegenerateNormalization):
        model.pure_split_state(ModelParams(1.0, 4, 1), 1)
    assert model.normalization(ModelParams(1.0, 4, 0)) == pytest.approx(0.5)


@settings(max_examples=100, deadline=None)
@given(p=p_values, n=st.integers(3, 40), m=parities)
def test_rho12_is_a_valid_x_state(p, n, m):
    state = model.rho12(ModelParams(p, n, m))
    err = state.invariant_errors()
    assert err["trace"] < 1e-14
    assert err["hermitian"] == 0
    assert err["min_eigenvalue"] > -1e-14
    rho = state.rho
    for i, j in [(0, 1), (0, 2), (1, 3), (2, 3)]:
        assert rho[i, j] == 0 and rho[j, i] == 0
    assert np.linalg.matrix_rank(rho, tol=1e-10) <= 2


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.8, 0.95])
@pytest.mark.parametrize("n", [3, 4, 7, 12])
@pytest.mark.parametrize("m", [0, 1])
def test_rho12_equals_partial_trace(p, n, m):
    params = ModelParams(p, n, m)
    assert_allclose(model.rho12(params).rho, model.rho12_via_partial_trace(params).rho, atol=1e-13)


@pytest.mark.parametrize("p", [0.01, 0.3, 0.6, 0.99])
@pytest.mark.parametrize("n", [3, 5, 25])
@pytest.mark.parametrize("m", [0, 1])
def test_spectrum_oracle(p, n, m):
    params = ModelParams(p, n, m)
    mu1, mu2 = model.rho12_spectrum_oracle(params)
    vals = np.linalg.eigvalsh(model.rho12(params).rho)
    assert_allclose(sorted([0.0, 0.0, mu1, mu2]), vals, atol=1e-13)
    assert mu1 + mu2 == pytest.approx(1.0, abs=1e-14)


def test_rho12_at_zero_overlap_is_bell_mixture():
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    psi = np.array([0, 1, 1, 0]) / math.sqrt(2)
    expected = 0.5 * (np.outer(phi, phi) + np.outer(psi, psi))
    for n in (3, 6):
        for m in (0, 1):
            assert_allclose(model.rho12(ModelParams(0.0, n, m)).rho, expected, atol=1e-15)


def test_rho12_full_overlap_even_is_ground_state():
    expected = np.zeros((4, 4))
    expected[0, 0] = 1
    assert_allclose(model.rho12(ModelParams(1.0, 5, 0)).rho, expected, atol=1e-15)


@pytest.mark.parametrize("n", [3, 4, 10, 25])
def test_odd_full_overlap_uses_w_limit(n):
    state = model.rho12(ModelParams(1.0, n, 1))
    assert state.provenance == "limit"
    assert_allclose(state.rho, model.w_limit_rho12(n), atol=0)
    near = model.rho12(ModelParams(1 - 1e-7, n, 1))
    assert near.provenance == "exact"
    assert_allclose(near.rho, state.rho, atol=1e-5)


def test_w_limit_matches_traced_w_state():
    n = 5
    w = np.zeros(2**n)
    for k in range(n):
        w[1 << k] = 1 / math.sqrt(n)
    from glaubercorr import linalg

    traced = linalg.partial_trace_pure(w, [4, 2 ** (n - 2)], [0])
    assert_allclose(model.w_limit_rho12(n), traced, atol=1e-15)


def test_full_state_guards_size():
    with pytest.raises(UnsupportedSize):
        model.full_logical_state(ModelParams(0.5, 15, 0))
    psi = model.full_logical_state(ModelParams(0.5, 8, 1))
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-14)


def test_two_qubit_state_is_immutable():
    state = model.rho12(ModelParams(0.4, 3, 0))
    with pytest.raises(ValueError):
        state.rho[0, 0] = 1.0
    with pytest.raises(InvalidParams):
        model.TwoQubitState(np.eye(4) / 4, "guessed")
    with pytest.raises(InvalidParams):
        model.TwoQubitState(np.eye(2) / 2)
