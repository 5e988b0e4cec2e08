import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankrange.core_linalg import (
    InvalidInputError,
    JordanScalarModel,
    arg,
    as_complex,
    direct_sum,
    hermitian_pair,
    hermitian_part,
    jordan_block,
    materialize,
    principal_angle,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def test_jordan_block_examples():
    assert np.array_equal(jordan_block(2, 0), [[0, 1], [0, 0]])
    j3 = jordan_block(3, 1j)
    assert np.array_equal(np.diag(j3), [1j] * 3)
    assert np.array_equal(np.diag(j3, 1), [1, 1])
    assert np.count_nonzero(j3) == 5
    assert np.array_equal(jordan_block(1, 5), [[5]])


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_jordan_block_rejects_bad_size(bad):
    with pytest.raises(InvalidInputError):
        jordan_block(bad)


def test_direct_sum_examples():
    assert np.array_equal(direct_sum([[0]], [[1]]), [[0, 0], [0, 1]])
    big = direct_sum(jordan_block(2), np.eye(2))
    assert big.shape == (4, 4)
    assert np.array_equal(big[:2, :2], jordan_block(2))
    assert np.array_equal(big[2:, 2:], np.eye(2))
    assert not big[:2, 2:].any() and not big[2:, :2].any()
    a = np.array([[1, 2j], [3, 4]])
    assert np.array_equal(direct_sum(a, np.zeros((0, 0))), a)
    assert np.array_equal(direct_sum(np.zeros((0, 0)), a), a)


def test_direct_sum_rejects_non_square():
    with pytest.raises(InvalidInputError):
        direct_sum(np.zeros((2, 3)), np.eye(1))


def test_hermitian_part_examples():
    assert np.allclose(hermitian_part(jordan_block(2), 0.0), [[0, 0.5], [0.5, 0]], atol=0)
    theta = 0.7
    assert np.allclose(hermitian_part(0.8 * np.eye(3), theta), 0.8 * math.cos(theta) * np.eye(3), atol=1e-15)
    beta = 0.3 - 1.1j
    expected = abs(beta) * math.cos(theta + cmath.phase(beta))
    assert np.allclose(hermitian_part(beta * np.eye(2), theta), expected * np.eye(2), atol=1e-15)
    h = np.array([[2, 1 - 1j], [1 + 1j, -1]])
    assert np.array_equal(hermitian_part(h, 0.0), h)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2**31 - 1))
def test_hermitian_part_properties(d, theta, phi, seed):
    rng = np.random.default_rng(seed)
    t = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = hermitian_part(t, theta)
    assert np.array_equal(h, h.conj().T)
    rotated = hermitian_part(cmath.exp(1j * phi) * t, theta)
    assert np.max(np.abs(rotated - hermitian_part(t, theta + phi))) <= 1e-12 * max(1.0, np.abs(t).max())
    a, b = hermitian_pair(t)
    assert np.max(np.abs(math.cos(theta) * a + math.sin(theta) * b - h)) <= 1e-12 * max(1.0, np.abs(t).max())


def test_model_psi_and_frame():
    mdl = JordanScalarModel(5, 5, -1 - 1j, 1 - 2j)
    assert mdl.psi == pytest.approx(principal_angle(cmath.phase(2 - 1j)))
    assert 0 <= mdl.psi < 2 * math.pi
    assert mdl.gap == pytest.approx(math.sqrt(5))
    z = 0.3 + 0.2j
    assert abs(mdl.to_normalized(mdl.to_world(z)) - z) < 1e-15
    same = JordanScalarModel(3, 2, 1j, 1j)
    assert same.psi == 0.0 and same.gap == 0.0


@pytest.mark.parametrize("n,m", [(1, 0), (0, 2), (3, -1), (2.5, 1)])
def test_model_rejects_bad_sizes(n, m):
    with pytest.raises(InvalidInputError):
        JordanScalarModel(n, m)


def test_model_rejects_non_finite():
    with pytest.raises(InvalidInputError):
        JordanScalarModel(2, 1, float("nan"), 0)
    with pytest.raises(InvalidInputError):
        as_complex("x")


def test_materialize_examples():
    t = materialize(JordanScalarModel(2, 1, 0, 1))
    assert np.array_equal(t, [[0, 1, 0], [0, 0, 0], [0, 0, 1]])
    mdl = JordanScalarModel(3, 2, -1 - 1j, 1 - 2j)
    t0 = materialize(mdl, normalized=True)
    psi = cmath.phase(2 - 1j) % (2 * math.pi)
    assert np.allclose(t0[:3, :3], cmath.exp(-1j * psi) * jordan_block(3), atol=1e-15)
    assert np.allclose(t0[3:, 3:], math.sqrt(5) * np.eye(2), atol=1e-15)
    same = JordanScalarModel(3, 2, 2j, 2j)
    assert np.array_equal(materialize(same), direct_sum(jordan_block(3, 2j), 2j * np.eye(2)))
    assert np.array_equal(materialize(same, normalized=True), direct_sum(jordan_block(3), np.zeros((2, 2))))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 4), finite, finite, finite, finite)
def test_materialize_normalized_relation(n, m, ar, ai, br, bi):
    mdl = JordanScalarModel(n, m, complex(ar, ai), complex(br, bi))
    t = materialize(mdl)
    t0 = materialize(mdl, normalized=True)
    expected = cmath.exp(-1j * mdl.psi) * (t - mdl.alpha * np.eye(mdl.dim))
    assert np.max(np.abs(t0 - expected), initial=0.0) <= 1e-12 * max(1.0, abs(mdl.alpha), abs(mdl.beta))


def test_arg_convention():
    assert arg(0) == 0.0
    assert arg(-1) == pytest.approx(math.pi)
    assert arg(-1j) == pytest.approx(1.5 * math.pi)
    assert principal_angle(-1e-300) in (0.0, pytest.approx(2 * math.pi))
    assert 0.0 <= principal_angle(-1e-300) < 2 * math.pi
