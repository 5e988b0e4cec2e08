import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankrange.core_linalg import (
    JordanScalarModel,
    hermitian_part,
    jordan_block,
    materialize,
)
from rankrange.eigen import (
    EigenConvergenceError,
    NotHermitianError,
    eigenvalues_hermitian,
    eigenvalues_hermitian_batch,
    jordan_spectrum_fast,
    kth_eigenvalue,
)


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2


def test_examples():
    assert np.allclose(eigenvalues_hermitian(np.eye(3)), [1, 1, 1], atol=1e-15)
    c1, c2 = math.cos(math.pi / 5), math.cos(2 * math.pi / 5)
    vals = eigenvalues_hermitian(hermitian_part(jordan_block(4), 0.0))
    assert np.allclose(vals, [c1, c2, -c2, -c1], atol=1e-14)
    assert np.allclose(eigenvalues_hermitian([[0, 0.5], [0.5, 0]]), [0.5, -0.5], atol=1e-15)


def test_kth_eigenvalue():
    assert kth_eigenvalue([3, 2, 2, 1], 3) == 2
    spec = eigenvalues_hermitian(hermitian_part(jordan_block(5), 0.0))
    assert abs(kth_eigenvalue(spec, 3)) < 1e-14
    assert kth_eigenvalue([5], 1) == 5
    for bad in (0, 2, 1.5):
        with pytest.raises(IndexError):
            kth_eigenvalue([5], bad)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitianError) as err:
        eigenvalues_hermitian([[0, 1], [0, 0]])
    assert err.value.deviation == pytest.approx(1.0)
    # within tolerance is accepted
    eigenvalues_hermitian([[0, 1], [1 + 1e-12, 0]])


def test_convergence_failure_is_signalled():
    h = random_hermitian(np.random.default_rng(0), 6)[None]
    with pytest.raises(EigenConvergenceError) as err:
        eigenvalues_hermitian_batch(h, max_sweeps=1)
    assert err.value.item == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.floats(1e-3, 1e3), st.integers(0, 2**31 - 1))
def test_random_hermitian_invariants(d, scale, seed):
    h = random_hermitian(np.random.default_rng(seed), d, scale)
    vals = eigenvalues_hermitian(h)
    ref = np.sort(np.linalg.eigvalsh(h))[::-1]
    norm = np.linalg.norm(h)
    assert np.all(np.diff(vals) <= 0)
    assert abs(vals.sum() - np.trace(h).real) <= 1e-9 * max(norm, 1.0)
    assert abs(np.sum(vals**2) - norm**2) <= 1e-8 * max(norm, 1.0) ** 2
    assert np.max(np.abs(vals - ref)) <= 1e-10 * max(norm, 1.0)


def test_multiplicity_kept():
    h = np.diag([1.0, 3.0, 1.0, 2.0, 3.0]).astype(complex)
    assert np.array_equal(eigenvalues_hermitian(h), [3, 3, 2, 1, 1])


def test_batch_matches_single():
    rng = np.random.default_rng(1)
    stack = np.stack([random_hermitian(rng, 5) for _ in range(7)])
    batch = eigenvalues_hermitian_batch(stack)
    for h, row in zip(stack, batch):
        assert np.allclose(eigenvalues_hermitian(h), row, atol=1e-13)


def test_jordan_fast_path():
    c = [math.cos(j * math.pi / 5) for j in range(1, 5)]
    assert np.allclose(jordan_spectrum_fast(4, 0.3), c, atol=0)
    assert np.allclose(jordan_spectrum_fast(1, 2.0), [0.0], atol=1e-16)
    assert np.array_equal(jordan_spectrum_fast(7, 0.1, 0.4), jordan_spectrum_fast(7, 2.9, 0.4))
    psi = 0.4
    h = hermitian_part(np.exp(-1j * psi) * jordan_block(6), 1.3)
    assert np.max(np.abs(jordan_spectrum_fast(6, 1.3, psi) - eigenvalues_hermitian(h))) <= 1e-10


@pytest.mark.parametrize("n,m,beta", [(4, 3, 0.7), (5, 2, 1 - 2j), (3, 4, 0.0)])
def test_model_spectrum_is_union(n, m, beta):
    mdl = JordanScalarModel(n, m, 0.2j, beta)
    t0 = materialize(mdl, normalized=True)
    for theta in np.linspace(0, 2 * math.pi, 13):
        got = eigenvalues_hermitian(hermitian_part(t0, theta))
        union = np.concatenate([jordan_spectrum_fast(n), np.full(m, mdl.gap * math.cos(theta))])
        assert np.max(np.abs(got - np.sort(union)[::-1])) <= 1e-10
