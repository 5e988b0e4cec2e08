import cmath
import math
from itertools import pairwise

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rankrange.sampler as sampler_mod
from rankrange.core_linalg import (
    JordanScalarModel,
    direct_sum,
    hermitian_part,
    jordan_block,
    materialize,
)
from rankrange.eigen import EigenConvergenceError, eigenvalues_hermitian, kth_eigenvalue
from rankrange.geometry import distance_to_region, support_values
from rankrange.sampler import (
    SupportProfile,
    angle_grid,
    estimate_range,
    member,
    member_many,
    member_profile,
    outer_region,
    sample_support,
)


def covered(region, pts, tol):
    return bool(np.all(distance_to_region(region, pts) <= tol))


def random_matrix(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def test_postcondition_matches_direct_eigenvalues():
    rng = np.random.default_rng(3)
    t = random_matrix(rng, 5)
    for k in (1, 3, 5):
        prof = sample_support(t, k, 64)
        direct = [kth_eigenvalue(eigenvalues_hermitian(hermitian_part(t, th)), k) for th in prof.thetas]
        assert np.max(np.abs(prof.lambdas - direct)) <= 1e-12 * np.abs(t).max()


@pytest.mark.parametrize("res", [8, 9, 360, 3600])
def test_grid_shape(res):
    th = angle_grid(res)
    assert len(th) == res and th[0] == 0.0 and th[-1] < 2 * math.pi
    assert np.all(np.diff(th) > 0)
    assert max(np.max(np.diff(th)), 2 * math.pi - th[-1]) <= 2 * (2 * math.pi / res)


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sample_support(np.eye(2), 1, 4)
    with pytest.raises(ValueError):
        sample_support(np.eye(2), 3, 16)


def test_scalar_matrix():
    beta = 0.4 - 0.9j
    prof = sample_support(beta * np.eye(3), 2, 72)
    expected = (np.exp(1j * prof.thetas) * beta).real
    assert np.max(np.abs(prof.lambdas - expected)) <= 1e-14


def test_jordan_examples():
    prof = sample_support(jordan_block(4), 1, 90)
    assert np.max(np.abs(prof.lambdas - math.cos(math.pi / 5))) <= 1e-13
    t = direct_sum(jordan_block(5), np.eye(1))
    prof = sample_support(t, 2, 360)
    assert prof.lambdas[0] == pytest.approx(math.cos(math.pi / 6), abs=1e-13)


def test_outer_region_examples():
    disk = outer_region(sample_support(jordan_block(2), 1, 3600))
    assert disk.kind == "polygon"
    sup = support_values(disk, np.linspace(0, 2 * math.pi, 101))
    assert np.all(sup >= 0.5 - 1e-3) and np.all(sup <= 0.5 + 1e-4)
    empty = outer_region(sample_support(materialize(JordanScalarModel(4, 2, 0, 1)), 3, 3600))
    assert empty.kind == "empty"
    pt = outer_region(sample_support(materialize(JordanScalarModel(3, 2, 0, 0)), 4, 3600))
    assert pt.kind == "point" and np.allclose(pt.vertices, 0, atol=1e-9)


def test_member_examples():
    assert member(jordan_block(2), 1, 0, 720) == "inside"
    assert member(jordan_block(2), 1, 1, 720) == "outside"
    t = materialize(JordanScalarModel(4, 2, 0, 1))
    for mu in (0, 0.5, -1j, 3):
        assert member(t, 3, mu, 720) == "outside"
    assert member(jordan_block(2), 1, 0.5, 720) == "boundary-uncertain"


def test_member_profile_vectorized():
    prof = sample_support(jordan_block(2), 1, 720)
    out = member_profile(prof, [0, 1, 0.5])
    assert list(out) == ["inside", "outside", "boundary-uncertain"]


def test_profile_json_round_trip():
    prof = sample_support(jordan_block(3), 2, 16)
    back = SupportProfile.from_json(prof.to_json())
    assert back.k == 2 and np.array_equal(back.thetas, prof.thetas) and np.array_equal(back.lambdas, prof.lambdas)
    assert set(prof.to_dict()) == {"k", "samples"}


def test_convergence_failure_reports_angle(monkeypatch):
    def boom(h, check=True, max_sweeps=100):
        raise EigenConvergenceError("no convergence", 2)

    monkeypatch.setattr(sampler_mod, "eigenvalues_hermitian_batch", boom)
    with pytest.raises(EigenConvergenceError, match="theta="):
        sample_support(jordan_block(3), 1, 16)


def test_off_grid_segment_is_resolved():
    # row-4 segment [alpha, beta] in a direction that is not on the angle grid
    mdl = JordanScalarModel(5, 5, 0.1, 0.1 + 0.4 * cmath.exp(0.123j))
    t = materialize(mdl)
    _, raw = estimate_range(t, 3, 3600, refine=False)
    assert raw.kind == "polygon"  # sliver between grid directions
    _, region = estimate_range(t, 3, 3600)
    assert region.kind == "segment"
    ends = sorted(region.points, key=lambda z: abs(z - mdl.alpha))
    assert abs(ends[0] - mdl.alpha) <= 1e-6 and abs(ends[1] - mdl.beta) <= 1e-6


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**31 - 1))
def test_resolution_doubling_and_nesting(d, seed):
    t = random_matrix(np.random.default_rng(seed), d)
    for k in range(1, d + 1):
        coarse = outer_region(sample_support(t, k, 180))
        fine = outer_region(sample_support(t, k, 360))
        if fine.is_empty:
            continue
        assert not coarse.is_empty
        assert covered(coarse, fine.points, 1e-9)
    regions = [outer_region(sample_support(t, k, 360)) for k in range(1, d + 1)]
    for big, small in pairwise(regions):
        if small.is_empty:
            continue
        assert covered(big, small.points, 1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 359), st.floats(-2, 2), st.floats(-2, 2), st.integers(0, 2**31 - 1))
def test_rotation_translation_equivariance(d, step, cr, ci, seed):
    t = random_matrix(np.random.default_rng(seed), d)
    phi = 2 * math.pi * step / 360
    c = complex(cr, ci)
    moved = cmath.exp(1j * phi) * t + c * np.eye(d)
    for k in range(1, d + 1):
        base = outer_region(sample_support(t, k, 360))
        image = outer_region(sample_support(moved, k, 360))
        assert base.kind == image.kind
        if base.is_empty:
            continue
        expected = base.transformed(cmath.exp(1j * phi), c)
        scale = 1 + abs(c) + np.abs(t).max()
        assert covered(image, expected.points, 1e-9 * scale)
        assert covered(expected, image.points, 1e-9 * scale)


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**31 - 1))
def test_direct_sum_inclusion(da, db, seed):
    rng = np.random.default_rng(seed)
    a, b = random_matrix(rng, da), random_matrix(rng, db)
    both = direct_sum(a, b)
    for k in range(1, min(da, db) + 1):
        prof = sample_support(both, k, 360)
        for part in (a, b):
            region = outer_region(sample_support(part, k, 360))
            if region.is_empty:
                continue
            centroid = region.points.mean()
            shrunk = centroid + (region.points - centroid) * (1 - 1e-6)
            verdicts = member_profile(prof, shrunk)
            assert not np.any(verdicts == "outside")


def test_member_refinement_closes_the_blind_band():
    # triangle hull; the edge from 2 to 2e^{i} has its normal between grid angles
    t = np.diag([0, 2, 2 * cmath.exp(1j)])
    probe = (2 * math.cos(0.5) + 1e-4) * cmath.exp(0.5j)
    assert member(t, 1, probe, 360, refine=False) == "inside"
    assert member(t, 1, probe, 360) == "outside"
    inner = (2 * math.cos(0.5) - 1e-4) * cmath.exp(0.5j)
    assert member(t, 1, inner, 360) == "inside"


def test_member_many_matches_member():
    t = random_matrix(np.random.default_rng(8), 4)
    mus = np.linspace(-2, 2, 9) + 0.3j
    labels = member_many(t, 2, mus, 720)
    assert list(labels) == [member(t, 2, mu, 720) for mu in mus]
