import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import QUAD, QUAD_ROOTS, X1, crandn, match_roots
from phaselab.ambiguity import (
    RootFindingError,
    aberth,
    degeneracy_reasons,
    enumerate_ambiguities,
    flip,
    flip_roots,
    poly_from_roots,
    poly_roots,
    same_intensity,
)
from phaselab.measure import aperiodic_autocorr
from phaselab.symmetry import ConjReflect, orbit_equivalent

seeds = st.integers(0, 2**32 - 1)


def test_roots_of_quadruple():
    for x, roots in zip(QUAD, QUAD_ROOTS):
        match_roots(poly_roots(x).roots, roots, 1e-9)


def test_quadratic_roots():
    match_roots(poly_roots([-6, 5, 1]).roots, (1, -6), 1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), seeds)
def test_roots_match_numpy(N, seed):
    x = crandn(np.random.default_rng(seed), N)
    rs = poly_roots(x)
    match_roots(rs.roots, np.roots(x[::-1]), 1e-7)
    np.testing.assert_allclose(rs.expand(), x, atol=1e-9 * np.abs(x).max())


def test_trailing_zeros_are_trimmed():
    rs = poly_roots([2, 1, 0, 0])
    assert rs.trimmed == 2 and len(rs.roots) == 1
    np.testing.assert_allclose(rs.expand(), [2, 1, 0, 0])
    with pytest.raises(RootFindingError):
        poly_roots([0, 0])
    np.testing.assert_allclose(aberth([3.0, 1.0]), [-3.0])


def test_flip_extremes(rng):
    x = crandn(rng, 5)
    theta = 1.1
    np.testing.assert_allclose(flip(x, (), theta), np.exp(1j * theta) * x, atol=1e-9)
    y = flip(x, range(4))
    assert orbit_equivalent(y, ConjReflect().act(x), "phase", 1e-8)


def test_flip_three_i_gives_x2():
    rs = poly_roots(X1)
    k = int(np.argmin(np.abs(np.array(rs.roots) - 3j)))
    y = flip(X1, (k,), roots=rs)
    assert orbit_equivalent(y, QUAD[1], "phase", 1e-9)
    match_roots(poly_roots(y).roots, QUAD_ROOTS[1], 1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), seeds)
def test_every_flip_preserves_intensity(N, seed):
    rng = np.random.default_rng(seed)
    x = crandn(rng, N)
    rs = poly_roots(x)
    subset = [i for i in range(N - 1) if rng.random() < 0.5]
    y = flip_roots(rs, subset, rng.uniform(0, 6))
    # flip_roots does not renormalise: the product formula already keeps the energy
    np.testing.assert_allclose(aperiodic_autocorr(y), aperiodic_autocorr(x), atol=1e-8 * np.linalg.norm(x) ** 2)
    assert same_intensity(x, flip(x, subset))


def test_quadruple_classes():
    res = enumerate_ambiguities(X1)
    assert len(res.representatives) == 4 and not res.degenerate
    for x in QUAD:
        hits = sum(bool(orbit_equivalent(r, x, "phase-conjreflect", 1e-7)) for r in res.representatives)
        assert hits == 1
    for r in res.representatives:
        np.testing.assert_allclose(aperiodic_autocorr(r), aperiodic_autocorr(X1), rtol=1e-9)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_generic_class_count(N):
    x = crandn(np.random.default_rng(N), N)
    res = enumerate_ambiguities(x)
    assert len(res.representatives) == 2 ** (N - 2)
    reps = res.representatives
    for a, b in itertools.combinations(reps, 2):
        assert not orbit_equivalent(a, b, "phase-conjreflect", 1e-7)


def test_unit_circle_root_reduces_class_count():
    x = poly_from_roots([2, 1j, -3])
    res = enumerate_ambiguities(x)
    assert res.degenerate and "root on the unit circle" in res.reasons
    assert len(res.representatives) < 4


def test_degeneracy_reasons():
    assert degeneracy_reasons([2, 2]) == ["repeated roots"]
    assert "root at zero" in degeneracy_reasons([0, 3])
    assert "root collides with a conjugate-inverse" in degeneracy_reasons([2, 0.5, 5j])
    assert degeneracy_reasons([2, 3j, -5]) == []


def test_max_classes_truncates():
    res = enumerate_ambiguities(crandn(np.random.default_rng(1), 6), max_classes=3)
    assert res.truncated and len(res.representatives) == 3
