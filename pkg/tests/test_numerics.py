import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A5x3, X_REF, Y_COLL, crandn
from phaselab.algebra.hilbert import hilbert_polynomial
from phaselab.algebra.incidence import incidence_ideal
from phaselab.algebra.poly import RationalMPoly
from phaselab.combinat import complement_property
from phaselab.core import SupportSet
from phaselab.measure import StftConfig, frog, phaseless_linear, random_bandlimited, stft_phaseless
from phaselab.numerics import (
    RankAmbiguity,
    ResidualMap,
    collision_search,
    diagonal_base_point,
    gradcheck,
    incidence_base_point,
    jacobian_analysis,
    jacobian_dimension,
    levenberg_marquardt,
    polynomial_local_dimension,
)
from phaselab.symmetry import orbit_equivalent

PAIR = (SupportSet.of([0, 1, 2, 4], 8), SupportSet.of([0, 1, 2, 5], 8))
SELF = (SupportSet.of([0, 1, 2, 5], 8), SupportSet.of([0, 1, 2, 5], 8))


def random_complement_matrix(M=7, N=4, seed=0):
    rng = np.random.default_rng(seed)
    while True:
        A = rng.standard_normal((M, N))
        if complement_property(A).holds:
            return A


# residual maps --------------------------------------------------------------


def test_linear_residual_vanishes_at_reference(rng):
    A = crandn(rng, 6, 3)
    x = crandn(rng, 3)
    fmap = ResidualMap.linear(A, x_ref=x)
    assert fmap.dim == 6
    np.testing.assert_allclose(fmap.residual(fmap.from_signal(x)), 0, atol=1e-12)
    np.testing.assert_allclose(fmap.target, phaseless_linear(A, x))


def test_real_linear_map_uses_real_coordinates():
    fmap = ResidualMap.linear(A5x3, x_ref=X_REF)
    assert fmap.field_tag == "real" and fmap.dim == 3
    np.testing.assert_allclose(fmap.residual(Y_COLL.astype(float)), 0, atol=1e-9)


def test_stft_and_frog_targets_match_measurements(rng):
    cfg = StftConfig(crandn(rng, 3), 8, 2)
    x = crandn(rng, 8)
    fmap = ResidualMap.stft(cfg, x_ref=x)
    # targets are squared magnitudes, row r*N + k
    np.testing.assert_allclose(fmap.target, (stft_phaseless(x, cfg) ** 2).T.ravel(), rtol=1e-10)
    fmap = ResidualMap.frog(8, 2, x_ref=x)
    np.testing.assert_allclose(fmap.target, frog(x, 2).ravel(), rtol=1e-10)


def test_pack_unpack_roundtrip(rng):
    fmap = ResidualMap.linear(crandn(rng, 5, 4), x_ref=crandn(rng, 4))
    x = crandn(rng, 4)
    np.testing.assert_array_equal(fmap.to_signal(fmap.from_signal(x)), x)


# gradcheck ----------------------------------------------------------------


def test_gradcheck_linear_and_stft(rng):
    fmap = ResidualMap.linear(crandn(rng, 9, 4), x_ref=crandn(rng, 4))
    assert gradcheck(fmap, rng.standard_normal(fmap.dim)) <= 1e-5
    cfg = StftConfig(crandn(rng, 4), 12, 3)
    fmap = ResidualMap.stft(cfg, x_ref=crandn(rng, 12))
    assert gradcheck(fmap, rng.standard_normal(fmap.dim)) <= 1e-5


@pytest.mark.parametrize("periodic", [False, True])
def test_gradcheck_frog(rng, periodic):
    fmap = ResidualMap.frog(8, 2, x_ref=crandn(rng, 8), periodic=periodic)
    assert gradcheck(fmap, rng.standard_normal(fmap.dim)) <= 1e-4


def test_gradcheck_error_is_second_order(rng):
    # cubic residual terms make the central-difference error scale like h^2
    fmap = ResidualMap.frog(8, 2, x_ref=crandn(rng, 8))
    z = rng.standard_normal(fmap.dim)
    e1 = gradcheck(fmap, z, h=1e-4)
    e2 = gradcheck(fmap, z, h=5e-5)
    assert 2.5 < e1 / e2 < 5.5


def test_gradcheck_constant_map_is_zero():
    gens = ("a", "b")
    one = RationalMPoly.parse("1", gens)
    fmap = ResidualMap.polynomial([one], gens)
    assert gradcheck(fmap, np.array([0.3, -1.2])) == 0.0


def test_gradcheck_rejects_bad_step(rng):
    fmap = ResidualMap.linear(crandn(rng, 4, 2), x_ref=crandn(rng, 2))
    with pytest.raises(ValueError):
        gradcheck(fmap, np.zeros(4), h=1e-2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gradcheck_random_linear(seed):
    rng = np.random.default_rng(seed)
    fmap = ResidualMap.linear(crandn(rng, 7, 3), x_ref=crandn(rng, 3))
    assert gradcheck(fmap, rng.standard_normal(fmap.dim)) <= 1e-5


# Levenberg-Marquardt -------------------------------------------------------


def test_lm_solves_from_nearby_start(rng):
    A = crandn(rng, 12, 3)
    x = crandn(rng, 3)
    fmap = ResidualMap.linear(A, x_ref=x)
    z0 = fmap.from_signal(x) + 0.05 * rng.standard_normal(fmap.dim)
    res = levenberg_marquardt(fmap, z0)
    assert np.sqrt(res.cost) / fmap.scale() < 1e-10
    assert orbit_equivalent(fmap.to_signal(res.z), x, "phase", 1e-6)


# local dimension ----------------------------------------------------------


def test_self_incidence_jacobian_dimension_matches_hilbert():
    S, S2 = SELF
    hp = hilbert_polynomial(incidence_ideal(S, S2))
    rng = np.random.default_rng(7)
    for _ in range(5):
        assert jacobian_dimension(S, S2, diagonal_base_point(S, rng)) == hp.affine_dim == 4


def test_pair_found_point_dimension_bounded_by_hilbert():
    S, S2 = PAIR
    pt = incidence_base_point(S, S2, seed=0)
    assert pt is not None
    ideal = incidence_ideal(S, S2)
    vals = [float(p.evaluate(list(pt))) for p in ideal.generators]
    assert max(abs(v) for v in vals) < 1e-9
    assert jacobian_dimension(S, S2, pt, allow_ambiguous=True) <= hilbert_polynomial(ideal).affine_dim


def test_empty_system_has_full_dimension():
    rep = polynomial_local_dimension([], ("a", "b", "c"), [1.0, 2.0, 3.0])
    assert rep.dim == 3 and rep.rank == 0


def test_zero_jacobian_has_full_dimension():
    gens = ("a", "b")
    f = RationalMPoly.parse("a^2 + b^2", gens)
    rep = polynomial_local_dimension([f], gens, [0.0, 0.0])
    assert rep.dim == 2 and not rep.ambiguous


def test_rank_ambiguity_is_raised():
    gens = ("a", "b")
    polys = [RationalMPoly.parse("a", gens), RationalMPoly.parse("b^2", gens)]
    # second singular value is 2e-9, right at the default cutoff
    rep = polynomial_local_dimension(polys, gens, [0.0, 1e-9], rank_tol=1e-9)
    assert rep.ambiguous
    S, S2 = SELF
    pt = diagonal_base_point(S, np.random.default_rng(0))
    sv = jacobian_analysis(S, S2, pt).singular_values
    # a cutoff placed on a nonzero singular value cannot be called
    with pytest.raises(RankAmbiguity):
        jacobian_dimension(S, S2, pt, rank_tol=float(sv[3] / sv[0]))


def test_jacobian_analysis_reports_singular_values():
    S, S2 = SELF
    rep = jacobian_analysis(S, S2, diagonal_base_point(S, np.random.default_rng(1)))
    assert rep.nvars == 8 and rep.rank == 4 and len(rep.singular_values) == 5
    assert rep.to_json()["dim"] == 4


# collision probes ---------------------------------------------------------


def test_collision_found_on_worked_matrix():
    fmap = ResidualMap.linear(A5x3, x_ref=X_REF)
    rep = collision_search(fmap, X_REF, "sign", restarts=200, seed=0)
    assert rep.found and rep.residual < 1e-8
    assert not orbit_equivalent(rep.candidate, X_REF, "sign", 1e-6)
    assert orbit_equivalent(rep.candidate, Y_COLL, "sign", 1e-6)
    got = np.asarray(phaseless_linear(A5x3, rep.candidate.real), dtype=float)
    np.testing.assert_allclose(got, [900, 81, 1521, 144, 100], rtol=1e-8)


def test_no_collision_under_complement_property():
    A = random_complement_matrix()
    x = np.random.default_rng(3).standard_normal(4)
    rep = collision_search(ResidualMap.linear(A, x_ref=x), x, "sign", restarts=100, seed=0)
    assert not rep.found
    assert rep.equivalent_solutions > 0


def test_collision_search_is_reproducible():
    fmap = ResidualMap.linear(A5x3, x_ref=X_REF)
    a = collision_search(fmap, X_REF, "sign", restarts=30, seed=11)
    b = collision_search(fmap, X_REF, "sign", restarts=30, seed=11)
    assert a.to_json() == b.to_json()


def test_candidate_is_never_equivalent(rng):
    A = crandn(rng, 16, 4)
    x = crandn(rng, 4)
    rep = collision_search(ResidualMap.linear(A, x_ref=x), x, "phase", restarts=20, seed=2)
    assert not rep.found
    if rep.candidate is not None:
        assert not orbit_equivalent(rep.candidate, x, "phase", 1e-6)


def test_full_gabor_frame_has_no_collision():
    rng = np.random.default_rng(0)
    w, x = crandn(rng, 4), crandn(rng, 4)
    rep = collision_search(ResidualMap.gabor(w, x_ref=x), x, "phase", restarts=30, seed=0)
    assert not rep.found


def test_frog_collision_search_runs_on_bandlimited_input(rng):
    x = random_bandlimited(8, 4, rng)
    rep = collision_search(ResidualMap.frog(8, 2, x_ref=x, periodic=True), x, "phase", restarts=3, seed=0, max_iter=100)
    assert rep.restarts == 3
    assert rep.to_json()["group"] == rep.group


def test_collision_search_needs_restarts():
    with pytest.raises(ValueError):
        collision_search(ResidualMap.linear(A5x3, x_ref=X_REF), X_REF, restarts=0)
