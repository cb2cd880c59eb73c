import numpy as np
import pytest
from hypothesis import given, strategies as st

from pairmodel.ando import CommutingPair, build_ando_tuple
from pairmodel.errors import DimensionMismatch, NotCnu, NotProjection
from pairmodel.fixtures import offdiag_pair
from pairmodel.lift import (bcl_pair, compare_minimal_lifts, douglas_ando_lift, douglas_lift,
                            orbit_gram, schaffer_ando_lift, schaffer_lift, verify_lift)

from conftest import commuting_pairs, random_contraction, random_unitary, seeds


def test_schaffer_lift_of_zero_is_shift():
    L = schaffer_lift([[0.0]], N=2)
    np.testing.assert_array_equal(L.V1, np.eye(3, k=-1))


def test_schaffer_lift_of_unitary_is_itself(rng):
    U = random_unitary(rng, 3)
    L = schaffer_lift(U, N=4)
    np.testing.assert_allclose(L.V1, U, atol=1e-15)


def test_schaffer_lift_of_half_dilates():
    L = schaffer_lift([[0.5]], N=8)
    rep = verify_lift(L, T=[[0.5]], depth=8)
    assert rep.max_dilation < 1e-15
    assert rep.isometry_defect_interior < 1e-15
    assert rep.pi_isometry_defect == 0.0


def test_zero_pair_lift_is_shift():
    pair = CommutingPair([[0.0]], [[0.0]])
    L = schaffer_ando_lift(pair, N=3)
    np.testing.assert_allclose(L.V1, np.eye(7, k=-1), atol=1e-15)
    np.testing.assert_allclose(L.V2, np.eye(7, k=-1), atol=1e-15)


def test_second_operator_identity_collapses(rng):
    T = random_contraction(rng, 3, 0.8)
    pair = CommutingPair(T, np.eye(3))
    L = schaffer_ando_lift(pair, N=6)
    np.testing.assert_allclose(L.V2, np.eye(L.dim), atol=1e-12)
    np.testing.assert_allclose(L.V1, schaffer_lift(T, N=6).V1, atol=1e-12)


@given(seeds, st.integers(1, 4), st.integers(2, 5))
def test_bcl_product_is_shift(seed, F, N):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, F + 1))
    P = np.diag([1.0] * k + [0.0] * (F - k))
    U = random_unitary(rng, F)
    B1, B2 = bcl_pair(F, P, U, N)
    S = np.kron(np.eye(N, k=-1), np.eye(F))
    np.testing.assert_allclose(B1 @ B2, S, atol=1e-12)
    np.testing.assert_allclose(B2 @ B1, S, atol=1e-12)


def test_bcl_errors():
    with pytest.raises(DimensionMismatch):
        bcl_pair(1, [[1.0]], [[1.0]], 1)
    with pytest.raises(NotProjection):
        bcl_pair(1, [[0.5]], [[1.0]], 3)


def test_douglas_embedding_of_half():
    L = douglas_ando_lift(CommutingPair([[0.5]], [[1.0]]), N=8)
    expect = np.sqrt(3) / 2 * 0.5 ** np.arange(8)
    np.testing.assert_allclose(L.Pi[:, 0], expect, atol=1e-15)
    single = douglas_lift([[0.5]], N=8)
    np.testing.assert_allclose(single.Pi[:, 0], expect, atol=1e-15)


def test_douglas_embedding_isometric_for_offdiag_pair():
    fx = offdiag_pair()
    L = douglas_ando_lift(CommutingPair(fx.T1, fx.T2), N=24)
    G = L.Pi.conj().T @ L.Pi
    assert np.linalg.norm(G - np.eye(2), 2) <= 4.0 ** -20


@pytest.mark.parametrize("form", ["schaffer", "douglas"])
@given(p=commuting_pairs(scale=0.5))
def test_lift_report_within_budget(form, p):
    pair = CommutingPair(*p)
    build = schaffer_ando_lift if form == "schaffer" else douglas_ando_lift
    rep = verify_lift(build(pair, N=16), pair, depth=4)
    assert rep.commutator_norm < 1e-10
    assert rep.product_defect < 1e-10
    assert max(rep.intertwining_interior.values()) < 1e-10
    assert rep.max_dilation < 1e-9
    assert rep.isometry_defect_interior < 1e-10
    if form == "douglas":
        assert rep.tail_law_residual < 1e-10


def test_douglas_requires_cnu_unless_allowed():
    pair = CommutingPair(np.diag([np.exp(0.3j), 0.5]), np.diag([1.0, 0.4]))
    with pytest.raises(NotCnu):
        douglas_ando_lift(pair, N=8)
    L = douglas_ando_lift(pair, N=16, allow_unitary_part=True)
    assert L.tail == 1
    rep = verify_lift(L, pair, depth=4)
    assert rep.max_dilation < 1e-9 and rep.commutator_norm < 1e-12


def test_corrupted_tuple_breaks_commutation():
    fx = offdiag_pair(0.5, 0.3, 0.5, 0.3)
    pair = CommutingPair(fx.T1, fx.T2)
    t = build_ando_tuple(pair)
    t.U = t.U @ np.diag(np.exp(1j * np.arange(t.F_dim)))
    rep = verify_lift(schaffer_ando_lift(pair, t, N=8), pair, depth=3)
    assert rep.commutator_norm > 1e-3 or rep.max_dilation > 1e-3


def test_minimal_lifts_agree(rng):
    T = random_contraction(rng, 3, 0.5)
    assert compare_minimal_lifts(T, N=24) < 1e-10


def test_orbit_gram_of_shift():
    V = np.eye(4, k=-1)
    Pi = np.eye(4)[:, :1]
    np.testing.assert_array_equal(orbit_gram(V, Pi, 3), np.eye(4))
